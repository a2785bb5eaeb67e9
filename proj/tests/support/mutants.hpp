#pragma once

#include <functional>
#include <string>
#include <vector>

#include "erdl/model.hpp"

namespace testsupport {

/// One single-fault corpus file per rule in the catalog, with its designated
/// diagnostic and a repair that removes the offending element.
struct MutantCase {
  std::string file;
  std::string ruleId;
  std::string location;
  bool warningOnly;
  std::function<void(erdl::ERModel&)> repair;
};

inline const std::vector<MutantCase>& mutantCases() {
  using erdl::ERModel;
  static const std::vector<MutantCase> cases{
      {"mutants/mutant_reg1.erdl", "R-REG-1", "entity:Employee", false,
       [](ERModel& m) { m.entities[0].attributes[0].isKey = true; }},
      {"mutants/mutant_reg2.erdl", "R-REG-2", "entity:Department/attr:DepNo", false,
       [](ERModel& m) { m.entities[0].attributes[0].isMultivalued = false; }},
      {"mutants/mutant_reg3.erdl", "R-REG-3", "entity:EmployeeBankAccount", false,
       [](ERModel& m) {
         for (auto& attr : m.entities[0].attributes) attr.isPartialKey = false;
         m.entities[0].attributes[0].isKey = true;
       }},
      {"mutants/mutant_reg4.erdl", "R-REG-4", "entity:Notebook", false,
       [](ERModel& m) { m.entities.pop_back(); }},
      {"mutants/mutant_sub1.erdl", "R-SUB-1", "entity:Manager", false,
       [](ERModel& m) {
         m.entities[1].attributes.push_back({"Grade", false, false, false});
       }},
      {"mutants/mutant_sub2.json", "R-SUB-2", "entity:Manager", false,
       [](ERModel& m) { m.entities[0].supertypeName.reset(); }},
      {"mutants/mutant_weak1.erdl", "R-WEAK-1", "entity:Dependent/attr:Name", false,
       [](ERModel& m) { m.entities[1].attributes[0].isKey = false; }},
      {"mutants/mutant_weak2.erdl", "R-WEAK-2", "entity:Dependent", false,
       [](ERModel& m) { m.relationships[0].isIdentifying = true; }},
      {"mutants/mutant_key.erdl", "R-KEY-1", "entity:Department/attr:No", false,
       [](ERModel& m) {
         m.entities[1].attributes[0].name = "DepNo";
       }},
      {"mutants/mutant_name1.erdl", "R-NAME-1", "entity:Department/attr:locationName", false,
       [](ERModel& m) { m.entities[0].attributes[1].name = "LocationName"; }},
      {"mutants/mutant_name2.erdl", "R-NAME-2", "entity:Department/attr:Locations", true,
       [](ERModel& m) { m.entities[0].attributes[1].name = "Location"; }},
      {"mutants/mutant_name3.erdl", "R-NAME-3", "entity:Employee/attr:Emp_No", false,
       [](ERModel& m) { m.entities[0].attributes[0].name = "EmpNo"; }},
      {"mutants/mutant_name4.erdl", "R-NAME-4", "entity:Project/attr:Start Date", false,
       [](ERModel& m) { m.entities[0].attributes[1].name = "StartDate"; }},
      {"mutants/mutant_card.erdl", "R-CARD-1", "rel:Assigned/participant:1", false,
       [](ERModel& m) {
         m.relationships[0].participants[1].cardinality = erdl::Cardinality::bounded(4, 12);
       }},
      {"mutants/mutant_arity.erdl", "R-REL-ARITY", "rel:Works", false,
       [](ERModel& m) {
         m.relationships[0].participants.push_back(
             {"Employee", erdl::Cardinality::unbounded(0)});
       }},
  };
  return cases;
}

inline bool isJsonFile(const std::string& name) {
  return name.size() >= 5 && name.substr(name.size() - 5) == ".json";
}

} // namespace testsupport
