#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "erdl/parser.hpp"
#include "erdl/transformer.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"

using namespace erdl;

namespace {

ERModel parseText(const std::string& source) { return parse(source, "tf.erdl").model; }

const Relation* findRelation(const RelationalSchema& schema, const std::string& name) {
  for (const auto& rel : schema)
    if (rel.name == name) return &rel;
  return nullptr;
}

bool columnInAnyForeignKey(const Relation& rel, const std::string& column) {
  for (const auto& fk : rel.foreignKeys)
    for (const auto& col : fk.columns)
      if (col == column) return true;
  return false;
}

void checkForeignKeyClosure(const RelationalSchema& schema) {
  for (const auto& rel : schema) {
    REQUIRE_FALSE(rel.primaryKey.empty());
    for (const auto& pkCol : rel.primaryKey) REQUIRE(rel.findColumn(pkCol) != nullptr);
    std::set<std::string> names;
    for (const auto& col : rel.columns) REQUIRE(names.insert(col.name).second);
    for (const auto& fk : rel.foreignKeys) {
      const Relation* target = findRelation(schema, fk.references);
      REQUIRE(target != nullptr);
      REQUIRE(fk.columns.size() == fk.referencedColumns.size());
      for (const auto& col : fk.columns) REQUIRE(rel.findColumn(col) != nullptr);
      for (const auto& col : fk.referencedColumns) REQUIRE(target->findColumn(col) != nullptr);
    }
  }
}

} // namespace

TEST_CASE("figure1 produces the frozen golden schema and DDL") {
  const ERModel model = parseText(testsupport::corpusFile("figure1.erdl"));
  const RelationalSchema schema = transform(model);

  CHECK(dumpSchemaJson(schema) == testsupport::corpusFile("golden/figure1.schema.json"));
  CHECK(emitDdl(schema) == testsupport::corpusFile("golden/figure1.sql"));
}

TEST_CASE("the smallest model maps to a single relation") {
  const RelationalSchema schema = transform(parseText("entity E { key ENo\n  X }"));
  REQUIRE(schema.size() == 1);
  CHECK(schema[0].name == "E");
  REQUIRE(schema[0].columns.size() == 2);
  CHECK(schema[0].columns[0].name == "ENo");
  CHECK_FALSE(schema[0].columns[0].nullable);
  CHECK(schema[0].columns[1].name == "X");
  CHECK(schema[0].columns[1].nullable);
  CHECK(schema[0].primaryKey == std::vector<std::string>{"ENo"});
  CHECK(schema[0].foreignKeys.empty());
  CHECK(schema[0].provenance == "entity:E");
}

TEST_CASE("empty model, empty schema, empty DDL") {
  const RelationalSchema schema = transform(ERModel{});
  CHECK(schema.empty());
  CHECK(emitDdl(schema).empty());
}

TEST_CASE("transform refuses models with lint errors") {
  CHECK_THROWS_AS(transform(parseText("entity E { }")), Error);
  try {
    transform(parseText("entity E { }"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  // warnings do not block
  CHECK_NOTHROW(transform(parseText("entity Depot { key DepNo\n  multi Items }")));
}

TEST_CASE("binary relationship dispatch follows the classification table") {
  const char* base =
      "entity Alpha { key AlpNo }\n"
      "entity Beta { key BetNo }\n";

  // N-side (max = 1) takes the foreign key
  auto oneToMany = transform(parseText(std::string(base) + "rel R { Alpha (1,1), Beta (0,N) }"));
  CHECK(oneToMany.size() == 2);
  const Relation* alpha = findRelation(oneToMany, "Alpha");
  CHECK(alpha->findColumn("BetNo") != nullptr);
  CHECK_FALSE(alpha->findColumn("BetNo")->nullable); // min = 1 on the FK side
  CHECK(findRelation(oneToMany, "Beta")->foreignKeys.empty());

  // swapped sides swap the key
  auto swapped = transform(parseText(std::string(base) + "rel R { Alpha (0,N), Beta (0,1) }"));
  CHECK(findRelation(swapped, "Beta")->findColumn("AlpNo") != nullptr);
  CHECK(findRelation(swapped, "Beta")->findColumn("AlpNo")->nullable); // min = 0

  // both max = 1: mandatory side wins, tie goes to the first participant
  auto mandatory = transform(parseText(std::string(base) + "rel R { Alpha (0,1), Beta (1,1) }"));
  CHECK(findRelation(mandatory, "Beta")->findColumn("AlpNo") != nullptr);
  auto tie = transform(parseText(std::string(base) + "rel R { Alpha (1,1), Beta (1,1) }"));
  CHECK(findRelation(tie, "Alpha")->findColumn("BetNo") != nullptr);

  // both sides many: junction relation with composite key
  auto junction = transform(parseText(std::string(base) + "rel R { Alpha (0,N), Beta (1,5) }"));
  REQUIRE(junction.size() == 3);
  const Relation* r = findRelation(junction, "R");
  REQUIRE(r != nullptr);
  CHECK(r->primaryKey == std::vector<std::string>{"AlpNo", "BetNo"});
  CHECK(r->foreignKeys.size() == 2);
  CHECK(r->provenance == "rel:R");
}

TEST_CASE("relationship attributes travel with the foreign key") {
  const RelationalSchema schema = transform(parseText(
      "entity Alpha { key AlpNo }\n"
      "entity Beta { key BetNo }\n"
      "rel R { Alpha (1,1), Beta (0,N) attrs Since Note }"));
  const Relation* alpha = findRelation(schema, "Alpha");
  REQUIRE(alpha->findColumn("Since") != nullptr);
  CHECK(alpha->findColumn("Since")->nullable);
  CHECK(alpha->findColumn("Note") != nullptr);
}

TEST_CASE("n-ary relationships always become junctions") {
  const RelationalSchema schema = transform(parseText(
      "entity Alpha { key AlpNo }\n"
      "entity Beta { key BetNo }\n"
      "entity Gamma { key GamNo }\n"
      "rel Triple { Alpha (1,1), Beta (0,N), Gamma (2,9) attrs Note }"));
  const Relation* triple = findRelation(schema, "Triple");
  REQUIRE(triple != nullptr);
  CHECK(triple->primaryKey == std::vector<std::string>{"AlpNo", "BetNo", "GamNo"});
  CHECK(triple->foreignKeys.size() == 3);
  CHECK(triple->findColumn("Note")->nullable);
}

TEST_CASE("weak entities compose the owner key with their partial key") {
  const RelationalSchema schema = transform(parseText(
      "entity Employee { key EmpNo }\n"
      "weak entity Dependent { partialkey Name\n  Birthday }\n"
      "identifying rel DependentOf { Dependent (1,1), Employee (0,N) attrs Since }"));
  REQUIRE(schema.size() == 2); // the identifying relationship yields no relation
  const Relation* dependent = findRelation(schema, "Dependent");
  REQUIRE(dependent != nullptr);
  CHECK(dependent->primaryKey == std::vector<std::string>{"EmpNo", "Name"});
  CHECK(dependent->findColumn("Birthday")->nullable);
  CHECK(dependent->findColumn("Since") != nullptr); // identifying-rel attribute lands here
  REQUIRE(dependent->foreignKeys.size() == 1);
  CHECK(dependent->foreignKeys[0].references == "Employee");
}

TEST_CASE("subtype chains inherit the root primary key") {
  const RelationalSchema schema = transform(parseText(
      "entity Person { key PerNo }\n"
      "entity Employee isa Person { Salary }\n"
      "entity Manager isa Employee { Bonus }"));
  const Relation* manager = findRelation(schema, "Manager");
  REQUIRE(manager != nullptr);
  CHECK(manager->primaryKey == std::vector<std::string>{"PerNo"});
  REQUIRE(manager->foreignKeys.size() == 1);
  CHECK(manager->foreignKeys[0].references == "Employee");
  CHECK(findRelation(schema, "Employee")->foreignKeys[0].references == "Person");
}

TEST_CASE("subtype declared before its supertype still maps") {
  const RelationalSchema schema = transform(parseText(
      "entity Manager isa Employee { Bonus }\n"
      "entity Employee { key EmpNo }"));
  const Relation* manager = findRelation(schema, "Manager");
  REQUIRE(manager != nullptr);
  CHECK(manager->primaryKey == std::vector<std::string>{"EmpNo"});
}

TEST_CASE("multivalued attributes get their own relation") {
  const RelationalSchema schema = transform(parseText(
      "entity Department { key DepNo\n  multi Location }"));
  REQUIRE(schema.size() == 2);
  const Relation* locations = findRelation(schema, "DepartmentLocation");
  REQUIRE(locations != nullptr);
  CHECK(locations->primaryKey == std::vector<std::string>{"DepNo", "Location"});
  CHECK(locations->provenance == "entity:Department/attr:Location");
  CHECK_FALSE(locations->findColumn("Location")->nullable);
}

TEST_CASE("multivalued attribute of a weak entity uses the composite key") {
  const RelationalSchema schema = transform(parseText(
      "entity Employee { key EmpNo }\n"
      "weak entity Dependent { partialkey Name\n  multi Hobby }\n"
      "identifying rel DependentOf { Dependent (1,1), Employee (0,N) }"));
  const Relation* hobbies = findRelation(schema, "DependentHobby");
  REQUIRE(hobbies != nullptr);
  CHECK(hobbies->primaryKey == std::vector<std::string>{"EmpNo", "Name", "Hobby"});
}

TEST_CASE("non-designated keys become unique-annotated columns") {
  const RelationalSchema schema = transform(parseText(
      "entity Department {\n  key DepNo\n  key Name\n}"));
  const Relation* department = findRelation(schema, "Department");
  CHECK_FALSE(department->findColumn("DepNo")->unique);
  CHECK(department->findColumn("Name")->unique);
  CHECK_FALSE(department->findColumn("Name")->nullable);
  CHECK(emitDdl(schema).find("Name TEXT NOT NULL, -- unique") != std::string::npos);
}

TEST_CASE("self-referencing relationships rename the planted key") {
  const RelationalSchema schema = transform(parseText(
      "entity Employee { key EmpNo }\n"
      "rel Mentors { Employee (0,1), Employee (0,N) }"));
  const Relation* employee = findRelation(schema, "Employee");
  REQUIRE(employee != nullptr);
  REQUIRE(employee->findColumn("MentorsEmpNo") != nullptr);
  CHECK(employee->findColumn("MentorsEmpNo")->nullable);
  REQUIRE(employee->foreignKeys.size() == 1);
  CHECK(employee->foreignKeys[0].references == "Employee");

  const RelationalSchema junction = transform(parseText(
      "entity Employee { key EmpNo }\n"
      "rel WorksWith { Employee (0,N), Employee (0,N) }"));
  const Relation* worksWith = findRelation(junction, "WorksWith");
  REQUIRE(worksWith != nullptr);
  CHECK(worksWith->primaryKey ==
        std::vector<std::string>{"EmpNo", "WorksWithEmpNo"});
}

TEST_CASE("DDL is emitted in dependency order with name tiebreaks") {
  const ERModel model = parseText(testsupport::corpusFile("figure1.erdl"));
  const std::string ddl = emitDdl(transform(model));
  std::vector<std::string> tables;
  std::size_t pos = 0;
  while ((pos = ddl.find("CREATE TABLE ", pos)) != std::string::npos) {
    pos += 13;
    tables.push_back(ddl.substr(pos, ddl.find(' ', pos) - pos));
  }
  CHECK(tables == std::vector<std::string>{"Department", "DepartmentLocation", "Employee",
                                           "Dependent", "Manager", "Project", "WorksOn"});
}

TEST_CASE("foreign-key cycles downgrade to commented constraints") {
  // two 1:1 relationships in opposite directions force mutual references
  const RelationalSchema schema = transform(parseText(
      "entity Alpha { key AlpNo }\n"
      "entity Beta { key BetNo }\n"
      "rel Fwd { Alpha (1,1), Beta (0,N) }\n"
      "rel Bwd { Beta (1,1), Alpha (0,N) }"));
  const std::string ddl = emitDdl(schema);
  CHECK(ddl.find("-- note: cyclic foreign-key dependencies") != std::string::npos);
  CHECK(ddl.find("-- deferred (cyclic dependency): FOREIGN KEY") != std::string::npos);
  // both tables still appear
  CHECK(ddl.find("CREATE TABLE Alpha") != std::string::npos);
  CHECK(ddl.find("CREATE TABLE Beta") != std::string::npos);
}

TEST_CASE("transform and emitDdl are deterministic") {
  const ERModel model = parseText(testsupport::corpusFile("figure1.erdl"));
  const RelationalSchema a = transform(model);
  const RelationalSchema b = transform(model);
  CHECK(a == b);
  CHECK(emitDdl(a) == emitDdl(b));
  CHECK(dumpSchemaJson(a) == dumpSchemaJson(b));
}

TEST_CASE("attribute conservation and closure hold on generated models") {
  testsupport::ModelGenerator gen(0x5EED);
  testsupport::GenOptions opts;
  opts.conforming = true;
  int nonTrivial = 0;
  for (int i = 0; i < 150; ++i) {
    const ERModel model = gen.generate(opts);
    INFO(print(model));
    REQUIRE_FALSE(hasErrors(validate(model)));
    const RelationalSchema schema = transform(model);
    if (schema.size() > 1) ++nonTrivial;

    checkForeignKeyClosure(schema);

    // every entity yields exactly one relation; junction/multivalued counts match
    std::map<std::string, int> byProvenance;
    for (const auto& rel : schema) ++byProvenance[rel.provenance];
    std::size_t multivalued = 0;
    for (const auto& entity : model.entities) {
      CHECK(byProvenance[entityPath(entity.name)] == 1);
      for (const auto& attr : entity.attributes)
        if (attr.isMultivalued) {
          CHECK(byProvenance[attrPath(entity.name, attr.name)] == 1);
          ++multivalued;
        }
    }
    std::size_t junctions = 0;
    for (const auto& rel : model.relationships) {
      if (rel.isIdentifying) {
        CHECK(byProvenance.count(relPath(rel.name)) == 0);
        continue;
      }
      const bool junction =
          rel.participants.size() > 2 || classifyBinary(rel).kind == BinaryKind::ManyToMany;
      CHECK(byProvenance[relPath(rel.name)] == (junction ? 1 : 0));
      if (junction) ++junctions;
    }
    CHECK(schema.size() == model.entities.size() + multivalued + junctions);

    // attribute conservation: generated attribute names are globally unique,
    // so each must appear exactly once outside foreign-key duplications
    for (const auto& entity : model.entities) {
      for (const auto& attr : entity.attributes) {
        int occurrences = 0;
        for (const auto& rel : schema)
          if (rel.findColumn(attr.name) && !columnInAnyForeignKey(rel, attr.name)) ++occurrences;
        INFO(entity.name << "." << attr.name);
        CHECK(occurrences == 1);
      }
    }
    for (const auto& rel : model.relationships) {
      for (const auto& attr : rel.attributes) {
        int occurrences = 0;
        for (const auto& relation : schema)
          if (relation.findColumn(attr.name) && !columnInAnyForeignKey(relation, attr.name))
            ++occurrences;
        INFO(rel.name << "." << attr.name);
        CHECK(occurrences == 1);
      }
    }
  }
  CHECK(nonTrivial > 50); // the generator is actually exercising the mapper
}
