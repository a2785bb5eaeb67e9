#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "erdl/model.hpp"
#include "erdl/naming.hpp"
#include "erdl/validator.hpp"

namespace erdl {

struct RenameEntry {
  std::string location; // element path at the moment of the rename
  std::string oldName;
  std::string newName;
  std::string ruleId;

  bool operator==(const RenameEntry&) const = default;
};

struct SkippedFix {
  std::string location;
  std::string oldName;
  std::string attemptedName;
  std::string reason;

  bool operator==(const SkippedFix&) const = default;
};

struct FixReport {
  std::vector<RenameEntry> renames;
  std::vector<SkippedFix> skipped;
  std::size_t untouched = 0; // non-fixable diagnostics remaining after the fix
};

inline nlohmann::ordered_json fixReportToJson(const FixReport& report) {
  nlohmann::ordered_json j;
  j["renames"] = nlohmann::ordered_json::array();
  for (const auto& rename : report.renames) {
    nlohmann::ordered_json rj;
    rj["location"] = rename.location;
    rj["oldName"] = rename.oldName;
    rj["newName"] = rename.newName;
    rj["ruleId"] = rename.ruleId;
    j["renames"].push_back(std::move(rj));
  }
  j["skipped"] = nlohmann::ordered_json::array();
  for (const auto& skip : report.skipped) {
    nlohmann::ordered_json sj;
    sj["location"] = skip.location;
    sj["oldName"] = skip.oldName;
    sj["attemptedName"] = skip.attemptedName;
    sj["reason"] = skip.reason;
    j["skipped"].push_back(std::move(sj));
  }
  j["untouched"] = report.untouched;
  return j;
}

namespace detail {

inline bool nameNeedsNormalization(std::string_view name) {
  if (hasForbiddenSymbol(name) || hasEmbeddedSpace(name)) return true;
  return !isCamelCase(name);
}

inline std::string normalizationRuleId(std::string_view name) {
  if (hasForbiddenSymbol(name)) return "R-NAME-3";
  if (hasEmbeddedSpace(name)) return "R-NAME-4";
  return "R-NAME-1";
}

class Fixer {
public:
  Fixer(const ERModel& model, const PluralExceptions& exceptions)
      : model_(model), exceptions_(exceptions) {}

  std::pair<ERModel, FixReport> run() {
    fixEntityNames();
    fixEntityAttributes();
    fixRelationshipNames();
    fixRelationshipAttributes();
    fixKeyPrefixes();

    ValidateOptions options;
    options.pluralExceptions = &exceptions_;
    for (const auto& d : validate(model_, options))
      if (!d.fixable) ++report_.untouched;
    return {std::move(model_), std::move(report_)};
  }

private:
  void recordRename(std::string location, const std::string& oldName, const std::string& newName,
                    std::string ruleId) {
    report_.renames.push_back({std::move(location), oldName, newName, std::move(ruleId)});
  }

  void recordSkip(std::string location, const std::string& oldName, const std::string& attempted,
                  std::string reason) {
    report_.skipped.push_back({std::move(location), oldName, attempted, std::move(reason)});
  }

  // Entity renames rewrite every reference: supertype links and relationship
  // participants. Collisions are judged case-insensitively so a repair can
  // never manufacture an R-REG-4 violation.
  void fixEntityNames() {
    for (auto& entity : model_.entities) {
      if (!nameNeedsNormalization(entity.name)) continue;
      const std::string proposed = normalizeName(entity.name);
      const std::string location = entityPath(entity.name);
      if (proposed.empty()) {
        recordSkip(location, entity.name, proposed, "no letters left after normalization");
        continue;
      }
      bool collides = false;
      for (const auto& other : model_.entities)
        if (&other != &entity && asciiLower(other.name) == asciiLower(proposed)) collides = true;
      if (collides) {
        recordSkip(location, entity.name, proposed, "another entity already uses this name");
        continue;
      }
      const std::string oldName = entity.name;
      recordRename(location, oldName, proposed, normalizationRuleId(oldName));
      entity.name = proposed;
      for (auto& other : model_.entities)
        if (other.supertypeName == oldName) other.supertypeName = proposed;
      for (auto& rel : model_.relationships)
        for (auto& p : rel.participants)
          if (p.entityName == oldName) p.entityName = proposed;
    }
  }

  void fixEntityAttributes() {
    for (auto& entity : model_.entities) {
      for (auto& attr : entity.attributes) {
        if (!nameNeedsNormalization(attr.name)) continue;
        const std::string proposed = normalizeName(attr.name);
        const std::string location = attrPath(entity.name, attr.name);
        if (proposed.empty()) {
          recordSkip(location, attr.name, proposed, "no letters left after normalization");
          continue;
        }
        if (entity.findAttribute(proposed)) {
          recordSkip(location, attr.name, proposed,
                     "another attribute of this entity already uses this name");
          continue;
        }
        const std::string oldName = attr.name;
        recordRename(location, oldName, proposed, normalizationRuleId(oldName));
        attr.name = proposed;
        if (entity.mostDesiredKey == oldName) entity.mostDesiredKey = proposed;
      }
    }
  }

  void fixRelationshipNames() {
    for (auto& rel : model_.relationships) {
      if (!nameNeedsNormalization(rel.name)) continue;
      const std::string proposed = normalizeName(rel.name);
      const std::string location = relPath(rel.name);
      if (proposed.empty()) {
        recordSkip(location, rel.name, proposed, "no letters left after normalization");
        continue;
      }
      bool collides = false;
      for (const auto& other : model_.relationships)
        if (&other != &rel && other.name == proposed) collides = true;
      if (collides) {
        recordSkip(location, rel.name, proposed, "another relationship already uses this name");
        continue;
      }
      recordRename(location, rel.name, proposed, normalizationRuleId(rel.name));
      rel.name = proposed;
    }
  }

  void fixRelationshipAttributes() {
    for (auto& rel : model_.relationships) {
      for (auto& attr : rel.attributes) {
        if (!nameNeedsNormalization(attr.name)) continue;
        const std::string proposed = normalizeName(attr.name);
        const std::string location = relAttrPath(rel.name, attr.name);
        if (proposed.empty()) {
          recordSkip(location, attr.name, proposed, "no letters left after normalization");
          continue;
        }
        bool collides = false;
        for (const auto& other : rel.attributes)
          if (&other != &attr && other.name == proposed) collides = true;
        if (collides) {
          recordSkip(location, attr.name, proposed,
                     "another attribute of this relationship already uses this name");
          continue;
        }
        recordRename(location, attr.name, proposed, normalizationRuleId(attr.name));
        attr.name = proposed;
      }
    }
  }

  // Key-prefix renaming runs last, against the pool of post-normalization
  // entity names, computed once before any key rename.
  void fixKeyPrefixes() {
    const std::vector<std::string> pool = regularNonSubtypeNames(model_);
    for (auto& entity : model_.entities) {
      if (entity.kind != EntityKind::Regular || entity.isSubtype()) continue;
      const Attribute* key = entity.designatedKey();
      if (!key) continue;
      const std::string prefix = computePrefix(entity.name, pool);
      if (key->name.starts_with(prefix)) continue;
      const std::string location = attrPath(entity.name, key->name);
      // A prefix slice of a CamelCase name is itself CamelCase, so the rename
      // below cannot introduce a new naming violation unless one of the two
      // names is still diseased after a skipped normalization.
      if (nameNeedsNormalization(entity.name) || nameNeedsNormalization(key->name)) {
        recordSkip(location, key->name, prefix + key->name,
                   "entity or key name kept a nonconforming spelling, prefix rename skipped");
        continue;
      }
      const std::string proposed = prefix + key->name;
      if (entity.findAttribute(proposed)) {
        recordSkip(location, key->name, proposed,
                   "another attribute of this entity already uses this name");
        continue;
      }
      const std::string oldName = key->name;
      recordRename(location, oldName, proposed, "R-KEY-1");
      for (auto& attr : entity.attributes)
        if (attr.name == oldName) attr.name = proposed;
      if (entity.mostDesiredKey == oldName) entity.mostDesiredKey = proposed;
    }
  }

  ERModel model_;
  const PluralExceptions& exceptions_;
  FixReport report_;
};

} // namespace detail

/// Applies every fixable repair: the symbol/space/casing normalization
/// pipeline on all names, then the key-prefix renaming. References are
/// rewritten consistently; a repair that would collide with an existing name
/// is skipped and reported instead, leaving the original diagnostic in place.
inline std::pair<ERModel, FixReport> fix(const ERModel& model,
                                         const PluralExceptions& exceptions = PluralExceptions::defaults()) {
  return detail::Fixer(model, exceptions).run();
}

} // namespace erdl
