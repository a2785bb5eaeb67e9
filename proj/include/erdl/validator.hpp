#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "erdl/diagnostics.hpp"
#include "erdl/model.hpp"
#include "erdl/naming.hpp"
#include "erdl/parser.hpp"

namespace erdl {

/// Words the singular-form heuristic must not flag ("Status", "Address", ...).
/// Matched case-insensitively against the final word of a name.
class PluralExceptions {
public:
  PluralExceptions() = default;
  explicit PluralExceptions(const std::vector<std::string>& words) {
    for (const auto& word : words) words_.insert(asciiLower(word));
  }

  static const PluralExceptions& defaults() {
    static const PluralExceptions instance{
        std::vector<std::string>{"Status", "Address", "Class", "Analysis", "Campus", "Bus"}};
    return instance;
  }

  /// One word per line; blank lines and '#' comments ignored.
  static PluralExceptions fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read plural-exception list '" + path + "'");
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
        line.pop_back();
      std::size_t start = 0;
      while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
      if (start < line.size()) words.push_back(line.substr(start));
    }
    return PluralExceptions(words);
  }

  bool contains(std::string_view word) const { return words_.count(asciiLower(word)) > 0; }

private:
  std::unordered_set<std::string> words_;
};

/// Suffix heuristic behind R-NAME-2: the final word of the name ends in 's'
/// and is not on the exception list. Never more than a warning.
inline bool checkSingularHeuristic(std::string_view name,
                                   const PluralExceptions& exceptions = PluralExceptions::defaults()) {
  const std::string word = finalWord(name);
  if (word.empty()) return false;
  if (toAsciiLower(word.back()) != 's') return false;
  return !exceptions.contains(word);
}

/// Shortest prefix of `entityName`, at least 3 letters long, that no other
/// name in the pool shares. Grows one letter at a time; once the candidate is
/// the whole name it is returned as is, uniqueness then resting on the names
/// being pairwise distinct.
inline std::string computePrefix(std::string_view entityName,
                                 const std::vector<std::string>& allRegularNames) {
  for (std::size_t k = 3;; ++k) {
    if (k >= entityName.size()) return std::string(entityName);
    const std::string_view candidate = entityName.substr(0, k);
    bool shared = false;
    for (const auto& other : allRegularNames) {
      if (other == entityName) continue;
      if (std::string_view(other).substr(0, k) == candidate) {
        shared = true;
        break;
      }
    }
    if (!shared) return std::string(candidate);
  }
}

/// Names eligible for prefix computation: regular, non-subtype entity types.
/// Weak entities and subtypes stay out of the pool on both sides.
inline std::vector<std::string> regularNonSubtypeNames(const ERModel& model) {
  std::vector<std::string> names;
  for (const auto& entity : model.entities)
    if (entity.kind == EntityKind::Regular && !entity.isSubtype()) names.push_back(entity.name);
  return names;
}

/// Conforming name for the designated key: prefix + base, where the base is
/// the current name with an already-correct prefix stripped, so the result is
/// a fixed point. The rule fires exactly when the current name does not start
/// with the prefix.
inline std::string expectedKeyName(const EntityType& entity,
                                   const std::vector<std::string>& allRegularNames) {
  const Attribute* key = entity.designatedKey();
  if (!key) return {};
  const std::string prefix = computePrefix(entity.name, allRegularNames);
  std::string base = key->name;
  if (base.starts_with(prefix)) base.erase(0, prefix.size());
  return prefix + base;
}

struct ValidateOptions {
  const PluralExceptions* pluralExceptions = nullptr; // nullptr = built-in defaults

  const PluralExceptions& exceptions() const {
    return pluralExceptions ? *pluralExceptions : PluralExceptions::defaults();
  }
};

namespace detail {

class Validator {
public:
  Validator(const ERModel& model, const std::map<std::string, SourceSpan>* spans,
            const ValidateOptions& options)
      : model_(model), spans_(spans), options_(options) {}

  std::vector<Diagnostic> run() {
    checkEntityNameDistinctness();
    for (const auto& entity : model_.entities) checkEntity(entity);
    for (const auto& rel : model_.relationships) checkRelationship(rel);
    sortDiagnostics(diagnostics_);
    return std::move(diagnostics_);
  }

private:
  void emit(std::string_view ruleId, std::string location, std::string message) {
    const RuleInfo* rule = findRule(ruleId);
    Diagnostic d;
    d.ruleId = std::string(ruleId);
    d.severity = rule->severity;
    d.fixable = rule->fixable;
    d.location = std::move(location);
    d.message = std::move(message);
    if (spans_) {
      auto it = spans_->find(d.location);
      if (it != spans_->end()) d.span = it->second;
    }
    diagnostics_.push_back(std::move(d));
  }

  // R-REG-4. Exact duplicates are already fatal in the parser and JSON
  // loader, so at lint level the rule catches near-duplicates that differ
  // only in letter case. Reported at the later declaration.
  void checkEntityNameDistinctness() {
    std::unordered_map<std::string, const EntityType*> byFoldedName;
    for (const auto& entity : model_.entities) {
      auto [it, inserted] = byFoldedName.emplace(asciiLower(entity.name), &entity);
      if (!inserted)
        emit("R-REG-4", entityPath(entity.name),
             "entity type name '" + entity.name + "' collides with '" + it->second->name +
                 "'; entity type names must be pairwise distinct");
    }
  }

  void checkEntity(const EntityType& entity) {
    checkName(entity.name, entityPath(entity.name), "entity type", /*pluralCheck=*/true);

    bool hasKey = false, hasPartial = false;
    for (const auto& attr : entity.attributes) {
      hasKey |= attr.isKey;
      hasPartial |= attr.isPartialKey;
      const std::string location = attrPath(entity.name, attr.name);
      checkName(attr.name, location, "attribute", /*pluralCheck=*/true);
      if (attr.isKey && attr.isMultivalued)
        emit("R-REG-2", location,
             "key attribute '" + attr.name + "' of entity '" + entity.name +
                 "' is multivalued; key attributes must stay atomic");
      if (attr.isKey && entity.kind == EntityKind::Weak)
        emit("R-WEAK-1", location,
             "weak entity '" + entity.name + "' declares key attribute '" + attr.name +
                 "'; weak entities have no own keys, only partial keys");
    }

    if (entity.kind == EntityKind::Regular && hasPartial) {
      std::string members;
      for (const auto& attr : entity.attributes)
        if (attr.isPartialKey) members += (members.empty() ? "" : ", ") + attr.name;
      emit("R-REG-3", entityPath(entity.name),
           "entity '" + entity.name + "' is identified by a combination of attributes (" +
               members + "); a key must be a single attribute");
    }

    if (entity.kind == EntityKind::Regular && !entity.isSubtype() && !hasKey && !hasPartial)
      emit("R-REG-1", entityPath(entity.name),
           "regular entity '" + entity.name + "' has no key attribute");

    if (entity.isSubtype()) {
      if (!resolveEntity(model_, *entity.supertypeName))
        emit("R-SUB-2", entityPath(entity.name),
             "supertype '" + *entity.supertypeName + "' of entity '" + entity.name +
                 "' does not resolve to an entity");
      if (entity.attributes.empty() && !participatesAnywhere(entity.name))
        emit("R-SUB-1", entityPath(entity.name),
             "subtype '" + entity.name +
                 "' has no own attribute and participates in no relationship");
    }

    if (entity.kind == EntityKind::Weak) checkWeakOwnership(entity);

    checkKeyPrefix(entity);
  }

  bool participatesAnywhere(std::string_view entityName) const {
    for (const auto& rel : model_.relationships)
      if (rel.hasParticipant(entityName)) return true;
    return false;
  }

  // R-WEAK-2, entity side.
  void checkWeakOwnership(const EntityType& entity) {
    std::vector<const RelationshipType*> identifying;
    for (const auto& rel : model_.relationships)
      if (rel.isIdentifying && rel.hasParticipant(entity.name)) identifying.push_back(&rel);
    if (identifying.size() != 1) {
      emit("R-WEAK-2", entityPath(entity.name),
           "weak entity '" + entity.name + "' participates in " +
               std::to_string(identifying.size()) +
               " identifying relationships; exactly one is required");
      return;
    }
    bool hasOwner = false;
    for (const auto& p : identifying.front()->participants) {
      const EntityType* participant = resolveEntity(model_, p.entityName);
      if (participant && participant->kind != EntityKind::Weak) hasOwner = true;
    }
    if (!hasOwner)
      emit("R-WEAK-2", entityPath(entity.name),
           "identifying relationship '" + identifying.front()->name + "' of weak entity '" +
               entity.name + "' has no non-weak owner");
  }

  // R-KEY-1: prefix conformance of the designated key of regular non-subtype
  // entity types.
  void checkKeyPrefix(const EntityType& entity) {
    if (entity.kind != EntityKind::Regular || entity.isSubtype()) return;
    const Attribute* key = entity.designatedKey();
    if (!key) return;
    if (prefixPool_.empty()) prefixPool_ = regularNonSubtypeNames(model_);
    const std::string prefix = computePrefix(entity.name, prefixPool_);
    if (key->name.starts_with(prefix)) return;
    emit("R-KEY-1", attrPath(entity.name, key->name),
         "key attribute '" + key->name + "' of entity '" + entity.name +
             "' does not carry the entity prefix '" + prefix + "' (expected '" +
             expectedKeyName(entity, prefixPool_) + "')");
  }

  void checkRelationship(const RelationshipType& rel) {
    checkName(rel.name, relPath(rel.name), "relationship type", /*pluralCheck=*/false);

    if (rel.participants.size() < 2)
      emit("R-REL-ARITY", relPath(rel.name),
           "relationship '" + rel.name + "' has " + std::to_string(rel.participants.size()) +
               " participant(s); at least two are required");

    for (std::size_t i = 0; i < rel.participants.size(); ++i) {
      const Cardinality& card = rel.participants[i].cardinality;
      if (!card.isValid())
        emit("R-CARD-1", participantPath(rel.name, i),
             "cardinality " + card.toString() + " of '" + rel.participants[i].entityName +
                 "' in relationship '" + rel.name + "' violates min <= max, max >= 1");
    }

    for (const auto& attr : rel.attributes)
      checkName(attr.name, relAttrPath(rel.name, attr.name), "attribute", /*pluralCheck=*/true);

    // R-WEAK-2, relationship side: an identifying relationship binds exactly
    // one weak entity.
    if (rel.isIdentifying) {
      std::size_t weakCount = 0;
      for (const auto& p : rel.participants) {
        const EntityType* participant = resolveEntity(model_, p.entityName);
        if (participant && participant->kind == EntityKind::Weak) ++weakCount;
      }
      if (weakCount != 1)
        emit("R-WEAK-2", relPath(rel.name),
             "identifying relationship '" + rel.name + "' binds " + std::to_string(weakCount) +
                 " weak entities; exactly one is required");
    }
  }

  // The common naming rules. Symbol and space offenses preempt the CamelCase
  // check: once the fixer has stripped them, re-casing is part of the same
  // repair. The plural heuristic skips relationship names, which are verb
  // forms in the notation ("Manages"), not nouns.
  void checkName(const std::string& name, const std::string& location, std::string_view what,
                 bool pluralCheck) {
    const bool symbols = hasForbiddenSymbol(name);
    const bool spaces = hasEmbeddedSpace(name);
    if (symbols)
      emit("R-NAME-3", location,
           std::string(what) + " name '" + name +
               "' contains characters other than letters; names are letters only");
    if (spaces)
      emit("R-NAME-4", location,
           std::string(what) + " name '" + name +
               "' contains spaces; words must be concatenated");
    if (!symbols && !spaces && !isCamelCase(name))
      emit("R-NAME-1", location,
           std::string(what) + " name '" + name +
               "' is not CamelCase; every word starts with a capital letter followed by "
               "lowercase letters");
    if (pluralCheck && checkSingularHeuristic(name, options_.exceptions()))
      emit("R-NAME-2", location,
           std::string(what) + " name '" + name + "' looks plural; nouns should be singular");
  }

  const ERModel& model_;
  const std::map<std::string, SourceSpan>* spans_;
  const ValidateOptions& options_;
  std::vector<Diagnostic> diagnostics_;
  std::vector<std::string> prefixPool_;
};

} // namespace detail

/// Runs the full rule catalog. Diagnostics are the output; a conforming model
/// yields an empty list. Ordered by (file, line, column, ruleId, location).
inline std::vector<Diagnostic> validate(const LocatedModel& located,
                                        const ValidateOptions& options = {}) {
  return detail::Validator(located.model, &located.spans, options).run();
}

/// Span-less overload for models that did not come from ERDL text.
inline std::vector<Diagnostic> validate(const ERModel& model,
                                        const ValidateOptions& options = {}) {
  return detail::Validator(model, nullptr, options).run();
}

} // namespace erdl
