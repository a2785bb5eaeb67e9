#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "erdl/error.hpp"

namespace erdl {

/// Min-max participation constraint. `max == nullopt` is the unbounded `N`.
/// The value is deliberately permissive: the linter must be able to hold a
/// pair like (4,2) in order to report it.
struct Cardinality {
  std::uint32_t min = 0;
  std::optional<std::uint32_t> max = 1;

  static Cardinality bounded(std::uint32_t min, std::uint32_t max) { return {min, max}; }
  static Cardinality unbounded(std::uint32_t min) { return {min, std::nullopt}; }

  bool isUnbounded() const { return !max.has_value(); }

  /// Acceptance predicate: unbounded max admits any min; a finite max must
  /// satisfy min <= max and max >= 1.
  bool isValid() const { return !max.has_value() || (min <= *max && *max >= 1); }

  std::string toString() const {
    return "(" + std::to_string(min) + "," + (max ? std::to_string(*max) : std::string("N")) + ")";
  }

  bool operator==(const Cardinality&) const = default;
};

struct Attribute {
  std::string name;
  bool isKey = false;
  bool isPartialKey = false;
  bool isMultivalued = false;

  bool operator==(const Attribute&) const = default;
};

enum class EntityKind { Regular, Weak };

inline const char* entityKindName(EntityKind kind) {
  return kind == EntityKind::Weak ? "Weak" : "Regular";
}

struct EntityType {
  std::string name;
  EntityKind kind = EntityKind::Regular;
  std::optional<std::string> supertypeName;
  std::vector<Attribute> attributes;
  std::optional<std::string> mostDesiredKey;

  bool isSubtype() const { return supertypeName.has_value(); }

  const Attribute* findAttribute(std::string_view attrName) const {
    for (const auto& attr : attributes)
      if (attr.name == attrName) return &attr;
    return nullptr;
  }

  /// The key attribute used for prefix naming and primary-key selection:
  /// the explicitly designated one, else the first declared key attribute.
  const Attribute* designatedKey() const {
    if (mostDesiredKey) return findAttribute(*mostDesiredKey);
    for (const auto& attr : attributes)
      if (attr.isKey) return &attr;
    return nullptr;
  }

  bool operator==(const EntityType&) const = default;
};

struct Participation {
  std::string entityName;
  Cardinality cardinality;

  bool operator==(const Participation&) const = default;
};

struct RelationshipType {
  std::string name;
  bool isIdentifying = false;
  std::vector<Participation> participants;
  std::vector<Attribute> attributes;

  bool hasParticipant(std::string_view entityName) const {
    for (const auto& p : participants)
      if (p.entityName == entityName) return true;
    return false;
  }

  bool operator==(const RelationshipType&) const = default;
};

struct ERModel {
  std::string name;
  std::vector<EntityType> entities;
  std::vector<RelationshipType> relationships;

  bool operator==(const ERModel&) const = default;
};

// Element paths address model elements in diagnostics, spans, fix reports,
// and relation provenance.
inline std::string entityPath(std::string_view entity) { return "entity:" + std::string(entity); }
inline std::string attrPath(std::string_view entity, std::string_view attr) {
  return "entity:" + std::string(entity) + "/attr:" + std::string(attr);
}
inline std::string relPath(std::string_view rel) { return "rel:" + std::string(rel); }
inline std::string relAttrPath(std::string_view rel, std::string_view attr) {
  return "rel:" + std::string(rel) + "/attr:" + std::string(attr);
}
inline std::string participantPath(std::string_view rel, std::size_t index) {
  return "rel:" + std::string(rel) + "/participant:" + std::to_string(index);
}

/// Exact, case-sensitive lookup. Absence is a value, not an error.
inline const EntityType* resolveEntity(const ERModel& model, std::string_view name) {
  for (const auto& entity : model.entities)
    if (entity.name == name) return &entity;
  return nullptr;
}

/// Supertype chain from the immediate supertype up to the root. The returned
/// names are whatever the model records; a link naming a missing entity ends
/// the walk after reporting that name. Revisits terminate the walk so that a
/// hand-built cyclic model cannot hang the caller.
inline std::vector<std::string> isaAncestors(const ERModel& model, std::string_view name) {
  const EntityType* entity = resolveEntity(model, name);
  if (!entity)
    throw Error(ErrorKind::UnknownEntity, "unknown entity '" + std::string(name) + "'");

  std::vector<std::string> chain;
  std::unordered_set<std::string> seen;
  seen.insert(std::string(name));
  while (entity && entity->supertypeName) {
    const std::string& super = *entity->supertypeName;
    if (!seen.insert(super).second) break;
    chain.push_back(super);
    entity = resolveEntity(model, super);
  }
  return chain;
}

enum class BinaryKind { OneToOne, OneToMany, ManyToMany };

inline const char* binaryKindName(BinaryKind kind) {
  switch (kind) {
  case BinaryKind::OneToOne: return "OneToOne";
  case BinaryKind::OneToMany: return "OneToMany";
  case BinaryKind::ManyToMany: return "ManyToMany";
  }
  return "?";
}

/// For OneToMany, the N-side is the participant whose max value is 1 (each of
/// its instances joins at most one relationship instance, so many of them can
/// attach to one instance of the other entity).
struct BinaryClassification {
  BinaryKind kind = BinaryKind::ManyToMany;
  std::optional<std::size_t> nSideIndex;
  std::optional<std::string> nSideEntity;
};

inline BinaryClassification classifyBinary(const RelationshipType& rel) {
  if (rel.participants.size() != 2)
    throw Error(ErrorKind::Arity, "relationship '" + rel.name + "' has " +
                                      std::to_string(rel.participants.size()) +
                                      " participants, classifyBinary needs exactly 2");
  const bool maxOne0 = rel.participants[0].cardinality.max == std::uint32_t{1};
  const bool maxOne1 = rel.participants[1].cardinality.max == std::uint32_t{1};
  if (maxOne0 && maxOne1) return {BinaryKind::OneToOne, std::nullopt, std::nullopt};
  if (maxOne0 || maxOne1) {
    const std::size_t n = maxOne0 ? 0 : 1;
    return {BinaryKind::OneToMany, n, rel.participants[n].entityName};
  }
  return {BinaryKind::ManyToMany, std::nullopt, std::nullopt};
}

/// One referential problem found by verifyReferential.
struct ReferentialProblem {
  ErrorKind kind;
  std::string location;
  std::string message;
};

/// Standalone verification pass for the invariants every accepted model must
/// satisfy: supertype and participant names resolve (a dangling supertype is
/// tolerated when `allowDanglingSupertype` is set, where it becomes a lint
/// finding instead), the Is-A graph is acyclic, and names are unique where
/// the model is keyed by them.
inline std::vector<ReferentialProblem> verifyReferential(const ERModel& model,
                                                         bool allowDanglingSupertype = false) {
  std::vector<ReferentialProblem> problems;

  std::unordered_set<std::string> entityNames;
  for (const auto& entity : model.entities) {
    if (!entityNames.insert(entity.name).second)
      problems.push_back({ErrorKind::Duplicate, entityPath(entity.name),
                          "duplicate entity name '" + entity.name + "'"});
    std::unordered_set<std::string> attrNames;
    for (const auto& attr : entity.attributes)
      if (!attrNames.insert(attr.name).second)
        problems.push_back({ErrorKind::Duplicate, attrPath(entity.name, attr.name),
                            "duplicate attribute '" + attr.name + "' in entity '" + entity.name +
                                "'"});
  }

  for (const auto& entity : model.entities) {
    if (entity.supertypeName && !allowDanglingSupertype && !resolveEntity(model, *entity.supertypeName))
      problems.push_back({ErrorKind::Reference, entityPath(entity.name),
                          "unknown supertype '" + *entity.supertypeName + "' of entity '" +
                              entity.name + "'"});
  }

  // Is-A cycle detection by chain walking. A cycle is reported at each member
  // entity whose walk returns to itself; self-subtyping is the length-1 case.
  for (const auto& entity : model.entities) {
    std::unordered_set<std::string> seen{entity.name};
    const EntityType* cursor = &entity;
    while (cursor && cursor->supertypeName) {
      const std::string& super = *cursor->supertypeName;
      if (!seen.insert(super).second) {
        if (super == entity.name)
          problems.push_back({ErrorKind::Cycle, entityPath(entity.name),
                              "Is-A cycle through entity '" + entity.name + "'"});
        break;
      }
      cursor = resolveEntity(model, super);
    }
  }

  std::unordered_set<std::string> relNames;
  for (const auto& rel : model.relationships) {
    if (!relNames.insert(rel.name).second)
      problems.push_back({ErrorKind::Duplicate, relPath(rel.name),
                          "duplicate relationship name '" + rel.name + "'"});
    for (std::size_t i = 0; i < rel.participants.size(); ++i)
      if (!resolveEntity(model, rel.participants[i].entityName))
        problems.push_back({ErrorKind::Reference, participantPath(rel.name, i),
                            "unknown entity '" + rel.participants[i].entityName +
                                "' in relationship '" + rel.name + "'"});
    std::unordered_set<std::string> attrNames;
    for (const auto& attr : rel.attributes)
      if (!attrNames.insert(attr.name).second)
        problems.push_back({ErrorKind::Duplicate, relAttrPath(rel.name, attr.name),
                            "duplicate attribute '" + attr.name + "' in relationship '" +
                                rel.name + "'"});
  }

  return problems;
}

/// Throwing flavor used by the parser and the JSON loader.
inline void requireReferential(const ERModel& model, bool allowDanglingSupertype = false) {
  auto problems = verifyReferential(model, allowDanglingSupertype);
  if (!problems.empty())
    throw Error(problems.front().kind, problems.front().message);
}

} // namespace erdl
