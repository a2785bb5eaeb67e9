#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "erdl/model.hpp"
#include "erdl/validator.hpp"

namespace erdl {

struct Column {
  std::string name;
  bool nullable = false;
  bool unique = false; // non-primary key attribute, annotated in DDL

  bool operator==(const Column&) const = default;
};

struct ForeignKey {
  std::vector<std::string> columns;
  std::string references;
  std::vector<std::string> referencedColumns;

  bool operator==(const ForeignKey&) const = default;
};

struct Relation {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::string> primaryKey;
  std::vector<ForeignKey> foreignKeys;
  std::string provenance;

  const Column* findColumn(std::string_view name) const {
    for (const auto& col : columns)
      if (col.name == name) return &col;
    return nullptr;
  }

  bool operator==(const Relation&) const = default;
};

using RelationalSchema = std::vector<Relation>;

namespace detail {

class Transformer {
public:
  explicit Transformer(const ERModel& model) : model_(model) {}

  RelationalSchema run() {
    mapRegularEntities();     // step 1
    mapWeakAndSubtypes();     // steps 2 and 3, in identity-dependency order
    mapMultivaluedAttrs();    // step 4
    mapBinaryFunctional();    // step 5
    mapJunctions();           // step 6
    return std::move(schema_);
  }

private:
  Relation& relationOf(const std::string& entityName) { return schema_[entityIndex_.at(entityName)]; }

  bool hasRelationFor(const std::string& entityName) const {
    return entityIndex_.count(entityName) > 0;
  }

  std::string uniqueRelationName(std::string base) {
    std::string name = base;
    int suffix = 2;
    while (usedRelationNames_.count(name)) name = base + std::to_string(suffix++);
    usedRelationNames_.insert(name);
    return name;
  }

  Relation& addEntityRelation(const EntityType& entity) {
    Relation rel;
    rel.name = uniqueRelationName(entity.name);
    rel.provenance = entityPath(entity.name);
    entityIndex_[entity.name] = schema_.size();
    schema_.push_back(std::move(rel));
    return schema_.back();
  }

  // Copies the referenced relation's primary-key columns into `target`,
  // renaming on collision (context name, then numeric suffixes), and records
  // the foreign key. `reserved` holds names that later columns will occupy.
  std::vector<std::string> plantForeignKey(Relation& target, const Relation& referenced,
                                           const std::string& context, bool nullable,
                                           const std::set<std::string>& reserved) {
    std::vector<std::string> planted;
    for (const auto& pkCol : referenced.primaryKey) {
      std::string name = pkCol;
      if (target.findColumn(name) || reserved.count(name)) name = context + pkCol;
      int suffix = 2;
      while (target.findColumn(name) || reserved.count(name))
        name = context + pkCol + std::to_string(suffix++);
      target.columns.push_back({name, nullable, false});
      planted.push_back(std::move(name));
    }
    target.foreignKeys.push_back({planted, referenced.name, referenced.primaryKey});
    return planted;
  }

  void appendOwnAttributes(Relation& rel, const EntityType& entity) {
    for (const auto& attr : entity.attributes) {
      if (attr.isMultivalued) continue; // step 4 gives these their own relation
      const bool alternateKey = attr.isKey && !isDesignatedKeyOfPrimary(entity, attr);
      rel.columns.push_back({attr.name, /*nullable=*/!(attr.isKey || attr.isPartialKey),
                             /*unique=*/alternateKey});
    }
  }

  // Relationship attributes landing in an existing relation keep their name
  // when free, otherwise take the relationship name as a disambiguator.
  void appendRelationshipAttribute(Relation& target, const RelationshipType& rel,
                                   const Attribute& attr) {
    std::string name = attr.name;
    if (target.findColumn(name)) name = rel.name + attr.name;
    int suffix = 2;
    while (target.findColumn(name)) name = rel.name + attr.name + std::to_string(suffix++);
    target.columns.push_back({name, true, false});
  }

  static bool isDesignatedKey(const EntityType& entity, const Attribute& attr) {
    const Attribute* key = entity.designatedKey();
    return key && key == &attr;
  }

  // The designated key becomes the primary key only for regular non-subtype
  // entities; every other key attribute is an alternate key.
  static bool isDesignatedKeyOfPrimary(const EntityType& entity, const Attribute& attr) {
    return entity.kind == EntityKind::Regular && !entity.isSubtype() &&
           isDesignatedKey(entity, attr);
  }

  // Step 1: each regular non-subtype entity becomes a relation of its
  // singlevalued attributes with the designated key as primary key. The
  // validation gate guarantees the key exists; the fallback keeps the
  // invariant for callers that bypass it.
  void mapRegularEntities() {
    for (const auto& entity : model_.entities) {
      if (entity.kind != EntityKind::Regular || entity.isSubtype()) continue;
      Relation& rel = addEntityRelation(entity);
      appendOwnAttributes(rel, entity);
      if (const Attribute* key = entity.designatedKey())
        rel.primaryKey = {key->name};
      else if (!rel.columns.empty())
        rel.primaryKey = {rel.columns.front().name};
    }
  }

  const RelationshipType* identifyingRelationshipOf(const EntityType& weak) const {
    for (const auto& rel : model_.relationships)
      if (rel.isIdentifying && rel.hasParticipant(weak.name)) return &rel;
    return nullptr;
  }

  // Steps 2 and 3. A weak entity needs its owner's relation, a subtype its
  // supertype's, so the two steps run as one worklist that settles in
  // dependency order (weak entities first within each pass, matching the
  // step numbering for independent entities).
  void mapWeakAndSubtypes() {
    std::vector<const EntityType*> pending;
    for (const auto& entity : model_.entities)
      if (entity.kind == EntityKind::Weak || entity.isSubtype()) pending.push_back(&entity);

    while (!pending.empty()) {
      std::vector<const EntityType*> next;
      for (const bool weakPhase : {true, false}) {
        for (const EntityType* entity : pending) {
          const bool isWeak = entity->kind == EntityKind::Weak;
          if (isWeak != weakPhase) continue;
          const bool ready =
              isWeak ? weakOwnersReady(*entity) : hasRelationFor(*entity->supertypeName);
          if (!ready) {
            next.push_back(entity);
            continue;
          }
          if (isWeak)
            mapWeakEntity(*entity);
          else
            mapSubtype(*entity);
        }
      }
      if (next.size() == pending.size())
        throw Error(ErrorKind::Precondition,
                    "identity dependency cycle between weak entities and subtypes");
      pending = std::move(next);
    }
  }

  bool weakOwnersReady(const EntityType& weak) const {
    const RelationshipType* idRel = identifyingRelationshipOf(weak);
    if (!idRel) return true; // nothing to plant; validation already failed upstream
    for (const auto& p : idRel->participants) {
      const EntityType* owner = resolveEntity(model_, p.entityName);
      if (owner && owner->kind != EntityKind::Weak && !hasRelationFor(owner->name)) return false;
    }
    return true;
  }

  // Step 2: owner primary key(s) as foreign key plus own singlevalued
  // attributes; primary key = owner key + partial keys. Attributes of the
  // identifying relationship land here too, it produces no relation of its
  // own.
  void mapWeakEntity(const EntityType& entity) {
    const RelationshipType* idRel = identifyingRelationshipOf(entity);
    Relation& rel = addEntityRelation(entity);

    std::set<std::string> reserved;
    for (const auto& attr : entity.attributes)
      if (!attr.isMultivalued) reserved.insert(attr.name);
    if (idRel)
      for (const auto& attr : idRel->attributes) reserved.insert(attr.name);

    std::vector<std::string> ownerCols;
    if (idRel) {
      for (const auto& p : idRel->participants) {
        const EntityType* owner = resolveEntity(model_, p.entityName);
        if (!owner || owner->kind == EntityKind::Weak) continue;
        auto planted = plantForeignKey(rel, relationOf(owner->name), idRel->name,
                                       /*nullable=*/false, reserved);
        ownerCols.insert(ownerCols.end(), planted.begin(), planted.end());
      }
    }
    appendOwnAttributes(rel, entity);
    if (idRel)
      for (const auto& attr : idRel->attributes) appendRelationshipAttribute(rel, *idRel, attr);

    rel.primaryKey = ownerCols;
    for (const auto& attr : entity.attributes)
      if (attr.isPartialKey && !attr.isMultivalued) rel.primaryKey.push_back(attr.name);
    if (rel.primaryKey.empty() && !rel.columns.empty())
      rel.primaryKey.push_back(rel.columns.front().name); // degenerate unvalidated model
  }

  // Step 3: supertype primary key as both primary key and foreign key, plus
  // own attributes.
  void mapSubtype(const EntityType& entity) {
    Relation& rel = addEntityRelation(entity);

    std::set<std::string> reserved;
    for (const auto& attr : entity.attributes)
      if (!attr.isMultivalued) reserved.insert(attr.name);

    rel.primaryKey = plantForeignKey(rel, relationOf(*entity.supertypeName),
                                     *entity.supertypeName, /*nullable=*/false, reserved);
    appendOwnAttributes(rel, entity);
  }

  // Step 4: every multivalued attribute becomes Owner+Attribute(owner key,
  // value), primary key over all columns.
  void mapMultivaluedAttrs() {
    for (const auto& entity : model_.entities) {
      if (!hasRelationFor(entity.name)) continue; // unvalidated leftovers
      for (const auto& attr : entity.attributes) {
        if (!attr.isMultivalued) continue;
        Relation rel;
        rel.name = uniqueRelationName(entity.name + attr.name);
        rel.provenance = attrPath(entity.name, attr.name);
        std::set<std::string> reserved{attr.name};
        auto planted = plantForeignKey(rel, relationOf(entity.name), entity.name,
                                       /*nullable=*/false, reserved);
        rel.columns.push_back({attr.name, false, false});
        rel.primaryKey = planted;
        rel.primaryKey.push_back(attr.name);
        schema_.push_back(std::move(rel));
      }
    }
  }

  bool relationParticipantsMapped(const RelationshipType& rel) const {
    for (const auto& p : rel.participants)
      if (!hasRelationFor(p.entityName)) return false;
    return true;
  }

  // Step 5: binary 1:1 and 1:N relationships become a foreign key on the
  // N-side relation (for 1:1 the mandatory side, tie broken toward the first
  // participant); relationship attributes travel with the foreign key.
  void mapBinaryFunctional() {
    for (const auto& rel : model_.relationships) {
      if (rel.isIdentifying || rel.participants.size() != 2) continue;
      if (!relationParticipantsMapped(rel)) continue;
      const auto classification = classifyBinary(rel);
      if (classification.kind == BinaryKind::ManyToMany) continue;

      std::size_t fkSide;
      if (classification.kind == BinaryKind::OneToMany) {
        fkSide = *classification.nSideIndex;
      } else {
        const bool mandatory0 = rel.participants[0].cardinality.min >= 1;
        const bool mandatory1 = rel.participants[1].cardinality.min >= 1;
        fkSide = (!mandatory0 && mandatory1) ? 1 : 0;
      }
      const std::size_t refSide = 1 - fkSide;

      Relation& target = relationOf(rel.participants[fkSide].entityName);
      const Relation& referenced = relationOf(rel.participants[refSide].entityName);
      std::set<std::string> reserved;
      for (const auto& attr : rel.attributes) reserved.insert(attr.name);
      const bool nullable = rel.participants[fkSide].cardinality.min == 0;
      plantForeignKey(target, referenced, rel.name, nullable, reserved);
      for (const auto& attr : rel.attributes) appendRelationshipAttribute(target, rel, attr);
    }
  }

  // Step 6: binary M:N and n-ary relationships become a junction relation
  // over all participants' primary keys.
  void mapJunctions() {
    for (const auto& rel : model_.relationships) {
      if (rel.isIdentifying) continue;
      if (rel.participants.size() == 2 &&
          classifyBinary(rel).kind != BinaryKind::ManyToMany)
        continue;
      if (rel.participants.size() < 2) continue; // unvalidated leftovers
      if (!relationParticipantsMapped(rel)) continue;

      Relation junction;
      junction.name = uniqueRelationName(rel.name);
      junction.provenance = relPath(rel.name);
      std::set<std::string> reserved;
      for (const auto& attr : rel.attributes) reserved.insert(attr.name);
      for (const auto& p : rel.participants) {
        auto planted = plantForeignKey(junction, relationOf(p.entityName), rel.name,
                                       /*nullable=*/false, reserved);
        junction.primaryKey.insert(junction.primaryKey.end(), planted.begin(), planted.end());
      }
      for (const auto& attr : rel.attributes) junction.columns.push_back({attr.name, true, false});
      schema_.push_back(std::move(junction));
    }
  }

  const ERModel& model_;
  RelationalSchema schema_;
  std::unordered_map<std::string, std::size_t> entityIndex_;
  std::unordered_set<std::string> usedRelationNames_;
};

} // namespace detail

/// Classical entity-relationship to relational mapping for conforming models.
/// Refuses models that still carry Error-severity diagnostics; warnings are
/// allowed through.
inline RelationalSchema transform(const ERModel& model) {
  auto diagnostics = validate(model);
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error)
      throw Error(ErrorKind::Precondition,
                  "model has lint errors, fix them before transforming (first: " + d.ruleId +
                      " at " + d.location + ")");
  return detail::Transformer(model).run();
}

/// Deterministic CREATE TABLE script: referenced relations before referencing
/// ones, ties broken by name; every column is a generic text column; primary
/// and foreign keys inline. Cycles in the foreign-key graph downgrade the
/// unresolvable constraints to comments.
inline std::string emitDdl(const RelationalSchema& schema) {
  std::map<std::string, const Relation*> byName;
  for (const auto& rel : schema) byName.emplace(rel.name, &rel);

  std::set<std::string> emitted;
  std::vector<std::pair<const Relation*, bool>> order; // relation, forced by cycle
  std::set<std::string> remaining;
  for (const auto& [name, rel] : byName) remaining.insert(name);

  while (!remaining.empty()) {
    const Relation* pick = nullptr;
    bool forced = false;
    for (const auto& name : remaining) { // set iteration = name order
      const Relation* rel = byName.at(name);
      bool ready = true;
      for (const auto& fk : rel->foreignKeys)
        if (fk.references != rel->name && !emitted.count(fk.references) &&
            byName.count(fk.references))
          ready = false;
      if (ready) {
        pick = rel;
        break;
      }
    }
    if (!pick) { // foreign-key cycle: force the alphabetically first relation
      pick = byName.at(*remaining.begin());
      forced = true;
    }
    order.emplace_back(pick, forced);
    emitted.insert(pick->name);
    remaining.erase(pick->name);
  }

  std::string out;
  bool anyDeferred = false;
  std::string body;
  std::set<std::string> done;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const auto& [rel, forced] = order[idx];
    std::vector<std::pair<std::string, std::string>> clauses; // text, trailing comment
    for (const auto& col : rel->columns) {
      std::string line = "  " + col.name + " TEXT";
      if (!col.nullable) line += " NOT NULL";
      clauses.emplace_back(std::move(line), col.unique ? " -- unique" : "");
    }
    std::string pk = "  PRIMARY KEY (";
    for (std::size_t i = 0; i < rel->primaryKey.size(); ++i)
      pk += (i ? ", " : "") + rel->primaryKey[i];
    pk += ")";
    clauses.emplace_back(std::move(pk), "");

    std::vector<std::string> deferred;
    for (const auto& fk : rel->foreignKeys) {
      std::string line = "FOREIGN KEY (";
      for (std::size_t i = 0; i < fk.columns.size(); ++i) line += (i ? ", " : "") + fk.columns[i];
      line += ") REFERENCES " + fk.references + " (";
      for (std::size_t i = 0; i < fk.referencedColumns.size(); ++i)
        line += (i ? ", " : "") + fk.referencedColumns[i];
      line += ")";
      const bool unresolved = fk.references != rel->name && !done.count(fk.references) &&
                              byName.count(fk.references);
      if (forced && unresolved) {
        deferred.push_back("  -- deferred (cyclic dependency): " + line);
        anyDeferred = true;
      } else {
        clauses.emplace_back("  " + line, "");
      }
    }

    body += "CREATE TABLE " + rel->name + " (\n";
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      body += clauses[i].first;
      if (i + 1 < clauses.size()) body += ",";
      body += clauses[i].second;
      body += "\n";
    }
    for (const auto& line : deferred) body += line + "\n";
    body += ");\n";
    done.insert(rel->name);
    if (idx + 1 < order.size()) body += "\n";
  }

  if (anyDeferred)
    out += "-- note: cyclic foreign-key dependencies; deferred constraints are emitted as "
           "comments\n\n";
  out += body;
  return out;
}

inline nlohmann::ordered_json schemaToJson(const RelationalSchema& schema) {
  nlohmann::ordered_json root;
  root["relations"] = nlohmann::ordered_json::array();
  for (const auto& rel : schema) {
    nlohmann::ordered_json rj;
    rj["name"] = rel.name;
    rj["columns"] = nlohmann::ordered_json::array();
    for (const auto& col : rel.columns) {
      nlohmann::ordered_json cj;
      cj["name"] = col.name;
      cj["nullable"] = col.nullable;
      cj["unique"] = col.unique;
      rj["columns"].push_back(std::move(cj));
    }
    rj["primaryKey"] = rel.primaryKey;
    rj["foreignKeys"] = nlohmann::ordered_json::array();
    for (const auto& fk : rel.foreignKeys) {
      nlohmann::ordered_json fj;
      fj["columns"] = fk.columns;
      fj["references"] = fk.references;
      fj["referencedColumns"] = fk.referencedColumns;
      rj["foreignKeys"].push_back(std::move(fj));
    }
    rj["provenance"] = rel.provenance;
    root["relations"].push_back(std::move(rj));
  }
  return root;
}

inline std::string dumpSchemaJson(const RelationalSchema& schema) {
  return schemaToJson(schema).dump(2) + "\n";
}

} // namespace erdl
