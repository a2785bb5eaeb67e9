#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "erdl/model.hpp"

namespace erdl {

namespace detail {

using Json = nlohmann::ordered_json;

inline Json cardinalityToJson(const Cardinality& card) {
  Json j;
  j["min"] = card.min;
  if (card.max)
    j["max"] = *card.max;
  else
    j["max"] = "N";
  return j;
}

inline Json attributeToJson(const Attribute& attr) {
  Json j;
  j["name"] = attr.name;
  j["isKey"] = attr.isKey;
  j["isPartialKey"] = attr.isPartialKey;
  j["isMultivalued"] = attr.isMultivalued;
  return j;
}

class JsonReader {
public:
  explicit JsonReader(const Json& root) : root_(root) {}

  ERModel read() {
    requireObject(root_, "model");
    ERModel model;
    model.name = stringField(root_, "name", "model");
    for (const auto& ej : arrayField(root_, "entities", "model")) model.entities.push_back(readEntity(ej));
    for (const auto& rj : arrayField(root_, "relationships", "model"))
      model.relationships.push_back(readRelationship(rj));
    validate(model);
    return model;
  }

private:
  [[noreturn]] static void fail(const std::string& message) {
    throw Error(ErrorKind::JsonFormat, message);
  }

  static void requireObject(const Json& j, const std::string& what) {
    if (!j.is_object()) fail(what + " must be a JSON object");
  }

  static std::string stringField(const Json& j, const char* field, const std::string& what) {
    if (!j.contains(field) || !j[field].is_string())
      fail(what + " needs a string field '" + field + "'");
    return j[field].get<std::string>();
  }

  static bool boolField(const Json& j, const char* field, const std::string& what) {
    if (!j.contains(field) || !j[field].is_boolean())
      fail(what + " needs a boolean field '" + field + "'");
    return j[field].get<bool>();
  }

  static const Json& arrayField(const Json& j, const char* field, const std::string& what) {
    if (!j.contains(field) || !j[field].is_array())
      fail(what + " needs an array field '" + field + "'");
    return j[field];
  }

  static std::optional<std::string> optionalString(const Json& j, const char* field,
                                                   const std::string& what) {
    if (!j.contains(field) || j[field].is_null()) return std::nullopt;
    if (!j[field].is_string()) fail(what + ": field '" + field + "' must be a string");
    return j[field].get<std::string>();
  }

  Attribute readAttribute(const Json& j, const std::string& owner) {
    requireObject(j, "attribute of " + owner);
    Attribute attr;
    attr.name = stringField(j, "name", "attribute of " + owner);
    if (attr.name.empty()) fail("attribute of " + owner + " has an empty name");
    attr.isKey = boolField(j, "isKey", "attribute '" + attr.name + "'");
    attr.isPartialKey = boolField(j, "isPartialKey", "attribute '" + attr.name + "'");
    attr.isMultivalued = boolField(j, "isMultivalued", "attribute '" + attr.name + "'");
    if (attr.isKey && attr.isPartialKey)
      fail("attribute '" + attr.name + "' of " + owner + " is both key and partial key");
    return attr;
  }

  EntityType readEntity(const Json& j) {
    requireObject(j, "entity");
    EntityType entity;
    entity.name = stringField(j, "name", "entity");
    if (entity.name.empty()) fail("entity with empty name");
    const std::string kind = stringField(j, "kind", "entity '" + entity.name + "'");
    if (kind == "Regular")
      entity.kind = EntityKind::Regular;
    else if (kind == "Weak")
      entity.kind = EntityKind::Weak;
    else
      fail("entity '" + entity.name + "': kind must be 'Regular' or 'Weak', got '" + kind + "'");
    entity.supertypeName = optionalString(j, "supertypeName", "entity '" + entity.name + "'");
    for (const auto& aj : arrayField(j, "attributes", "entity '" + entity.name + "'"))
      entity.attributes.push_back(readAttribute(aj, "entity '" + entity.name + "'"));
    entity.mostDesiredKey = optionalString(j, "mostDesiredKey", "entity '" + entity.name + "'");
    if (entity.mostDesiredKey) {
      const Attribute* attr = entity.findAttribute(*entity.mostDesiredKey);
      if (!attr || !attr->isKey)
        fail("entity '" + entity.name + "': mostDesiredKey '" + *entity.mostDesiredKey +
             "' does not name a key attribute");
    }
    return entity;
  }

  Cardinality readCardinality(const Json& j, const std::string& what) {
    requireObject(j, "cardinality of " + what);
    if (!j.contains("min") || !j["min"].is_number_unsigned())
      fail("cardinality of " + what + " needs a non-negative integer 'min'");
    Cardinality card;
    card.min = j["min"].get<std::uint32_t>();
    if (!j.contains("max")) fail("cardinality of " + what + " needs 'max'");
    const Json& maxJson = j["max"];
    if (maxJson.is_string() && maxJson.get<std::string>() == "N") {
      card.max = std::nullopt;
    } else if (maxJson.is_number_unsigned()) {
      card.max = maxJson.get<std::uint32_t>();
    } else {
      fail("cardinality of " + what + ": 'max' must be a non-negative integer or the string 'N'");
    }
    if (!card.isValid())
      fail("cardinality of " + what + " violates min <= max, max >= 1: " + card.toString());
    return card;
  }

  RelationshipType readRelationship(const Json& j) {
    requireObject(j, "relationship");
    RelationshipType rel;
    rel.name = stringField(j, "name", "relationship");
    if (rel.name.empty()) fail("relationship with empty name");
    rel.isIdentifying = boolField(j, "isIdentifying", "relationship '" + rel.name + "'");
    for (const auto& pj : arrayField(j, "participants", "relationship '" + rel.name + "'")) {
      requireObject(pj, "participant of '" + rel.name + "'");
      Participation p;
      p.entityName = stringField(pj, "entityName", "participant of '" + rel.name + "'");
      p.cardinality = readCardinality(pj.contains("cardinality") ? pj["cardinality"] : Json(),
                                      "participant '" + p.entityName + "' in '" + rel.name + "'");
      rel.participants.push_back(std::move(p));
    }
    for (const auto& aj : arrayField(j, "attributes", "relationship '" + rel.name + "'")) {
      Attribute attr = readAttribute(aj, "relationship '" + rel.name + "'");
      if (attr.isKey || attr.isPartialKey || attr.isMultivalued)
        fail("attribute '" + attr.name + "' of relationship '" + rel.name +
             "' must be a plain singlevalued attribute");
      rel.attributes.push_back(std::move(attr));
    }
    return rel;
  }

  // Referential validation. A dangling supertype is allowed through: the
  // rule catalog reports it as R-SUB-2 for JSON input.
  static void validate(const ERModel& model) {
    for (const auto& problem : verifyReferential(model, /*allowDanglingSupertype=*/true))
      throw Error(problem.kind, problem.message);
  }

  const Json& root_;
};

} // namespace detail

/// Canonical JSON form of a model. Field names follow the domain types;
/// collections keep declaration order; an unbounded max serializes as "N";
/// absent optionals are omitted.
inline std::string dumpJson(const ERModel& model) {
  detail::Json root;
  root["name"] = model.name;
  root["entities"] = detail::Json::array();
  for (const auto& entity : model.entities) {
    detail::Json ej;
    ej["name"] = entity.name;
    ej["kind"] = entityKindName(entity.kind);
    if (entity.supertypeName) ej["supertypeName"] = *entity.supertypeName;
    ej["attributes"] = detail::Json::array();
    for (const auto& attr : entity.attributes) ej["attributes"].push_back(detail::attributeToJson(attr));
    if (entity.mostDesiredKey) ej["mostDesiredKey"] = *entity.mostDesiredKey;
    root["entities"].push_back(std::move(ej));
  }
  root["relationships"] = detail::Json::array();
  for (const auto& rel : model.relationships) {
    detail::Json rj;
    rj["name"] = rel.name;
    rj["isIdentifying"] = rel.isIdentifying;
    rj["participants"] = detail::Json::array();
    for (const auto& p : rel.participants) {
      detail::Json pj;
      pj["entityName"] = p.entityName;
      pj["cardinality"] = detail::cardinalityToJson(p.cardinality);
      rj["participants"].push_back(std::move(pj));
    }
    rj["attributes"] = detail::Json::array();
    for (const auto& attr : rel.attributes) rj["attributes"].push_back(detail::attributeToJson(attr));
    root["relationships"].push_back(std::move(rj));
  }
  return root.dump(2) + "\n";
}

/// Loads the canonical JSON form and re-validates the invariants that make a
/// model usable: flag combinations, cardinality ranges, duplicate names,
/// dangling participants, and Is-A cycles are rejected.
inline ERModel loadJson(std::string_view source) {
  detail::Json root;
  try {
    root = detail::Json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::JsonFormat, std::string("invalid JSON: ") + e.what());
  }
  return detail::JsonReader(root).read();
}

} // namespace erdl
