#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "erdl/model.hpp"

namespace erdl {

enum class RankDirection { LeftRight, TopBottom };

struct RenderOptions {
  RankDirection rankDirection = RankDirection::LeftRight;
  bool showCardinalities = true;
};

namespace detail {

inline std::string dotQuote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string dotHtmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    default: out.push_back(c);
    }
  }
  return out;
}

/// Key names are drawn underlined via an HTML-like label; partial keys fall
/// back to a textual suffix because the DOT dialect has no dashed underline.
inline std::string attributeLabel(const Attribute& attr) {
  if (attr.isKey) return "<<u>" + dotHtmlEscape(attr.name) + "</u>>";
  if (attr.isPartialKey) return dotQuote(attr.name + " (partial key)");
  return dotQuote(attr.name);
}

} // namespace detail

/// Graph-description text in the paper's visual conventions: rectangles for
/// entity types (doubled when weak), diamonds for relationship types (doubled
/// when identifying), ovals for attributes (doubled when multivalued), Is-A
/// arrows from subtype to supertype, and "(min,max)" participation labels at
/// the entity end. Nonconforming models render fine; drawing needs no lint
/// gate.
inline std::string render(const ERModel& model, const RenderOptions& opts = {}) {
  std::ostringstream os;
  os << "digraph ERD {\n";
  os << "  rankdir=" << (opts.rankDirection == RankDirection::LeftRight ? "LR" : "TB") << ";\n";

  auto entityId = [](std::string_view name) { return detail::dotQuote("e_" + std::string(name)); };
  auto relId = [](std::string_view name) { return detail::dotQuote("r_" + std::string(name)); };
  auto attrId = [](std::string_view owner, std::string_view attr, bool ofRelationship) {
    return detail::dotQuote((ofRelationship ? "ra_" : "a_") + std::string(owner) + "_" +
                            std::string(attr));
  };

  for (const auto& entity : model.entities) {
    os << "\n";
    os << "  " << entityId(entity.name) << " [shape=box";
    if (entity.kind == EntityKind::Weak) os << ", peripheries=2";
    os << ", label=" << detail::dotQuote(entity.name) << "];\n";
    for (const auto& attr : entity.attributes) {
      os << "  " << attrId(entity.name, attr.name, false) << " [shape=ellipse";
      if (attr.isMultivalued) os << ", peripheries=2";
      os << ", label=" << detail::attributeLabel(attr) << "];\n";
    }
    for (const auto& attr : entity.attributes)
      os << "  " << entityId(entity.name) << " -> " << attrId(entity.name, attr.name, false)
         << " [dir=none];\n";
  }

  for (const auto& rel : model.relationships) {
    os << "\n";
    os << "  " << relId(rel.name) << " [shape=diamond";
    if (rel.isIdentifying) os << ", peripheries=2";
    os << ", label=" << detail::dotQuote(rel.name) << "];\n";
    for (const auto& attr : rel.attributes) {
      os << "  " << attrId(rel.name, attr.name, true) << " [shape=ellipse";
      if (attr.isMultivalued) os << ", peripheries=2";
      os << ", label=" << detail::attributeLabel(attr) << "];\n";
    }
    for (const auto& attr : rel.attributes)
      os << "  " << relId(rel.name) << " -> " << attrId(rel.name, attr.name, true)
         << " [dir=none];\n";
    for (const auto& p : rel.participants) {
      os << "  " << entityId(p.entityName) << " -> " << relId(rel.name) << " [dir=none";
      if (opts.showCardinalities)
        os << ", taillabel=" << detail::dotQuote(p.cardinality.toString());
      os << "];\n";
    }
  }

  bool anyIsa = false;
  for (const auto& entity : model.entities) {
    if (!entity.supertypeName) continue;
    if (!anyIsa) os << "\n";
    anyIsa = true;
    os << "  " << entityId(entity.name) << " -> " << entityId(*entity.supertypeName)
       << " [label=\"Is-A\"];\n";
  }

  os << "}\n";
  return os.str();
}

} // namespace erdl
