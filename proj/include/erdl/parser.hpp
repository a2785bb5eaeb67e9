#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "erdl/lexer.hpp"
#include "erdl/model.hpp"

namespace erdl {

/// A parsed model plus a span for every entity, attribute, relationship, and
/// participation, keyed by element path.
struct LocatedModel {
  ERModel model;
  std::map<std::string, SourceSpan> spans;
  std::string file;

  const SourceSpan* spanOf(const std::string& path) const {
    auto it = spans.find(path);
    return it == spans.end() ? nullptr : &it->second;
  }
};

namespace detail {

class Parser {
public:
  Parser(std::string_view source, std::string file)
      : lexer_(source, file), file_(std::move(file)) {
    advance();
  }

  LocatedModel run() {
    LocatedModel out;
    out.file = file_;
    bool sawModelDecl = false;
    while (current_.kind != TokenKind::End) {
      switch (current_.kind) {
      case TokenKind::KwModel:
        if (sawModelDecl)
          throw Error(ErrorKind::Syntax, where() + ": duplicate 'model' declaration",
                      current_.span);
        sawModelDecl = true;
        advance();
        out.model.name = expectName("model name");
        break;
      case TokenKind::KwEntity:
        advance();
        parseEntity(out, EntityKind::Regular);
        break;
      case TokenKind::KwWeak:
        advance();
        expect(TokenKind::KwEntity);
        parseEntity(out, EntityKind::Weak);
        break;
      case TokenKind::KwIdentifying:
        advance();
        expect(TokenKind::KwRel);
        parseRelationship(out, true);
        break;
      case TokenKind::KwRel:
        advance();
        parseRelationship(out, false);
        break;
      default:
        throw Error(ErrorKind::Syntax,
                    where() + ": expected a declaration, got " + tokenKindName(current_.kind),
                    current_.span);
      }
    }
    finish(out);
    return out;
  }

private:
  void advance() { current_ = lexer_.next(); }

  std::string where() const {
    return file_ + ":" + std::to_string(current_.span.line) + ":" +
           std::to_string(current_.span.column);
  }

  void expect(TokenKind kind) {
    if (current_.kind != kind)
      throw Error(ErrorKind::Syntax,
                  where() + ": expected " + std::string(tokenKindName(kind)) + ", got " +
                      tokenKindName(current_.kind),
                  current_.span);
    advance();
  }

  std::pair<std::string, SourceSpan> expectNameToken(const char* what) {
    if (current_.kind != TokenKind::Name)
      throw Error(ErrorKind::Syntax,
                  where() + ": expected " + std::string(what) + ", got " +
                      tokenKindName(current_.kind),
                  current_.span);
    auto result = std::make_pair(current_.text, current_.span);
    advance();
    return result;
  }

  std::string expectName(const char* what) { return expectNameToken(what).first; }

  void parseEntity(LocatedModel& out, EntityKind kind) {
    auto [name, span] = expectNameToken("entity name");
    if (resolveEntity(out.model, name))
      throw Error(ErrorKind::Duplicate, where(span) + ": duplicate entity name '" + name + "'",
                  span);
    EntityType entity;
    entity.name = name;
    entity.kind = kind;
    if (current_.kind == TokenKind::KwIsa) {
      advance();
      auto [superName, superSpan] = expectNameToken("supertype name");
      entity.supertypeName = superName;
      supertypeSpans_.emplace_back(name, superSpan);
    }
    expect(TokenKind::LBrace);
    while (current_.kind != TokenKind::RBrace) parseAttrLine(entity);
    expect(TokenKind::RBrace);
    out.spans.emplace(entityPath(entity.name), span);
    for (const auto& [attrName, attrSpan] : pendingAttrSpans_)
      out.spans.emplace(attrPath(entity.name, attrName), attrSpan);
    pendingAttrSpans_.clear();
    out.model.entities.push_back(std::move(entity));
  }

  void parseAttrLine(EntityType& entity) {
    Attribute attr;
    bool designated = false;
    if (current_.kind == TokenKind::KwKey) {
      advance();
      if (current_.kind == TokenKind::LParen) {
        parseCompositeKeyGroup(entity);
        return;
      }
      attr.isKey = true;
      if (current_.kind == TokenKind::Bang) {
        advance();
        designated = true;
      }
    } else if (current_.kind == TokenKind::KwPartialKey) {
      advance();
      attr.isPartialKey = true;
    }
    if (current_.kind == TokenKind::KwMulti) {
      advance();
      attr.isMultivalued = true;
    }
    auto [name, span] = expectNameToken("attribute name");
    attr.name = name;
    addAttribute(entity, std::move(attr), span);
    if (designated) {
      if (entity.mostDesiredKey)
        throw Error(ErrorKind::Syntax,
                    where(span) + ": entity '" + entity.name +
                        "' designates more than one key with 'key!'",
                    span);
      entity.mostDesiredKey = name;
    }
  }

  // `key(A, B)` declares the members of an illegal composite key. They are
  // recorded as partial-key attributes: each one only partially contributes
  // to an identifier, which is what rule R-REG-3 looks for on a regular
  // entity type.
  void parseCompositeKeyGroup(EntityType& entity) {
    expect(TokenKind::LParen);
    std::size_t members = 0;
    for (;;) {
      auto [name, span] = expectNameToken("composite key member");
      addAttribute(entity, Attribute{name, false, true, false}, span);
      ++members;
      if (current_.kind != TokenKind::Comma) break;
      advance();
    }
    if (members < 2)
      throw Error(ErrorKind::Syntax,
                  where() + ": composite key group needs at least two members", current_.span);
    expect(TokenKind::RParen);
  }

  void addAttribute(EntityType& entity, Attribute attr, const SourceSpan& span) {
    if (entity.findAttribute(attr.name))
      throw Error(ErrorKind::Duplicate,
                  where(span) + ": duplicate attribute '" + attr.name + "' in entity '" +
                      entity.name + "'",
                  span);
    pendingAttrSpans_.emplace_back(attr.name, span);
    entity.attributes.push_back(std::move(attr));
  }

  void parseRelationship(LocatedModel& out, bool identifying) {
    auto [name, span] = expectNameToken("relationship name");
    for (const auto& existing : out.model.relationships)
      if (existing.name == name)
        throw Error(ErrorKind::Duplicate,
                    where(span) + ": duplicate relationship name '" + name + "'", span);
    RelationshipType rel;
    rel.name = name;
    rel.isIdentifying = identifying;
    expect(TokenKind::LBrace);
    while (current_.kind == TokenKind::Name) {
      auto [participantName, participantSpan] = expectNameToken("participant name");
      Participation participation;
      participation.entityName = participantName;
      participation.cardinality = parseCardinality();
      out.spans.emplace(participantPath(rel.name, rel.participants.size()), participantSpan);
      rel.participants.push_back(std::move(participation));
      if (current_.kind == TokenKind::Comma)
        advance();
      else
        break;
    }
    if (current_.kind == TokenKind::KwAttrs) {
      advance();
      do {
        auto [attrName, attrSpan] = expectNameToken("relationship attribute name");
        for (const auto& existing : rel.attributes)
          if (existing.name == attrName)
            throw Error(ErrorKind::Duplicate,
                        where(attrSpan) + ": duplicate attribute '" + attrName +
                            "' in relationship '" + rel.name + "'",
                        attrSpan);
        out.spans.emplace(relAttrPath(rel.name, attrName), attrSpan);
        rel.attributes.push_back(Attribute{attrName, false, false, false});
      } while (current_.kind == TokenKind::Name);
    }
    expect(TokenKind::RBrace);
    out.spans.emplace(relPath(rel.name), span);
    out.model.relationships.push_back(std::move(rel));
  }

  Cardinality parseCardinality() {
    expect(TokenKind::LParen);
    if (current_.kind != TokenKind::Int)
      throw Error(ErrorKind::Syntax, where() + ": expected min value (integer)", current_.span);
    const std::uint32_t min = current_.intValue;
    advance();
    expect(TokenKind::Comma);
    Cardinality card;
    card.min = min;
    if (current_.kind == TokenKind::Int) {
      card.max = current_.intValue;
      advance();
    } else if (current_.kind == TokenKind::Name && current_.text == "N") {
      card.max = std::nullopt;
      advance();
    } else {
      throw Error(ErrorKind::Syntax, where() + ": expected max value (integer or N)",
                  current_.span);
    }
    expect(TokenKind::RParen);
    return card;
  }

  // Post-parse referential checks, reported with the spans recorded while
  // parsing so every error points into the input.
  void finish(LocatedModel& out) {
    for (const auto& [entityName, span] : supertypeSpans_) {
      const EntityType* entity = resolveEntity(out.model, entityName);
      if (entity && entity->supertypeName && !resolveEntity(out.model, *entity->supertypeName))
        throw Error(ErrorKind::Reference,
                    where(span) + ": unknown supertype '" + *entity->supertypeName +
                        "' of entity '" + entityName + "'",
                    span);
    }
    for (const auto& problem : verifyReferential(out.model)) {
      if (problem.kind != ErrorKind::Cycle && problem.kind != ErrorKind::Reference) continue;
      const SourceSpan* span = out.spanOf(problem.location);
      throw Error(problem.kind, problem.message, span ? std::optional(*span) : std::nullopt);
    }
  }

  std::string where(const SourceSpan& span) const {
    return span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column);
  }

  Lexer lexer_;
  std::string file_;
  Token current_;
  std::vector<std::pair<std::string, SourceSpan>> pendingAttrSpans_;
  std::vector<std::pair<std::string, SourceSpan>> supertypeSpans_;
};

inline bool nameNeedsQuoting(std::string_view name) {
  if (name.empty() || !isAsciiLetter(name.front())) return true;
  for (char c : name)
    if (!isLaxNameChar(c)) return true;
  // Reserved words only lex as keywords; quoting restores them as names.
  static constexpr std::string_view kKeywords[] = {"model",       "entity", "weak",
                                                   "rel",         "identifying", "isa",
                                                   "attrs",       "key",    "partialkey",
                                                   "multi"};
  for (auto kw : kKeywords)
    if (name == kw) return true;
  return false;
}

inline void printName(std::ostream& os, std::string_view name) {
  if (nameNeedsQuoting(name))
    os << '"' << name << '"';
  else
    os << name;
}

} // namespace detail

/// Parses ERDL text. Fatal conditions are thrown: syntax violations, duplicate
/// names, dangling references, and Is-A cycles; everything the rule catalog
/// can report stays representable and is left for the validator.
inline LocatedModel parse(std::string_view source, std::string file) {
  return detail::Parser(source, std::move(file)).run();
}

/// Canonical ERDL. parse(print(m)) reproduces m exactly.
inline std::string print(const ERModel& model) {
  std::ostringstream os;
  bool first = true;
  auto separate = [&] {
    if (!first) os << "\n";
    first = false;
  };
  if (!model.name.empty()) {
    separate();
    os << "model ";
    detail::printName(os, model.name);
    os << "\n";
  }
  for (const auto& entity : model.entities) {
    separate();
    if (entity.kind == EntityKind::Weak) os << "weak ";
    os << "entity ";
    detail::printName(os, entity.name);
    if (entity.supertypeName) {
      os << " isa ";
      detail::printName(os, *entity.supertypeName);
    }
    os << " {\n";
    for (const auto& attr : entity.attributes) {
      os << "  ";
      if (attr.isKey) {
        os << "key";
        if (entity.mostDesiredKey && *entity.mostDesiredKey == attr.name) os << "!";
        os << " ";
      } else if (attr.isPartialKey) {
        os << "partialkey ";
      }
      if (attr.isMultivalued) os << "multi ";
      detail::printName(os, attr.name);
      os << "\n";
    }
    os << "}\n";
  }
  for (const auto& rel : model.relationships) {
    separate();
    if (rel.isIdentifying) os << "identifying ";
    os << "rel ";
    detail::printName(os, rel.name);
    os << " {";
    for (std::size_t i = 0; i < rel.participants.size(); ++i) {
      os << (i == 0 ? " " : ", ");
      detail::printName(os, rel.participants[i].entityName);
      os << " " << rel.participants[i].cardinality.toString();
    }
    if (!rel.attributes.empty()) {
      os << " attrs";
      for (const auto& attr : rel.attributes) {
        os << " ";
        detail::printName(os, attr.name);
      }
    }
    os << " }\n";
  }
  return os.str();
}

} // namespace erdl
