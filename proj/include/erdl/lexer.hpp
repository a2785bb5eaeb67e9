#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "erdl/error.hpp"
#include "erdl/naming.hpp"
#include "erdl/source.hpp"

namespace erdl {

enum class TokenKind {
  Name,   // bare (possibly lax) or quoted name
  Int,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Bang,
  KwModel,
  KwEntity,
  KwWeak,
  KwRel,
  KwIdentifying,
  KwIsa,
  KwAttrs,
  KwKey,
  KwPartialKey,
  KwMulti,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;              // name text (without quotes) for Name tokens
  std::uint32_t intValue = 0;
  SourceSpan span;
};

inline const char* tokenKindName(TokenKind kind) {
  switch (kind) {
  case TokenKind::Name: return "name";
  case TokenKind::Int: return "integer";
  case TokenKind::LBrace: return "'{'";
  case TokenKind::RBrace: return "'}'";
  case TokenKind::LParen: return "'('";
  case TokenKind::RParen: return "')'";
  case TokenKind::Comma: return "','";
  case TokenKind::Bang: return "'!'";
  case TokenKind::KwModel: return "'model'";
  case TokenKind::KwEntity: return "'entity'";
  case TokenKind::KwWeak: return "'weak'";
  case TokenKind::KwRel: return "'rel'";
  case TokenKind::KwIdentifying: return "'identifying'";
  case TokenKind::KwIsa: return "'isa'";
  case TokenKind::KwAttrs: return "'attrs'";
  case TokenKind::KwKey: return "'key'";
  case TokenKind::KwPartialKey: return "'partialkey'";
  case TokenKind::KwMulti: return "'multi'";
  case TokenKind::End: return "end of input";
  }
  return "?";
}

/// Characters allowed in a bare lax name after the leading letter. Wider than
/// the canonical letters-only NAME so that nonconforming input stays
/// parseable for the linter; names with anything else must be quoted.
inline bool isLaxNameChar(char c) {
  return isAsciiLetter(c) || (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '/';
}

class Lexer {
public:
  Lexer(std::string_view source, std::string file)
      : source_(source), file_(std::move(file)) {}

  Token next() {
    skipTrivia();
    Token tok;
    tok.span = {file_, line_, column_, 1};
    if (pos_ >= source_.size()) {
      tok.kind = TokenKind::End;
      tok.span.length = 0;
      return tok;
    }
    const char c = source_[pos_];
    switch (c) {
    case '{': return punct(TokenKind::LBrace);
    case '}': return punct(TokenKind::RBrace);
    case '(': return punct(TokenKind::LParen);
    case ')': return punct(TokenKind::RParen);
    case ',': return punct(TokenKind::Comma);
    case '!': return punct(TokenKind::Bang);
    case '"': return quotedName();
    default: break;
    }
    if (c >= '0' && c <= '9') return integer();
    if (isAsciiLetter(c)) return bareName();
    throw Error(ErrorKind::Syntax,
                file_ + ":" + std::to_string(line_) + ":" + std::to_string(column_) +
                    ": unexpected character '" + std::string(1, c) + "'",
                tok.span);
  }

private:
  void advance() {
    if (source_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skipTrivia() {
    while (pos_ < source_.size()) {
      const char c = source_[pos_];
      if (c == '#') {
        while (pos_ < source_.size() && source_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  Token punct(TokenKind kind) {
    Token tok{kind, {}, 0, {file_, line_, column_, 1}};
    advance();
    return tok;
  }

  Token integer() {
    Token tok{TokenKind::Int, {}, 0, {file_, line_, column_, 0}};
    std::uint64_t value = 0;
    const std::size_t start = pos_;
    while (pos_ < source_.size() && source_[pos_] >= '0' && source_[pos_] <= '9') {
      value = value * 10 + static_cast<std::uint64_t>(source_[pos_] - '0');
      if (value > 1000000000ULL)
        throw Error(ErrorKind::Syntax, "integer literal too large", tok.span);
      advance();
    }
    tok.intValue = static_cast<std::uint32_t>(value);
    tok.text = std::string(source_.substr(start, pos_ - start));
    tok.span.length = static_cast<int>(pos_ - start);
    return tok;
  }

  Token bareName() {
    Token tok{TokenKind::Name, {}, 0, {file_, line_, column_, 0}};
    const std::size_t start = pos_;
    while (pos_ < source_.size() && isLaxNameChar(source_[pos_])) advance();
    tok.text = std::string(source_.substr(start, pos_ - start));
    tok.span.length = static_cast<int>(pos_ - start);
    if (auto kw = keywordKind(tok.text)) tok.kind = *kw;
    return tok;
  }

  Token quotedName() {
    Token tok{TokenKind::Name, {}, 0, {file_, line_, column_, 0}};
    advance(); // opening quote
    const std::size_t start = pos_;
    while (pos_ < source_.size() && source_[pos_] != '"' && source_[pos_] != '\n') advance();
    if (pos_ >= source_.size() || source_[pos_] != '"')
      throw Error(ErrorKind::Syntax, "unterminated quoted name", tok.span);
    tok.text = std::string(source_.substr(start, pos_ - start));
    advance(); // closing quote
    tok.span.length = static_cast<int>(tok.text.size()) + 2;
    if (tok.text.empty())
      throw Error(ErrorKind::Syntax, "empty quoted name", tok.span);
    return tok;
  }

  static std::optional<TokenKind> keywordKind(std::string_view text) {
    static constexpr std::array<std::pair<std::string_view, TokenKind>, 10> kKeywords{{
        {"model", TokenKind::KwModel},
        {"entity", TokenKind::KwEntity},
        {"weak", TokenKind::KwWeak},
        {"rel", TokenKind::KwRel},
        {"identifying", TokenKind::KwIdentifying},
        {"isa", TokenKind::KwIsa},
        {"attrs", TokenKind::KwAttrs},
        {"key", TokenKind::KwKey},
        {"partialkey", TokenKind::KwPartialKey},
        {"multi", TokenKind::KwMulti},
    }};
    for (const auto& [word, kind] : kKeywords)
      if (word == text) return kind;
    return std::nullopt;
  }

  std::string_view source_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

} // namespace erdl
