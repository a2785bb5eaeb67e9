#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "erdl/source.hpp"

namespace erdl {

enum class Severity { Error, Warning };

inline const char* severityName(Severity severity) {
  return severity == Severity::Error ? "Error" : "Warning";
}

struct Diagnostic {
  std::string ruleId;
  Severity severity = Severity::Error;
  std::string location;
  std::optional<SourceSpan> span;
  std::string message;
  bool fixable = false;

  bool operator==(const Diagnostic&) const = default;
};

struct RuleInfo {
  std::string_view id;
  Severity severity;
  bool fixable;
  std::string_view summary;
};

/// The published catalog. Rules R-KEY-1 and R-NAME-1/3/4 are mechanical
/// renames and therefore fixable; everything structural needs a human.
inline constexpr std::array<RuleInfo, 15> kRuleCatalog{{
    {"R-REG-1", Severity::Error, false,
     "regular non-subtype entity must have at least one key attribute"},
    {"R-REG-2", Severity::Error, false, "a key attribute must not be multivalued"},
    {"R-REG-3", Severity::Error, false, "a key must be a single attribute, not a combination"},
    {"R-REG-4", Severity::Error, false, "entity type names must be pairwise distinct"},
    {"R-SUB-1", Severity::Error, false,
     "a subtype must have an own attribute or participate in a relationship"},
    {"R-SUB-2", Severity::Error, false, "a supertype name must resolve to an entity"},
    {"R-WEAK-1", Severity::Error, false, "a weak entity must not have key attributes"},
    {"R-WEAK-2", Severity::Error, false,
     "a weak entity needs exactly one identifying relationship with a non-weak owner"},
    {"R-KEY-1", Severity::Error, true,
     "the designated key attribute must carry the entity-name prefix"},
    {"R-NAME-1", Severity::Error, true, "names are CamelCase words"},
    {"R-NAME-2", Severity::Warning, false, "nouns should be singular"},
    {"R-NAME-3", Severity::Error, true, "names contain letters only"},
    {"R-NAME-4", Severity::Error, true, "names must not contain spaces"},
    {"R-CARD-1", Severity::Error, false, "cardinalities satisfy min <= max, max >= 1"},
    {"R-REL-ARITY", Severity::Error, false, "a relationship has at least two participants"},
}};

inline const RuleInfo* findRule(std::string_view id) {
  for (const auto& rule : kRuleCatalog)
    if (rule.id == id) return &rule;
  return nullptr;
}

/// Canonical ordering: source position first so text output reads top to
/// bottom, then rule id, then location path for spanless (JSON) input.
inline void sortDiagnostics(std::vector<Diagnostic>& diagnostics) {
  auto key = [](const Diagnostic& d) {
    static const SourceSpan kNoSpan{};
    const SourceSpan& s = d.span ? *d.span : kNoSpan;
    return std::tuple<const std::string&, int, int, const std::string&, const std::string&>(
        s.file, d.span ? s.line : 0, d.span ? s.column : 0, d.ruleId, d.location);
  };
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
}

inline bool hasErrors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

/// `file:line:col: severity ruleId message`; diagnostics without a span
/// (JSON input) print 0:0 coordinates.
inline std::string formatDiagnosticText(const Diagnostic& d, std::string_view fallbackFile = {}) {
  std::ostringstream os;
  if (d.span)
    os << d.span->file << ":" << d.span->line << ":" << d.span->column;
  else
    os << fallbackFile << ":0:0";
  os << ": " << (d.severity == Severity::Error ? "error" : "warning") << " " << d.ruleId << " "
     << d.message;
  return os.str();
}

inline nlohmann::ordered_json diagnosticToJson(const Diagnostic& d) {
  nlohmann::ordered_json j;
  j["ruleId"] = d.ruleId;
  j["severity"] = severityName(d.severity);
  j["location"] = d.location;
  if (d.span) {
    nlohmann::ordered_json sj;
    sj["file"] = d.span->file;
    sj["line"] = d.span->line;
    sj["column"] = d.span->column;
    sj["length"] = d.span->length;
    j["span"] = std::move(sj);
  }
  j["message"] = d.message;
  j["fixable"] = d.fixable;
  return j;
}

/// JSON Lines: one diagnostic object per line.
inline std::string diagnosticsToJsonLines(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    out += diagnosticToJson(d).dump();
    out += "\n";
  }
  return out;
}

} // namespace erdl
