#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erdl/fixer.hpp"
#include "erdl/json_io.hpp"
#include "erdl/parser.hpp"
#include "erdl/renderer.hpp"
#include "erdl/transformer.hpp"
#include "erdl/validator.hpp"

namespace erdl::cli {

// Stable exit codes for CI use.
inline constexpr int kExitOk = 0;
inline constexpr int kExitLintErrors = 1;
inline constexpr int kExitParseFailure = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitInternal = 4;

namespace detail {

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void writeFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

inline bool isJsonPath(const std::string& path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

/// Loads a model from .erdl (with spans) or .json (span-less) input.
inline LocatedModel loadInput(const std::string& path) {
  const std::string source = readFile(path);
  if (isJsonPath(path)) {
    LocatedModel located;
    located.model = loadJson(source);
    located.file = path;
    return located;
  }
  return parse(source, path);
}

inline std::string replaceExtension(const std::string& path, const std::string& newSuffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + newSuffix;
  return path.substr(0, dot) + newSuffix;
}

inline PluralExceptions loadExceptions(const std::string& path) {
  return path.empty() ? PluralExceptions::defaults() : PluralExceptions::fromFile(path);
}

} // namespace detail

/// Runs the command line given subcommand arguments (without the program
/// name). Machine output goes to `out`, information and errors to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ER model toolchain: parse, lint, fix, transform, render"};
  app.require_subcommand(1);

  std::string inputPath, outPath, schemaJsonPath, exceptionsPath, format = "text", rankdir = "LR";
  bool asJson = false, inPlace = false, strict = false;

  auto* parseCmd = app.add_subcommand("parse", "parse a model and print it canonically");
  parseCmd->add_option("file", inputPath, "input .erdl or .json model")->required();
  parseCmd->add_flag("--json", asJson, "print the canonical JSON form instead of ERDL");

  auto* lintCmd = app.add_subcommand("lint", "run the notation rule catalog");
  lintCmd->add_option("file", inputPath, "input .erdl or .json model")->required();
  lintCmd->add_option("--format", format, "text or jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}));
  lintCmd->add_option("--plural-exceptions", exceptionsPath,
                      "word list replacing the built-in singular-rule exceptions");
  lintCmd->add_flag("--strict", strict, "warnings also fail the exit code");

  auto* fixCmd = app.add_subcommand("fix", "apply automatic repairs");
  fixCmd->add_option("file", inputPath, "input .erdl or .json model")->required();
  fixCmd->add_flag("--in-place", inPlace, "overwrite the input file");
  fixCmd->add_option("--plural-exceptions", exceptionsPath,
                     "word list replacing the built-in singular-rule exceptions");

  auto* transformCmd = app.add_subcommand("transform", "map a conforming model to DDL");
  transformCmd->add_option("file", inputPath, "input .erdl or .json model")->required();
  transformCmd->add_option("--out", outPath, "output .sql file")->required();
  transformCmd->add_option("--schema-json", schemaJsonPath, "also write the schema as JSON");

  auto* renderCmd = app.add_subcommand("render", "emit a DOT diagram");
  renderCmd->add_option("file", inputPath, "input .erdl or .json model")->required();
  renderCmd->add_option("--out", outPath, "output .dot file")->required();
  renderCmd->add_option("--rankdir", rankdir, "LR or TB")->check(CLI::IsMember({"LR", "TB"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (parseCmd->parsed()) {
      const LocatedModel located = detail::loadInput(inputPath);
      out << (asJson ? dumpJson(located.model) : print(located.model));
      return kExitOk;
    }

    if (lintCmd->parsed()) {
      const LocatedModel located = detail::loadInput(inputPath);
      const PluralExceptions exceptions = detail::loadExceptions(exceptionsPath);
      ValidateOptions options;
      options.pluralExceptions = &exceptions;
      const auto diagnostics = validate(located, options);
      if (format == "jsonl") {
        out << diagnosticsToJsonLines(diagnostics);
      } else {
        for (const auto& d : diagnostics) out << formatDiagnosticText(d, located.file) << "\n";
      }
      const bool failing = strict ? !diagnostics.empty() : hasErrors(diagnostics);
      return failing ? kExitLintErrors : kExitOk;
    }

    if (fixCmd->parsed()) {
      const LocatedModel located = detail::loadInput(inputPath);
      const PluralExceptions exceptions = detail::loadExceptions(exceptionsPath);
      auto [fixed, report] = fix(located.model, exceptions);
      const bool json = detail::isJsonPath(inputPath);
      const std::string outputPath =
          inPlace ? inputPath
                  : detail::replaceExtension(inputPath, json ? ".fixed.json" : ".fixed.erdl");
      detail::writeFile(outputPath, json ? dumpJson(fixed) : print(fixed));
      err << "wrote " << outputPath << "\n";
      out << fixReportToJson(report).dump(2) << "\n";
      return kExitOk;
    }

    if (transformCmd->parsed()) {
      const LocatedModel located = detail::loadInput(inputPath);
      const auto diagnostics = validate(located);
      if (hasErrors(diagnostics)) {
        for (const auto& d : diagnostics) err << formatDiagnosticText(d, located.file) << "\n";
        err << "error: model has lint errors; transform refused\n";
        return kExitLintErrors;
      }
      const RelationalSchema schema = transform(located.model);
      detail::writeFile(outPath, emitDdl(schema));
      if (!schemaJsonPath.empty()) detail::writeFile(schemaJsonPath, dumpSchemaJson(schema));
      return kExitOk;
    }

    if (renderCmd->parsed()) {
      const LocatedModel located = detail::loadInput(inputPath);
      RenderOptions options;
      options.rankDirection = rankdir == "TB" ? RankDirection::TopBottom : RankDirection::LeftRight;
      detail::writeFile(outPath, render(located.model, options));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << errorKindName(e.kind()) << ": " << e.what() << "\n";
    switch (e.kind()) {
    case ErrorKind::Syntax:
    case ErrorKind::Reference:
    case ErrorKind::Cycle:
    case ErrorKind::Duplicate:
    case ErrorKind::JsonFormat:
      return kExitParseFailure;
    case ErrorKind::Io:
      return kExitParseFailure; // unreadable input cannot be parsed
    default:
      return kExitInternal;
    }
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

} // namespace erdl::cli
