#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "erdl/cli.hpp"
#include "support/corpus.hpp"
#include "support/mutants.hpp"

namespace fs = std::filesystem;
using erdl::cli::run;

namespace {

struct RunResult {
  int exitCode;
  std::string out;
  std::string err;
};

RunResult runCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) { return testsupport::slurp(path.string()); }

fs::path tempDir() {
  const fs::path dir = fs::temp_directory_path() / "erdl_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int countLines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST_CASE("lint: conforming corpus exits 0 with no output") {
  const auto result = runCli({"lint", testsupport::corpusPath("figure1.erdl")});
  CHECK(result.exitCode == 0);
  CHECK(result.out.empty());
}

TEST_CASE("lint: the cardinality mutant exits 1 with one R-CARD-1 line") {
  const auto result = runCli({"lint", testsupport::corpusPath("mutants/mutant_card.erdl")});
  CHECK(result.exitCode == 1);
  CHECK(countLines(result.out) == 1);
  CHECK(result.out.find("R-CARD-1") != std::string::npos);
}

TEST_CASE("lint: exit codes match the table across the mutant corpus") {
  for (const auto& mutant : testsupport::mutantCases()) {
    INFO(mutant.file);
    const auto result = runCli({"lint", testsupport::corpusPath(mutant.file)});
    CHECK(result.exitCode == (mutant.warningOnly ? 0 : 1));
    CHECK(countLines(result.out) == 1);
    CHECK(result.out.find(mutant.ruleId) != std::string::npos);
  }
}

TEST_CASE("lint: --strict promotes warnings to the exit code") {
  const std::string file = testsupport::corpusPath("mutants/mutant_name2.erdl");
  CHECK(runCli({"lint", file}).exitCode == 0);
  CHECK(runCli({"lint", file, "--strict"}).exitCode == 1);
}

TEST_CASE("lint: jsonl output lines parse as diagnostic objects") {
  const auto result = runCli(
      {"lint", testsupport::corpusPath("mutants/mutant_card.erdl"), "--format", "jsonl"});
  CHECK(result.exitCode == 1);
  std::istringstream lines(result.out);
  std::string line;
  int parsed = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("ruleId"));
    CHECK(j.contains("severity"));
    CHECK(j.contains("location"));
    CHECK(j.contains("message"));
    CHECK(j.contains("fixable"));
    CHECK(j["span"]["line"].is_number());
    ++parsed;
  }
  CHECK(parsed == 1);
}

TEST_CASE("lint: --plural-exceptions replaces the shipped list") {
  const fs::path wordFile = tempDir() / "exceptions.txt";
  std::ofstream(wordFile) << "Locations\n";
  const std::string mutant = testsupport::corpusPath("mutants/mutant_name2.erdl");

  const auto silenced = runCli({"lint", mutant, "--plural-exceptions", wordFile.string()});
  CHECK(silenced.exitCode == 0);
  CHECK(silenced.out.empty());
}

TEST_CASE("parse: prints canonical ERDL or JSON") {
  const auto text = runCli({"parse", testsupport::corpusPath("figure1.erdl")});
  CHECK(text.exitCode == 0);
  CHECK(text.out.find("model Company") == 0);

  const auto json = runCli({"parse", testsupport::corpusPath("figure1.erdl"), "--json"});
  CHECK(json.exitCode == 0);
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j["entities"].size() == 5);

  // .json input works symmetrically
  const auto fromJson = runCli({"parse", testsupport::corpusPath("mutants/mutant_sub2.json")});
  CHECK(fromJson.exitCode == 0);
  CHECK(fromJson.out.find("entity Manager isa Employee") != std::string::npos);
}

TEST_CASE("parse failures exit 2") {
  const fs::path bad = tempDir() / "bad.erdl";
  std::ofstream(bad) << "entity { nope";
  CHECK(runCli({"parse", bad.string()}).exitCode == 2);

  const fs::path dangling = tempDir() / "dangling.erdl";
  std::ofstream(dangling) << "rel R { A (1,1), B (1,2) }";
  CHECK(runCli({"lint", dangling.string()}).exitCode == 2);

  CHECK(runCli({"parse", (tempDir() / "missing.erdl").string()}).exitCode == 2);
}

TEST_CASE("usage errors exit 3") {
  CHECK(runCli({"frobnicate"}).exitCode == 3);
  CHECK(runCli({}).exitCode == 3);
  CHECK(runCli({"lint"}).exitCode == 3);                       // missing file
  CHECK(runCli({"transform", "x.erdl"}).exitCode == 3);        // missing --out
  CHECK(runCli({"lint", "x", "--format", "yaml"}).exitCode == 3);
}

TEST_CASE("fix: writes the repaired file beside the input") {
  const fs::path input = tempDir() / "key.erdl";
  std::ofstream(input) << testsupport::corpusFile("mutants/mutant_key.erdl");

  const auto result = runCli({"fix", input.string()});
  CHECK(result.exitCode == 0);
  const fs::path fixedPath = tempDir() / "key.fixed.erdl";
  REQUIRE(fs::exists(fixedPath));
  CHECK(slurp(fixedPath).find("key DepNo") != std::string::npos);

  const auto report = nlohmann::json::parse(result.out);
  REQUIRE(report["renames"].size() == 1);
  CHECK(report["renames"][0]["oldName"] == "No");
  CHECK(report["renames"][0]["newName"] == "DepNo");
  CHECK(report["untouched"] == 0);

  // the repaired file lints clean
  CHECK(runCli({"lint", fixedPath.string()}).exitCode == 0);
}

TEST_CASE("fix: --in-place overwrites the input") {
  const fs::path input = tempDir() / "inplace.erdl";
  std::ofstream(input) << testsupport::corpusFile("mutants/mutant_name3.erdl");

  const auto result = runCli({"fix", input.string(), "--in-place"});
  CHECK(result.exitCode == 0);
  CHECK(slurp(input).find("key EmpNo") != std::string::npos);
  CHECK_FALSE(fs::exists(tempDir() / "inplace.fixed.erdl"));
}

TEST_CASE("fix: json input mirrors the format") {
  const fs::path input = tempDir() / "sub2.json";
  std::ofstream(input) << testsupport::corpusFile("mutants/mutant_sub2.json");

  const auto result = runCli({"fix", input.string()});
  CHECK(result.exitCode == 0);
  const fs::path fixedPath = tempDir() / "sub2.fixed.json";
  REQUIRE(fs::exists(fixedPath));
  CHECK_NOTHROW(nlohmann::json::parse(slurp(fixedPath)));
}

TEST_CASE("transform: writes the golden DDL and schema JSON") {
  const fs::path sql = tempDir() / "f1.sql";
  const fs::path schemaJson = tempDir() / "f1.schema.json";
  const auto result = runCli({"transform", testsupport::corpusPath("figure1.erdl"), "--out",
                              sql.string(), "--schema-json", schemaJson.string()});
  CHECK(result.exitCode == 0);
  CHECK(slurp(sql) == testsupport::corpusFile("golden/figure1.sql"));
  CHECK(slurp(schemaJson) == testsupport::corpusFile("golden/figure1.schema.json"));
}

TEST_CASE("transform: refuses models with errors, exit 1") {
  const fs::path sql = tempDir() / "refused.sql";
  const auto result = runCli({"transform", testsupport::corpusPath("mutants/mutant_card.erdl"),
                              "--out", sql.string()});
  CHECK(result.exitCode == 1);
  CHECK_FALSE(fs::exists(sql));
  CHECK(result.err.find("R-CARD-1") != std::string::npos);
}

TEST_CASE("render: writes the golden DOT and honors --rankdir") {
  const fs::path dot = tempDir() / "f1.dot";
  const auto result =
      runCli({"render", testsupport::corpusPath("figure1.erdl"), "--out", dot.string()});
  CHECK(result.exitCode == 0);
  CHECK(slurp(dot) == testsupport::corpusFile("golden/figure1.dot"));

  const auto tb = runCli({"render", testsupport::corpusPath("figure1.erdl"), "--out",
                          dot.string(), "--rankdir", "TB"});
  CHECK(tb.exitCode == 0);
  CHECK(slurp(dot).find("rankdir=TB;") != std::string::npos);
}

TEST_CASE("informational output stays on stderr") {
  const fs::path input = tempDir() / "quiet.erdl";
  std::ofstream(input) << testsupport::corpusFile("mutants/mutant_key.erdl");
  const auto result = runCli({"fix", input.string()});
  CHECK(result.err.find("wrote") != std::string::npos);
  CHECK(result.out.find("wrote") == std::string::npos); // stdout is the machine report
}
