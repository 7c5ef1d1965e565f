#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lpwp/cli.hpp"
#include "lpwp/io.hpp"

using namespace lpwp;
using namespace lpwp::cli;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::filesystem::path kFixtures = LPWP_FIXTURES;

std::string fx(const char* name) { return (kFixtures / name).string(); }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const CliConfig& c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

CliConfig cmd(Command command) {
  CliConfig c;
  c.command = command;
  return c;
}

// A scratch directory removed when the test ends.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("lpwp_cli_" + std::to_string(Catch::getSeed()) + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const char* name, const std::string& content) const {
    const auto p = path / name;
    write_text_file(p, content);
    return p.string();
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

}  // namespace

TEST_CASE("score-gen on the fixtures", "[cli]") {
  auto c = cmd(Command::score_gen);
  c.gold = fx("gold.irs");
  c.pred = fx("pred.irs");
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("declarations: 9\n"));
  CHECK_THAT(r.out, ContainsSubstring("loss: 3\n"));
  CHECK_THAT(r.out, ContainsSubstring("accuracy: 0.666667\n"));
  // Rows are sorted by id regardless of file order.
  CHECK(r.out.find("p1") < r.out.find("p2"));
  CHECK(r.out.find("p2") < r.out.find("p3"));

  c.json = true;
  const auto j = nlohmann::json::parse(run_cli(c).out);
  CHECK(j["accuracy"].get<double>() == Catch::Approx(6.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("score-gen against itself is perfect", "[cli]") {
  auto c = cmd(Command::score_gen);
  c.gold = c.pred = fx("gold.irs");
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("accuracy: 1.000000\n"));
}

TEST_CASE("score-gen treats an unparseable prediction as empty", "[cli]") {
  TempDir tmp;
  auto c = cmd(Command::score_gen);
  c.gold = tmp.file("g.irs", "### a\n" + read_text_file(fx("fixture1.ir")).substr(std::string("### fixture1\n").size()));
  c.pred = tmp.file("p.irs", "### a\n<DECLARATION><VAR>x</VAR>\n");
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.err, ContainsSubstring("warning:"));
  CHECK_THAT(r.out, ContainsSubstring("accuracy: 0.000000\n"));

  c.pred = tmp.file("q.irs", "### zzz\n<DECLARATION><VAR>x</VAR> <CONST_DIR>at most</CONST_DIR> <LIMIT>1</LIMIT></DECLARATION>\n");
  const auto unknown = run_cli(c);
  CHECK(unknown.code == kExitInputError);
  CHECK_THAT(unknown.err, ContainsSubstring("unknown problem id 'zzz'"));
}

TEST_CASE("score-ner prints both averaging modes", "[cli]") {
  auto c = cmd(Command::score_ner);
  c.gold = fx("ner_gold.json");
  c.pred = fx("ner_pred.json");
  auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("0.714286"));
  CHECK_THAT(r.out, ContainsSubstring("0.538462"));
  c.json = true;
  c.mode = AveragingMode::macro;
  r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.dump().find("0.53846") != std::string::npos);
}

TEST_CASE("pipeline on the fixture file", "[cli]") {
  auto c = cmd(Command::pipeline);
  c.problem = fx("fixture1.ir");
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("problem: fixture1\n"));
  CHECK_THAT(r.out, ContainsSubstring(read_text_file(fx("fixture1.lp"))));
  CHECK_THAT(r.out, ContainsSubstring("status: OPTIMAL\nobjective: 46\nx = 6\ny = 4\n"));

  TempDir tmp;
  c.lp_out = (tmp.path / "model.lp").string();
  c.json = true;
  const auto j = run_cli(c);
  REQUIRE(j.code == kExitOk);
  CHECK(read_text_file(c.lp_out) == read_text_file(fx("fixture1.lp")));
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["solution"]["status"] == "OPTIMAL");
  CHECK(doc["solution"]["objective"].get<double>() == 46.0);
}

TEST_CASE("pipeline checks the problem against a dataset", "[cli]") {
  auto c = cmd(Command::pipeline);
  c.input = fx("fixture1.ir");
  c.data = fx("small_dataset.json");
  const auto r = run_cli(c);
  CHECK(r.code == kExitInputError);
  CHECK_THAT(r.err, ContainsSubstring("no annotated problem with id 'fixture1'"));
}

TEST_CASE("emit-lp and solve", "[cli]") {
  auto c = cmd(Command::emit_lp);
  c.input = fx("fixture1.ir");
  CHECK(run_cli(c).out == read_text_file(fx("fixture1.lp")));
  c.emit = EmitFormat::mps;
  CHECK(run_cli(c).out.starts_with("NAME          fixture1\n"));

  c = cmd(Command::solve);
  c.input = fx("gold.irs");
  CHECK(run_cli(c).code == kExitInputError);  // several problems, no --problem
  c.problem = "p3";
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("status: OPTIMAL\n"));
  c.problem = "nope";
  CHECK(run_cli(c).code == kExitInputError);
}

TEST_CASE("parse-ir re-serializes or emits canonical JSON", "[cli]") {
  auto c = cmd(Command::parse_ir);
  c.input = fx("gold.irs");
  const auto text = run_cli(c);
  REQUIRE(text.code == kExitOk);
  CHECK(text.out.starts_with("### p1\n"));
  c.json = true;
  c.problem = "p2";
  const auto j = nlohmann::json::parse(run_cli(c).out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["id"] == "p2");
}

TEST_CASE("stats over the small dataset", "[cli]") {
  auto c = cmd(Command::stats);
  c.data = fx("small_dataset.json");
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("total: 4\n"));
}

TEST_CASE("input errors exit 1 with a position", "[cli]") {
  auto c = cmd(Command::parse_ir);
  c.input = fx("bad_unbalanced.ir");
  auto r = run_cli(c);
  CHECK(r.code == kExitInputError);
  CHECK_THAT(r.err, ContainsSubstring("bad_unbalanced.ir:2:1:"));

  c.input = fx("does_not_exist.ir");
  r = run_cli(c);
  CHECK(r.code == kExitInputError);
  CHECK(r.out.empty());

  c = cmd(Command::score_gen);
  c.gold = fx("gold.irs");
  r = run_cli(c);
  CHECK(r.code == kExitInputError);
  CHECK_THAT(r.err, ContainsSubstring("--pred"));

  c.pred = fx("gold.irs");
  c.tol = 0;
  CHECK(run_cli(c).code == kExitInputError);
}

TEST_CASE("a custom lexicon changes which directions parse", "[cli]") {
  TempDir tmp;
  const std::string ir =
      "<DECLARATION><OBJ_DIR>maximize</OBJ_DIR> <OBJ_NAME>p</OBJ_NAME> [IS] <VAR>x</VAR></DECLARATION>\n"
      "<DECLARATION><VAR>x</VAR> <CONST_DIR>tops out at</CONST_DIR> <LIMIT>3</LIMIT></DECLARATION>\n";
  auto c = cmd(Command::solve);
  c.input = tmp.file("m.ir", ir);
  CHECK(run_cli(c).code == kExitInputError);
  c.lexicon_path = tmp.file("lex.txt", "tops out at = LE\nmaximize = MAX\n");
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("objective: 3\n"));
}

TEST_CASE("--out writes the report to a file", "[cli]") {
  TempDir tmp;
  auto c = cmd(Command::stats);
  c.data = fx("small_dataset.json");
  c.out = (tmp.path / "stats.txt").string();
  const auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  CHECK_THAT(read_text_file(c.out), ContainsSubstring("total: 4\n"));
}

TEST_CASE("output is deterministic", "[cli]") {
  auto c = cmd(Command::score_gen);
  c.gold = fx("gold.irs");
  c.pred = fx("pred.irs");
  CHECK(run_cli(c).out == run_cli(c).out);
  c = cmd(Command::pipeline);
  c.input = fx("fixture1.ir");
  CHECK(run_cli(c).out == run_cli(c).out);
}
