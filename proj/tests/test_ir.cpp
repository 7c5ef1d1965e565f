#include <catch_amalgamated.hpp>

#include <filesystem>

#include "lpwp/io.hpp"
#include "lpwp/ir.hpp"
#include "support/generators.hpp"

using namespace lpwp;

namespace {

const std::filesystem::path kFixtures = LPWP_FIXTURES;

// Line and column of the first ParseError raised by parse_ir(text).
std::pair<std::size_t, std::size_t> error_position(std::string_view text, const IrParseOptions& opts = {}) {
  try {
    parse_ir(text, opts);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

std::string error_message(std::string_view text, const IrParseOptions& opts = {}) {
  try {
    parse_ir(text, opts);
  } catch (const ParseError& e) {
    return e.message();
  }
  return "";
}

const std::string kObj =
    "<DECLARATION><OBJ_DIR>maximize</OBJ_DIR> <OBJ_NAME>profit</OBJ_NAME> [IS] <PARAM>5</PARAM> [TIMES] "
    "<VAR>x</VAR></DECLARATION>\n";

}  // namespace

TEST_CASE("parse the two-variable fixture", "[ir]") {
  const auto docs = split_ir_documents(read_text_file(kFixtures / "fixture1.ir"));
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "fixture1");
  CHECK(docs[0].first_line == 2);
  const auto f = parse_ir(docs[0].text);
  CHECK(f.vars.names() == std::vector<std::string>{"x", "y"});
  CHECK(f.objective.direction == Sense::MAXIMIZE);
  CHECK(f.objective.name == "profit");
  CHECK(f.objective.expr.coefficient("x") == 5.0);
  CHECK(f.objective.expr.coefficient("y") == 4.0);
  REQUIRE(f.constraints.size() == 2);
  CHECK(f.constraints[0].relation == Relation::LE);
  CHECK(f.constraints[0].lhs.coefficient("y") == 1.0);
  CHECK(f.constraints[0].rhs.constant == 10.0);
  CHECK(f.constraints[1].rhs.constant == 6.0);
}

TEST_CASE("variables are ordered by first appearance without a header", "[ir]") {
  const auto f = parse_ir(
      "<DECLARATION><OBJ_DIR>minimize</OBJ_DIR> <OBJ_NAME>cost</OBJ_NAME> [IS] <PARAM>2</PARAM> [TIMES] <VAR>b</VAR> "
      "[PLUS] <PARAM>3</PARAM> [TIMES] <VAR>a</VAR></DECLARATION>"
      "<DECLARATION><VAR>c</VAR> <CONST_DIR>at least</CONST_DIR> <LIMIT>1</LIMIT></DECLARATION>");
  CHECK(f.vars.names() == std::vector<std::string>{"b", "a", "c"});
  CHECK(f.objective.direction == Sense::MINIMIZE);
  CHECK(f.constraints[0].relation == Relation::GE);
}

TEST_CASE("numerals with currency, separators and percentages", "[ir]") {
  const auto f = parse_ir(kObj +
                          "<DECLARATION><PARAM>$1,250.50</PARAM> [TIMES] <VAR>x</VAR> <CONST_DIR>at most</CONST_DIR> "
                          "<LIMIT>30%</LIMIT></DECLARATION>");
  CHECK(f.constraints[0].lhs.coefficient("x") == 1250.5);
  CHECK(f.constraints[0].rhs.constant == 0.3);
  CHECK_FALSE(parse_numeral("1,00"));
  CHECK_FALSE(parse_numeral("1,0000"));
  CHECK_FALSE(parse_numeral("abc"));
  CHECK(parse_numeral("12,345,678") == 12345678.0);
  CHECK(parse_numeral("-2.5e3") == -2500.0);
}

TEST_CASE("a ratio constraint keeps variables on both sides", "[ir]") {
  const auto f = parse_ir(kObj +
                          "<DECLARATION><VAR>x</VAR> <CONST_DIR>at least</CONST_DIR> <PARAM>30%</PARAM> [TIMES] "
                          "<VAR>x</VAR> [PLUS] <PARAM>0.3</PARAM> [TIMES] <VAR>y</VAR></DECLARATION>");
  const auto& c = f.constraints[0];
  CHECK(c.lhs.coefficient("x") == 1.0);
  CHECK(c.rhs.coefficient("x") == 0.3);
  CHECK(c.rhs.coefficient("y") == 0.3);
  CHECK(c.rhs.constant == 0.0);
}

TEST_CASE("leading minus and implicit coefficients", "[ir]") {
  const auto f = parse_ir(kObj +
                          "<DECLARATION>[MINUS] <VAR>x</VAR> [PLUS] <PARAM>2</PARAM> <VAR>y</VAR> "
                          "<CONST_DIR>no more than</CONST_DIR> [MINUS] <PARAM>4</PARAM></DECLARATION>");
  const auto& c = f.constraints[0];
  CHECK(c.lhs.coefficient("x") == -1.0);
  CHECK(c.lhs.coefficient("y") == 2.0);
  CHECK(c.rhs.constant == -4.0);
}

TEST_CASE("norm attribute overrides the surface phrase", "[ir]") {
  const auto f = parse_ir(kObj +
                          "<DECLARATION><VAR>x</VAR> <CONST_DIR norm=\"GE\">a whole bunch of</CONST_DIR> "
                          "<LIMIT>3</LIMIT></DECLARATION>");
  CHECK(f.constraints[0].relation == Relation::GE);
}

TEST_CASE("custom lexicon resolves extra phrases", "[ir]") {
  const std::string text = kObj + "<DECLARATION><VAR>x</VAR> <CONST_DIR>tops out at</CONST_DIR> <LIMIT>3</LIMIT></DECLARATION>";
  CHECK(error_message(text) == "unknown direction 'tops out at'");
  const auto lex = DirectionLexicon::parse("# extra\ntops  out AT = le\nmaximize = MAX\n");
  CHECK(parse_ir(text, {&lex, 1}).constraints[0].relation == Relation::LE);
  CHECK_THROWS(DirectionLexicon::parse("nonsense line"));
  CHECK_THROWS(DirectionLexicon::parse("phrase = SIDEWAYS"));
}

TEST_CASE("errors report line and column", "[ir]") {
  SECTION("unknown tag") {
    const std::string t = kObj + "<DECLARATION><COST>5</COST></DECLARATION>";
    CHECK(error_position(t) == std::pair<std::size_t, std::size_t>{2, 14});
    CHECK(error_message(t) == "unknown tag <COST>");
  }
  SECTION("unknown keyword") {
    CHECK(error_message(kObj + "<DECLARATION><VAR>x</VAR> [DIV] <VAR>y</VAR></DECLARATION>") ==
          "unknown keyword [DIV]");
  }
  SECTION("multiple objectives") {
    CHECK(error_position(kObj + kObj) == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(error_message(kObj + kObj) == "multiple objectives");
  }
  SECTION("no objective") {
    CHECK(error_message("<DECLARATION><VAR>x</VAR> <CONST_DIR>at most</CONST_DIR> <LIMIT>1</LIMIT></DECLARATION>") ==
          "no objective declaration");
    CHECK(error_message("") == "no objective declaration");
  }
  SECTION("unbalanced") {
    CHECK_THROWS_WITH(parse_ir("<DECLARATION><OBJ_DIR>maximize</OBJ_DIR> <OBJ_NAME>p</OBJ_NAME> [IS] <VAR>x</VAR>"),
                      Catch::Matchers::ContainsSubstring("unbalanced"));
    CHECK_THROWS_WITH(parse_ir("<DECLARATION><OBJ_DIR>maximize</OBJ_NAME>"),
                      Catch::Matchers::ContainsSubstring("unbalanced"));
  }
  SECTION("bad numeral") {
    CHECK(error_message(kObj + "<DECLARATION><VAR>x</VAR> <CONST_DIR>at most</CONST_DIR> <LIMIT>ten</LIMIT></DECLARATION>") ==
          "invalid numeral 'ten' in <LIMIT>");
  }
  SECTION("unknown norm key") {
    CHECK(error_message(kObj + "<DECLARATION><VAR>x</VAR> <CONST_DIR norm=\"NE\">not</CONST_DIR> <LIMIT>1</LIMIT></DECLARATION>") ==
          "unknown norm key 'NE' on <CONST_DIR>");
  }
  SECTION("vacuous constraint") {
    CHECK(error_message(kObj + "<DECLARATION><PARAM>3</PARAM> <CONST_DIR>at most</CONST_DIR> <LIMIT>1</LIMIT></DECLARATION>") ==
          "vacuous constraint (no variables)");
  }
  SECTION("missing right-hand side") {
    CHECK(error_message(kObj + "<DECLARATION><VAR>x</VAR> <CONST_DIR>at most</CONST_DIR></DECLARATION>") ==
          "constraint has no right-hand side");
  }
  SECTION("objective with a constant") {
    CHECK(error_message("<DECLARATION><OBJ_DIR>maximize</OBJ_DIR> <OBJ_NAME>p</OBJ_NAME> [IS] <VAR>x</VAR> [PLUS] "
                        "<PARAM>3</PARAM></DECLARATION>") == "objective carries a constant term");
  }
  SECTION("sense used as a relation") {
    CHECK(error_message(kObj + "<DECLARATION><VAR>x</VAR> <CONST_DIR>maximize</CONST_DIR> <LIMIT>1</LIMIT></DECLARATION>") ==
          "constraint direction 'maximize' maps to an objective sense");
  }
  SECTION("variable missing from header") {
    CHECK(error_message("<VARS><VAR>y</VAR></VARS>" + kObj) == "variable 'x' is not listed in <VARS>");
  }
  SECTION("first_line offsets line numbers") {
    CHECK(error_position(kObj + kObj, {nullptr, 10}).first == 11);
  }
}

TEST_CASE("serializer output for the fixture", "[ir]") {
  const auto f = parse_ir(split_ir_documents(read_text_file(kFixtures / "fixture1.ir"))[0].text);
  CHECK(serialize_ir(f) ==
        "<VARS><VAR>x</VAR> <VAR>y</VAR></VARS>\n"
        "<DECLARATION><OBJ_DIR norm=\"MAX\">maximize</OBJ_DIR> <OBJ_NAME>profit</OBJ_NAME> [IS] <PARAM>5</PARAM> "
        "[TIMES] <VAR>x</VAR> [PLUS] <PARAM>4</PARAM> [TIMES] <VAR>y</VAR></DECLARATION>\n"
        "<DECLARATION><PARAM>1</PARAM> [TIMES] <VAR>x</VAR> [PLUS] <PARAM>1</PARAM> [TIMES] <VAR>y</VAR> "
        "<CONST_DIR norm=\"LE\">at most</CONST_DIR> <LIMIT>10</LIMIT></DECLARATION>\n"
        "<DECLARATION><PARAM>1</PARAM> [TIMES] <VAR>x</VAR> <CONST_DIR norm=\"LE\">at most</CONST_DIR> "
        "<LIMIT>6</LIMIT></DECLARATION>\n");
}

TEST_CASE("split_ir_documents", "[ir]") {
  const auto docs = split_ir_documents("### a\nA1\nA2\n###   b  \nB\n");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "a");
  CHECK(docs[0].text == "A1\nA2\n");
  CHECK(docs[1].id == "b");
  CHECK(docs[1].first_line == 5);
  CHECK(split_ir_documents("plain").at(0).id.empty());
  CHECK_THROWS_AS(split_ir_documents("### a\n### a\n"), ParseError);
  CHECK_THROWS_AS(split_ir_documents("junk\n### a\n"), ParseError);
  CHECK_THROWS_AS(split_ir_documents("###\n"), ParseError);
}

TEST_CASE("validate rejects malformed formulations", "[ir]") {
  ProblemFormulation f;
  f.vars = VarOrderMap({"x"});
  f.objective.expr.terms["x"] = 1.0;
  CHECK_NOTHROW(validate(f));
  f.objective.expr.terms["y"] = 1.0;
  CHECK_THROWS_AS(validate(f), ValidationError);
  f.objective.expr.terms.erase("y");
  f.objective.expr.constant = 1.0;
  CHECK_THROWS_AS(validate(f), ValidationError);
  f.objective.expr.constant = 0.0;
  f.constraints.push_back({LinExpr{2.0, {}}, Relation::LE, LinExpr{3.0, {}}});
  CHECK_THROWS_AS(validate(f), ValidationError);
  CHECK_THROWS_AS(VarOrderMap({"x", "x"}), ValidationError);
}

TEST_CASE("property: parse(serialize(f)) == f on random formulations", "[ir][property]") {
  testing::Rng rng(424242);
  for (int i = 0; i < 1000; ++i) {
    const auto f = testing::random_formulation(rng);
    const std::string text = serialize_ir(f);
    const auto back = parse_ir(text);
    INFO(text);
    REQUIRE(back == f);
    REQUIRE(serialize_ir(back) == text);
  }
}
