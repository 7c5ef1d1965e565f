#include <catch_amalgamated.hpp>

#include <algorithm>

#include "lpwp/canonical.hpp"
#include "support/generators.hpp"
#include "support/ir_text.hpp"
#include "support/oracles.hpp"

using namespace lpwp;
using namespace lpwp::testing;
using Catch::Approx;

namespace {

const std::string kObj = ir_objective("maximize", {{5, "x"}, {4, "y"}});

MatchResult result(std::size_t d, std::size_t fp, std::size_t fn) {
  MatchResult r;
  r.gold_declarations = d;
  r.false_positives = fp;
  r.false_negatives = fn;
  return r;
}

}  // namespace

TEST_CASE("ratio constraint rearranges to a homogeneous LE row", "[canonical]") {
  const auto cf = canon(kObj +
                        "<DECLARATION><VAR>x</VAR> <CONST_DIR>at least</CONST_DIR> <PARAM>0.3</PARAM> [TIMES] "
                        "<VAR>x</VAR> [PLUS] <PARAM>0.3</PARAM> [TIMES] <VAR>y</VAR></DECLARATION>");
  REQUIRE(cf.constraints.size() == 1);
  const auto& c = cf.constraints[0];
  CHECK(c.coeffs[0] == Approx(-0.7).epsilon(1e-15));
  CHECK(c.coeffs[1] == Approx(0.3).epsilon(1e-15));
  CHECK(c.relation == Relation::LE);
  CHECK(c.bound == 0.0);
  CHECK_FALSE(std::signbit(c.bound));

  // Substitution check: x >= 0.3(x + y) exactly when -0.7x + 0.3y <= 0.
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double x = uniform_int(rng, -100, 100) / 7.0;
    const double y = uniform_int(rng, -100, 100) / 7.0;
    const double original = x - 0.3 * (x + y);
    if (std::fabs(original) < 1e-9) continue;
    CHECK((original >= 0) == (c.coeffs[0] * x + c.coeffs[1] * y <= 0));
  }
}

TEST_CASE("constants move right and GE rows are negated", "[canonical]") {
  const auto cf = canon(kObj +
                        "<DECLARATION><VAR>x</VAR> [PLUS] <PARAM>2</PARAM> <CONST_DIR>at least</CONST_DIR> "
                        "<VAR>y</VAR> [PLUS] <PARAM>5</PARAM></DECLARATION>");
  const auto& c = cf.constraints[0];
  CHECK(c.coeffs == std::vector<double>{-1, 1});
  CHECK(c.relation == Relation::LE);
  CHECK(c.bound == -3.0);
}

TEST_CASE("equalities get a positive leading coefficient", "[canonical]") {
  const auto a = canon(kObj + ir_constraint({{1, "x"}, {-1, "y"}}, "exactly", 2));
  const auto b = canon(kObj + ir_constraint({{-1, "x"}, {1, "y"}}, "exactly", -2));
  CHECK(a.constraints == b.constraints);
  CHECK(a.constraints[0].coeffs == std::vector<double>{1, -1});
  CHECK(a.constraints[0].relation == Relation::EQ);
}

TEST_CASE("GE and negated LE canonicalize identically", "[canonical]") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double a = uniform_int(rng, -9, 9), b = uniform_int(rng, -9, 9), k = uniform_int(rng, -9, 9);
    if (a == 0 && b == 0) continue;
    const auto ge = canon(kObj + ir_constraint({{a, "x"}, {b, "y"}}, "at least", k));
    const auto le = canon(kObj + ir_constraint({{-a, "x"}, {-b, "y"}}, "at most", -k));
    CHECK(ge.constraints == le.constraints);
  }
}

TEST_CASE("canonicalize rejects degenerate input", "[canonical]") {
  ProblemFormulation f;
  f.vars = VarOrderMap({"x", "y"});
  f.objective.expr.terms = {{"x", 1.0}, {"y", -1.0}};
  f.constraints.push_back({LinExpr{0, {{"x", 1.0}}}, Relation::LE, LinExpr{4, {{"x", 1.0}}}});
  CHECK_THROWS_AS(canonicalize(f), ValidationError);
  f.constraints.clear();
  f.objective.expr.terms = {{"x", 0.0}};
  CHECK_THROWS_AS(canonicalize(f), ValidationError);
}

TEST_CASE("decl_equal tolerance and scale normalization", "[canonical]") {
  const CanonConstraint a{{1, 1}, Relation::LE, 5};
  CHECK(decl_equal(a, CanonConstraint{{1 + 5e-7, 1}, Relation::LE, 5}));
  CHECK_FALSE(decl_equal(a, CanonConstraint{{1 + 5e-6, 1}, Relation::LE, 5}));
  CHECK(decl_equal(a, CanonConstraint{{1 + 5e-6, 1}, Relation::LE, 5}, {1e-5, false}));
  CHECK_FALSE(decl_equal(a, CanonConstraint{{1, 1}, Relation::EQ, 5}));
  const CanonConstraint doubled{{2, 2}, Relation::LE, 10};
  CHECK_FALSE(decl_equal(a, doubled));
  CHECK(decl_equal(a, doubled, {1e-6, true}));
  CHECK_THROWS_AS(decl_equal(a, CanonConstraint{{1, 1, 0}, Relation::LE, 5}), std::invalid_argument);
  CHECK(decl_equal(CanonObjective{Sense::MAXIMIZE, {1, 2}}, CanonObjective{Sense::MAXIMIZE, {1, 2}}));
  CHECK_FALSE(decl_equal(CanonObjective{Sense::MAXIMIZE, {1, 2}}, CanonObjective{Sense::MINIMIZE, {1, 2}}));
}

TEST_CASE("one wrong constraint of three gives accuracy one third", "[canonical]") {
  const std::string gold = kObj + ir_constraint({{1, "x"}, {1, "y"}}, "at most", 10) +
                           ir_constraint({{1, "x"}}, "at most", 6);
  const std::string pred = kObj + ir_constraint({{1, "x"}, {1, "y"}}, "at most", 10) +
                           ir_constraint({{1, "x"}}, "at most", 7);
  const std::vector<ScoredPair> pairs = {{"p", canon(gold), canon(pred)}};
  const auto rep = mapping_accuracy(pairs);
  CHECK(rep.per_problem[0].gold_declarations == 3);
  CHECK(rep.per_problem[0].false_positives == 1);
  CHECK(rep.per_problem[0].false_negatives == 1);
  CHECK(std::fabs(rep.accuracy - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("the per-problem loss is clamped at D", "[canonical]") {
  const auto rep = accuracy_from_matches({"p"}, {result(2, 5, 2)});
  CHECK(rep.total_loss == 2);
  CHECK(rep.accuracy == 0.0);
  const auto mixed = accuracy_from_matches({"a", "b"}, {result(2, 5, 2), result(4, 0, 1)});
  CHECK(mixed.total_loss == 3);
  CHECK(mixed.accuracy == 1.0 - 3.0 / 6.0);
}

TEST_CASE("accuracy needs problems with gold declarations", "[canonical]") {
  CHECK_THROWS_AS(accuracy_from_matches({}, {}), Error);
  CHECK_THROWS_AS(accuracy_from_matches({"p"}, {result(0, 1, 0)}), Error);
  const std::vector<ScoredPair> no_gold_objective = {{"p", CanonForm{}, CanonForm{}}};
  CHECK_THROWS_AS(mapping_accuracy(no_gold_objective), Error);
}

TEST_CASE("matching ignores variable order and declaration order", "[canonical]") {
  const std::string gold = ir_objective("maximize", {{5, "x"}, {4, "y"}}) +
                           ir_constraint({{1, "x"}, {2, "y"}}, "at most", 10) + ir_constraint({{1, "y"}}, "at least", 1);
  const std::string pred = ir_constraint({{1, "y"}}, "at least", 1) +
                           ir_objective("maximize", {{4, "y"}, {5, "x"}}) +
                           ir_constraint({{2, "y"}, {1, "x"}}, "at most", 10);
  const auto r = match_declarations(canon(gold), canon(pred));
  CHECK(r.false_positives == 0);
  CHECK(r.false_negatives == 0);
  CHECK(r.matched_pairs.size() == 3);
}

TEST_CASE("declarations over unknown variables never match", "[canonical]") {
  const std::string gold = kObj + ir_constraint({{1, "x"}}, "at most", 6);
  const std::string pred = kObj + ir_constraint({{1, "x"}, {1, "w"}}, "at most", 6);
  const auto r = match_declarations(canon(gold), canon(pred));
  CHECK(r.false_positives == 1);
  CHECK(r.false_negatives == 1);
}

TEST_CASE("an empty prediction loses every gold declaration", "[canonical]") {
  const auto gold = canon(kObj + ir_constraint({{1, "x"}}, "at most", 6));
  const auto r = match_declarations(gold, CanonForm{});
  CHECK(r.false_negatives == 2);
  CHECK(r.false_positives == 0);
  CHECK(r.clamped_loss() == 2);
}

TEST_CASE("property: bipartite matching equals exhaustive search", "[canonical][property]") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto [gold, pred] = random_canon_pair(rng);
    const MatchOptions opts{1e-6, testing::coin(rng, 0.3)};
    const auto r = match_declarations(gold, pred, opts);
    REQUIRE(r.matched_pairs.size() == exhaustive_match_count(gold, pred, opts));
    REQUIRE(r.false_negatives + r.matched_pairs.size() == gold.declaration_count());
    REQUIRE(r.false_positives + r.matched_pairs.size() == pred.declaration_count());
  }
}

TEST_CASE("property: matching is invariant under prediction order", "[canonical][property]") {
  Rng rng(123);
  for (int i = 0; i < 200; ++i) {
    auto [gold, pred] = random_canon_pair(rng);
    const auto before = match_declarations(gold, pred);
    std::shuffle(pred.constraints.begin(), pred.constraints.end(), rng);
    std::shuffle(gold.constraints.begin(), gold.constraints.end(), rng);
    const auto after = match_declarations(gold, pred);
    CHECK(after.false_positives == before.false_positives);
    CHECK(after.false_negatives == before.false_negatives);
  }
}

TEST_CASE("property: supplying a missed declaration removes one false negative", "[canonical][property]") {
  Rng rng(321);
  int exercised = 0;
  for (int i = 0; i < 800; ++i) {
    auto [gold, pred] = random_canon_pair(rng);
    if (!(pred.vars == gold.vars)) continue;
    const auto before = match_declarations(gold, pred);
    std::vector<bool> matched(gold.declaration_count(), false);
    for (const auto& [g, p] : before.matched_pairs) matched[g] = true;
    std::size_t missed = 0;
    while (missed < matched.size() && matched[missed]) ++missed;
    if (missed == 0 || missed == matched.size()) continue;
    pred.constraints.push_back(gold.constraints[missed - 1]);
    const auto after = match_declarations(gold, pred);
    CHECK(after.matched_pairs.size() == before.matched_pairs.size() + 1);
    CHECK(after.false_negatives + 1 == before.false_negatives);
    CHECK(after.false_positives == before.false_positives);
    CHECK(after.clamped_loss() <= before.clamped_loss());
    ++exercised;
  }
  CHECK(exercised > 50);
}

TEST_CASE("property: accuracy stays in [0, 1]", "[canonical][property]") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    std::vector<MatchResult> rs;
    std::vector<std::string> ids;
    const int n = uniform_int(rng, 1, 6);
    for (int k = 0; k < n; ++k) {
      rs.push_back(result(static_cast<std::size_t>(uniform_int(rng, 1, 8)), static_cast<std::size_t>(uniform_int(rng, 0, 12)),
                          static_cast<std::size_t>(uniform_int(rng, 0, 8))));
      ids.push_back(std::to_string(k));
    }
    const auto rep = accuracy_from_matches(ids, rs);
    CHECK(rep.accuracy >= 0.0);
    CHECK(rep.accuracy <= 1.0);
  }
}
