#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "schedlift/instance.hpp"
#include "schedlift/lp.hpp"
#include "schedlift/oracle.hpp"

using namespace schedlift;

namespace {

LinearRow row(std::map<int, Rational> coeffs, Relation rel, Rational rhs) {
  LinearRow r;
  r.coeffs = std::move(coeffs);
  r.rel = rel;
  r.rhs = std::move(rhs);
  return r;
}

}  // namespace

TEST_CASE("contradicting singleton rows are infeasible") {
  LinearProgram lp;
  lp.varcount = 1;
  lp.rows.push_back(row({{0, 1}}, Relation::LessEq, 1));
  lp.rows.push_back(row({{0, 1}}, Relation::GreaterEq, 2));
  CHECK(!solve_feasibility(lp).feasible);
}

TEST_CASE("empty system over one variable is feasible inside the box") {
  LinearProgram lp;
  lp.varcount = 1;
  const SolveResult r = solve_feasibility(lp);
  REQUIRE(r.feasible);
  CHECK(r.point.values[0] >= 0);
  CHECK(r.point.values[0] <= 1);
}

TEST_CASE("two-variable contradiction needs real pivoting") {
  LinearProgram lp;
  lp.varcount = 2;
  lp.rows.push_back(row({{0, 1}, {1, 1}}, Relation::LessEq, 1));
  lp.rows.push_back(row({{0, 1}, {1, 1}}, Relation::GreaterEq, Rational(5, 2)));
  CHECK(!solve_feasibility(lp).feasible);

  LinearProgram ok;
  ok.varcount = 2;
  ok.rows.push_back(row({{0, 1}, {1, 1}}, Relation::LessEq, Rational(3, 2)));
  ok.rows.push_back(row({{0, 1}, {1, 1}}, Relation::GreaterEq, Rational(3, 2)));
  const SolveResult r = solve_feasibility(ok);
  REQUIRE(r.feasible);
  CHECK(r.point.values[0] + r.point.values[1] == Rational(3, 2));
  CHECK(point_satisfies(ok, r.point));
}

TEST_CASE("degenerate equalities with ties resolve") {
  LinearProgram lp;
  lp.varcount = 3;
  lp.rows.push_back(row({{0, 1}, {1, -1}}, Relation::Equal, 0));
  lp.rows.push_back(row({{1, 1}, {2, -1}}, Relation::Equal, 0));
  lp.rows.push_back(row({{2, 1}, {0, -1}}, Relation::Equal, 0));
  lp.rows.push_back(row({{0, 1}, {1, 1}, {2, 1}}, Relation::Equal,
                        Rational(3, 2)));
  const SolveResult r = solve_feasibility(lp);
  REQUIRE(r.feasible);
  CHECK(r.point.values[0] == Rational(1, 2));
  CHECK(r.point.values[1] == Rational(1, 2));
  CHECK(r.point.values[2] == Rational(1, 2));
}

TEST_CASE("diamond horizon three is feasible, two is not") {
  const Instance inst = Instance::make(4, 2, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
  {
    auto [lp, ti] = build_time_indexed_lp(inst, 3);
    const SolveResult r = solve_feasibility(lp);
    REQUIRE(r.feasible);
    CHECK(point_satisfies(lp, r.point));
  }
  {
    auto [lp, ti] = build_time_indexed_lp(inst, 2);
    CHECK(!solve_feasibility(lp).feasible);
  }
}

TEST_CASE("huge coefficients fall back to big rationals") {
  const Rational big = Rational(BigInt("1000000000000000000000000000000"));
  LinearProgram lp;
  lp.varcount = 2;
  lp.rows.push_back(row({{0, big}, {1, big + 1}}, Relation::Equal, big));
  const SolveResult r = solve_feasibility(lp);
  REQUIRE(r.feasible);
  CHECK(point_satisfies(lp, r.point));
  CHECK(r.point.values[0] * big + r.point.values[1] * (big + 1) == big);

  LinearProgram bad;
  bad.varcount = 2;
  bad.rows.push_back(row({{0, big}, {1, big}}, Relation::GreaterEq,
                         2 * big + 1));
  CHECK(!solve_feasibility(bad).feasible);
}

TEST_CASE("tiny fractions stay exact") {
  const Rational eps(1, BigInt("1000000000000000000000"));
  LinearProgram lp;
  lp.varcount = 2;
  lp.rows.push_back(row({{0, 1}, {1, -1}}, Relation::Equal, eps));
  lp.rows.push_back(row({{0, 1}, {1, 1}}, Relation::Equal, Rational(1)));
  const SolveResult r = solve_feasibility(lp);
  REQUIRE(r.feasible);
  CHECK(r.point.values[0] - r.point.values[1] == eps);
  CHECK(r.point.values[0] + r.point.values[1] == 1);
}

TEST_CASE("hints never change the verdict") {
  const Instance inst = Instance::make(4, 2, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
  auto [lp, ti] = build_time_indexed_lp(inst, 3);
  const ExactResult ex = exact_makespan(inst);
  const LpPoint integral = encode_schedule(ex.witness, ti);

  const SolveResult hinted = solve_feasibility(lp, integral.values);
  REQUIRE(hinted.feasible);
  CHECK(point_satisfies(lp, hinted.point));
  // An exactly feasible hint is returned as-is.
  CHECK(hinted.point.values == integral.values);

  auto [lp2, ti2] = build_time_indexed_lp(inst, 2);
  std::vector<Rational> junk(lp2.varcount, Rational(1));
  CHECK(!solve_feasibility(lp2, junk).feasible);
}

TEST_CASE("solved points satisfy every row on random instances") {
  for (std::uint64_t seed = 900; seed < 920; ++seed) {
    const Instance inst = generate_gnp(7, 3, Rational(1, 3), seed);
    for (int T = 3; T <= 5; ++T) {
      auto [lp, ti] = build_time_indexed_lp(inst, T);
      const SolveResult r = solve_feasibility(lp);
      if (r.feasible) CHECK(point_satisfies(lp, r.point));
    }
  }
}
