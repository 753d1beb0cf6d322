#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "support/reference.hpp"
#include "schedlift/instance.hpp"
#include "schedlift/lp.hpp"
#include "schedlift/oracle.hpp"
#include "schedlift/sherali_adams.hpp"

using namespace schedlift;

namespace {

// All subsets of the ground variables up to the given size.
std::vector<SubsetKey> all_keys(int ground, int cap) {
  std::vector<SubsetKey> out;
  out.push_back(SubsetKey{});
  for (int size = 1; size <= cap; ++size) {
    std::vector<int> pick;
    const auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(pick.size()) == size) {
        out.push_back(SubsetKey(pick));
        return;
      }
      for (int v = start; v < ground; ++v) {
        pick.push_back(v);
        self(self, v + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
  }
  return out;
}

// Explicit copy of a mixture, for exercising the map-backed operations on
// fractional inputs with known semantics.
SaSolution materialize(const SaSolution& mix, int level) {
  std::map<SubsetKey, Rational> values;
  for (const SubsetKey& key :
       all_keys(mix.timeindex().varcount(), level + 1)) {
    const Rational v = mix.value(key);
    if (v != 0) values[key] = v;
  }
  return SaSolution::explicit_solution(level, mix.timeindex(),
                                       std::move(values));
}

SaSolution two_point_mixture(const Instance& inst, int T, int level,
                             std::uint64_t seed) {
  const auto scheds = enumerate_schedules(inst, T, 2, seed);
  REQUIRE(scheds.size() == 2);
  std::vector<MixtureAtom> atoms;
  Rational w(1, 3);
  for (const Schedule& s : scheds) {
    MixtureAtom a;
    a.weight = w;
    w = 1 - w;
    a.slots.assign(inst.jobs(), 0);
    for (const auto& [j, t] : s.slots) a.slots[j - 1] = t;
    atoms.push_back(std::move(a));
  }
  return SaSolution::mixture(level, TimeIndex{inst.jobs(), T},
                             std::move(atoms));
}

}  // namespace

TEST_CASE("subset keys are canonical") {
  const SubsetKey k = SubsetKey::of({3, 1, 3});
  CHECK(k.vars == std::vector<int>{1, 3});
  CHECK(k.contains(1));
  CHECK(!k.contains(2));
  CHECK(k.with(2).vars == std::vector<int>{1, 2, 3});
  CHECK(k.with(3).vars == std::vector<int>{1, 3});
  CHECK(k.without(3).vars == std::vector<int>{1});
  CHECK(SubsetKey::of({1, 2}) == SubsetKey::of({2, 1}));
  CHECK(SubsetKey{} < SubsetKey::single(0));
}

TEST_CASE("lifted variable count over four ground variables at level one") {
  LinearProgram base;
  base.varcount = 4;
  const SaLift lift = build_sa_lift(base, 1);
  CHECK(lift.lifted.varcount == 11);  // 1 + 4 + 6
  CHECK(lift.keys.size() == 11);
  CHECK(lift.keys[0] == SubsetKey{});
  // The normalization row is present.
  bool found = false;
  for (const LinearRow& row : lift.lifted.rows)
    if (row.rel == Relation::Equal && row.rhs == 1 &&
        row.coeffs.size() == 1 && row.coeffs.count(0))
      found = true;
  CHECK(found);
}

TEST_CASE("level zero reproduces the base rows over singletons") {
  LinearProgram base;
  base.varcount = 2;
  LinearRow r;
  r.coeffs = {{0, Rational(1)}, {1, Rational(2)}};
  r.rel = Relation::LessEq;
  r.rhs = Rational(3, 2);
  base.rows.push_back(r);
  const SaLift lift = build_sa_lift(base, 0);
  CHECK(lift.lifted.varcount == 3);
  REQUIRE(lift.lifted.rows.size() == 2);  // normalization + the row
  const LinearRow& lifted = lift.lifted.rows[1];
  CHECK(lifted.rel == Relation::LessEq);
  CHECK(lifted.rhs == 0);
  // x0 + 2 x1 - (3/2) y_empty <= 0.
  CHECK(lifted.coeffs.at(lift.keyindex.at(SubsetKey::single(0))) == 1);
  CHECK(lifted.coeffs.at(lift.keyindex.at(SubsetKey::single(1))) == 2);
  CHECK(lifted.coeffs.at(lift.keyindex.at(SubsetKey{})) == Rational(-3, 2));
}

TEST_CASE("lifting an upper bound row yields monotone pair rows") {
  LinearProgram base;
  base.varcount = 2;
  for (int v = 0; v < 2; ++v) {
    LinearRow ge;
    ge.coeffs[v] = 1;
    ge.rel = Relation::GreaterEq;
    ge.rhs = 0;
    base.rows.push_back(ge);
    LinearRow le;
    le.coeffs[v] = 1;
    le.rel = Relation::LessEq;
    le.rhs = 1;
    base.rows.push_back(le);
  }
  const SaLift lift = build_sa_lift(base, 1);
  const int pair01 = lift.keyindex.at(SubsetKey::of({0, 1}));
  const int k0 = lift.keyindex.at(SubsetKey::single(0));
  const int k1 = lift.keyindex.at(SubsetKey::single(1));

  // y_{01} <= y_1 from lifting y_0 <= 1 with S = {1}.
  bool mono = false, nonneg = false, quad = false;
  for (const LinearRow& row : lift.lifted.rows) {
    if (row.rel != Relation::LessEq) continue;
    std::map<int, Rational> c = row.coeffs;
    if (c.size() == 2 && c.count(pair01) && c[pair01] == 1 && c.count(k1) &&
        c[k1] == -1)
      mono = true;
    if (c.size() == 1 && c.count(pair01) && c[pair01] == -1) nonneg = true;
    // y_0 + y_1 - y_{01} <= 1 (as ... - y_empty <= 0).
    if (c.size() == 4 && c.count(k0) && c[k0] == 1 && c.count(k1) &&
        c[k1] == 1 && c.count(pair01) && c[pair01] == -1)
      quad = true;
  }
  CHECK(mono);
  CHECK(nonneg);
  CHECK(quad);
}

TEST_CASE("integral product points survive the lift") {
  const Instance inst = Instance::make(3, 2, {{1, 3}, {2, 3}});
  for (int T = 2; T <= 3; ++T) {
    auto [lp, ti] = build_time_indexed_lp(inst, T);
    for (int s = 0; s <= 2; ++s) {
      const SaLift lift = build_sa_lift(lp, s);
      // Every integral feasible base point extends to a lifted feasible one.
      const int g = lp.varcount;
      for (int mask = 0; mask < (1 << g); ++mask) {
        std::vector<Rational> ground(g);
        for (int v = 0; v < g; ++v) ground[v] = (mask >> v) & 1;
        LpPoint p;
        p.values = ground;
        if (!point_satisfies(lp, p)) continue;
        LpPoint lifted_point;
        lifted_point.values = induced_product_point(lift, ground);
        CHECK(point_satisfies(lift.lifted, lifted_point));
      }
    }
  }
}

TEST_CASE("solving at the exact optimum is feasible at small levels") {
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    const Instance inst = generate_gnp(4, 2, Rational(1, 2), seed);
    const int opt = reference::naive_makespan(inst);
    for (int s = 0; s <= 1; ++s) {
      const auto sol = solve_sa(inst, opt, s);
      REQUIRE(sol.has_value());
      CHECK(sol->level() == s);
      CHECK(sol->value(SubsetKey{}) == 1);
      auto [lp, ti] = build_time_indexed_lp(inst, opt);
      CHECK(satisfies_lift(*sol, lp, s));
    }
  }
}

TEST_CASE("infeasible base stays infeasible lifted") {
  const Instance chain2 = Instance::make(2, 1, {{1, 2}});
  CHECK(!solve_sa(chain2, 1, 1).has_value());
}

TEST_CASE("one round closes the known machine-two gap witness") {
  const Instance inst = Instance::make(
      6, 2,
      {{1, 4}, {1, 5}, {1, 6}, {2, 4}, {2, 5}, {2, 6}, {3, 4}, {3, 5}, {3, 6}});
  CHECK(lp_min_makespan(inst) == 3);
  CHECK(!solve_sa(inst, 3, 1).has_value());
  CHECK(solve_sa(inst, 4, 1).has_value());
}

TEST_CASE("solved level-one solutions zero out same-job pairs") {
  for (std::uint64_t seed = 60; seed < 64; ++seed) {
    const Instance inst = generate_gnp(4, 2, Rational(2, 5), seed);
    const int opt = reference::naive_makespan(inst);
    const auto sol = solve_sa(inst, opt, 1);
    REQUIRE(sol.has_value());
    const TimeIndex& ti = sol->timeindex();
    for (int j = 1; j <= ti.n; ++j)
      for (int t1 = 1; t1 <= ti.T; ++t1)
        for (int t2 = t1 + 1; t2 <= ti.T; ++t2)
          CHECK(sol->value(SubsetKey::of({ti.var(j, t1), ti.var(j, t2)})) == 0);
  }
}

TEST_CASE("conditioning keeps lift feasibility and fixes the event") {
  for (std::uint64_t seed = 300; seed < 312; ++seed) {
    const Instance inst = generate_gnp(4, 2, Rational(2, 5), seed);
    const int T = reference::naive_makespan(inst) + 1;
    const SaSolution mix = two_point_mixture(inst, T, 2, seed);
    const SaSolution sol = materialize(mix, 2);
    auto [lp, ti] = build_time_indexed_lp(inst, T);
    REQUIRE(satisfies_lift(sol, lp, 2));

    // Pick the first fractional ground variable, if any.
    int var = -1;
    for (int v = 0; v < ti.varcount() && var < 0; ++v) {
      const Rational y = sol.ground(v);
      if (y > 0 && y < 1) var = v;
    }
    if (var < 0) continue;

    const SaSolution after = condition_on_var(sol, var);
    CHECK(after.level() == 1);
    CHECK(after.value(SubsetKey{}) == 1);
    CHECK(after.ground(var) == 1);
    CHECK(satisfies_lift(after, lp, 1));

    // Supports never grow.
    for (int j = 1; j <= inst.jobs(); ++j) {
      const auto before_supp = fractional_support(sol, j).supp;
      const auto after_supp = fractional_support(after, j).supp;
      CHECK(std::includes(before_supp.begin(), before_supp.end(),
                          after_supp.begin(), after_supp.end()));
    }
  }
}

TEST_CASE("conditioning on an already sure variable is a projection") {
  const Instance inst = Instance::make(2, 1, {{1, 2}});
  // Only one schedule exists at T=2, so any mixture is integral.
  const auto scheds = enumerate_schedules(inst, 2, 4, 1);
  REQUIRE(scheds.size() == 1);
  MixtureAtom atom;
  atom.weight = 1;
  atom.slots = {1, 2};
  const SaSolution sol =
      SaSolution::mixture(2, TimeIndex{2, 2}, {atom});
  const SaSolution ex = materialize(sol, 2);
  const TimeIndex& ti = ex.timeindex();
  REQUIRE(ex.ground(ti.var(1, 1)) == 1);
  const SaSolution after = condition_on_var(ex, ti.var(1, 1));
  for (const auto& [key, v] : after.values()) CHECK(ex.value(key) == v);
  for (const auto& [key, v] : ex.values())
    if (key.size() <= after.level() + 1) CHECK(after.value(key) == v);
}

TEST_CASE("event conditioning rules") {
  const Instance inst = Instance::make(3, 2, {});
  const SaSolution mix = two_point_mixture(inst, 2, 3, 7);
  const SaSolution sol = materialize(mix, 3);
  const TimeIndex& ti = sol.timeindex();

  const auto supp1 = fractional_support(sol, 1).supp;
  // Full-support event changes nothing except the level.
  const SaSolution same = condition_on_event(sol, 1, supp1);
  for (const auto& [key, v] : same.values()) CHECK(sol.value(key) == v);

  // Singleton event equals variable conditioning.
  const int t0 = *supp1.begin();
  const SaSolution ev = condition_on_event(sol, 1, {t0});
  const SaSolution vr = condition_on_var(sol, ti.var(1, t0));
  for (const auto& [key, v] : ev.values()) CHECK(vr.value(key) == v);
  for (const auto& [key, v] : vr.values()) CHECK(ev.value(key) == v);

  // Afterwards the event carries all the mass.
  Rational inside = 0;
  for (int t : supp1)
    if (t == t0) inside += ev.ground(ti.var(1, t));
  CHECK(inside == 1);
}

TEST_CASE("conditioning errors") {
  const Instance inst = Instance::make(2, 2, {});
  const SaSolution mix = two_point_mixture(inst, 2, 1, 3);
  const SaSolution sol = materialize(mix, 1);
  const TimeIndex& ti = sol.timeindex();

  int zero_var = -1;
  for (int v = 0; v < ti.varcount(); ++v)
    if (sol.ground(v) == 0) zero_var = v;
  if (zero_var >= 0)
    CHECK_THROWS_AS(condition_on_var(sol, zero_var), SaError);

  const SaSolution level0 = condition_on_var(sol, [&] {
    for (int v = 0; v < ti.varcount(); ++v)
      if (sol.ground(v) > 0) return v;
    return 0;
  }());
  CHECK(level0.level() == 0);
  CHECK_THROWS_AS(
      condition_on_var(level0, [&] {
        for (int v = 0; v < ti.varcount(); ++v)
          if (level0.ground(v) > 0) return v;
        return 0;
      }()),
      SaError);
}

TEST_CASE("fractional support forms") {
  TimeIndex ti{1, 6};
  std::map<SubsetKey, Rational> values;
  values[SubsetKey{}] = 1;
  values[SubsetKey::single(ti.var(1, 2))] = Rational(1, 3);
  values[SubsetKey::single(ti.var(1, 5))] = Rational(2, 3);
  const SaSolution sol = SaSolution::explicit_solution(0, ti, values);
  const SupportInfo info = fractional_support(sol, 1);
  CHECK(info.supp == std::set<int>{2, 5});
  CHECK(info.r == 2);
  CHECK(info.d == 5);
}

TEST_CASE("size guard refuses oversized lifts") {
  LinearProgram base;
  base.varcount = 30;
  CHECK_THROWS_AS(build_sa_lift(base, 2, 1000), SaSizeError);
  CHECK_THROWS_AS(solve_sa(Instance::make(10, 2, {}), 10, 2, 5000),
                  SaSizeError);
}

TEST_CASE("projection consistency downward") {
  const Instance inst = Instance::make(3, 2, {{1, 2}});
  const int opt = reference::naive_makespan(inst);
  const auto sol = solve_sa(inst, opt, 2);
  REQUIRE(sol.has_value());
  auto [lp, ti] = build_time_indexed_lp(inst, opt);
  CHECK(satisfies_lift(*sol, lp, 2));
  CHECK(satisfies_lift(*sol, lp, 1));
  CHECK(satisfies_lift(*sol, lp, 0));
}
