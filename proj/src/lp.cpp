#include "schedlift/lp.hpp"

#include <algorithm>

#include "schedlift/baseline.hpp"

namespace schedlift {

std::pair<LinearProgram, TimeIndex> build_time_indexed_lp(const Instance& inst,
                                                          int T) {
  if (T < 1) throw std::invalid_argument("build_time_indexed_lp: T < 1");
  const int n = inst.jobs();
  TimeIndex ti{n, T};
  LinearProgram lp;
  lp.varcount = ti.varcount();

  for (int j = 1; j <= n; ++j) {
    LinearRow row;
    for (int t = 1; t <= T; ++t) row.coeffs[ti.var(j, t)] = 1;
    row.rel = Relation::Equal;
    row.rhs = 1;
    lp.rows.push_back(std::move(row));
  }

  for (int t = 1; t <= T; ++t) {
    LinearRow row;
    for (int j = 1; j <= n; ++j) row.coeffs[ti.var(j, t)] = 1;
    row.rel = Relation::LessEq;
    row.rhs = inst.machines();
    lp.rows.push_back(std::move(row));
  }

  // For j before i: sum_{t'<=t} y_j >= sum_{t'<=t+1} y_i, t in {0,...,T-1}.
  // t = 0 forces y_{i,1} = 0; the lhs prefix is empty there.
  for (const auto& [j, i] : inst.closure().pairs()) {
    for (int t = 0; t <= T - 1; ++t) {
      LinearRow row;
      for (int tp = 1; tp <= t; ++tp) row.coeffs[ti.var(j, tp)] += 1;
      for (int tp = 1; tp <= t + 1; ++tp) row.coeffs[ti.var(i, tp)] -= 1;
      row.rel = Relation::GreaterEq;
      row.rhs = 0;
      lp.rows.push_back(std::move(row));
    }
  }

  for (int v = 0; v < lp.varcount; ++v) {
    LinearRow ge;
    ge.coeffs[v] = 1;
    ge.rel = Relation::GreaterEq;
    ge.rhs = 0;
    lp.rows.push_back(std::move(ge));
    LinearRow le;
    le.coeffs[v] = 1;
    le.rel = Relation::LessEq;
    le.rhs = 1;
    lp.rows.push_back(std::move(le));
  }

  return {std::move(lp), ti};
}

bool point_satisfies(const LinearProgram& lp, const LpPoint& p) {
  if (static_cast<int>(p.values.size()) != lp.varcount) return false;
  for (const Rational& v : p.values)
    if (v < 0 || v > 1) return false;
  for (const LinearRow& row : lp.rows) {
    Rational lhs = 0;
    for (const auto& [v, c] : row.coeffs) lhs += c * p.values[v];
    switch (row.rel) {
      case Relation::LessEq:
        if (lhs > row.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != row.rhs) return false;
        break;
      case Relation::GreaterEq:
        if (lhs < row.rhs) return false;
        break;
    }
  }
  return true;
}

int lp_min_makespan(const Instance& inst) {
  const int n = inst.jobs();
  const LowerBounds lb = lower_bounds(inst);
  int T = std::max({1, lb.load, lb.chain});
  for (; T < n; ++T) {
    auto [lp, ti] = build_time_indexed_lp(inst, T);
    if (solve_feasibility(lp).feasible) return T;
  }
  // T = n always admits the one-job-per-slot point.
  return n;
}

std::optional<Schedule> decode_integral_point(const LpPoint& p,
                                              const TimeIndex& ti) {
  Schedule s;
  for (int j = 1; j <= ti.n; ++j) {
    int slot = 0;
    for (int t = 1; t <= ti.T; ++t) {
      const Rational& v = p.values[ti.var(j, t)];
      if (v == 0) continue;
      if (v != 1) return std::nullopt;
      if (slot != 0) return std::nullopt;
      slot = t;
    }
    if (slot == 0) return std::nullopt;
    s.slots[j] = slot;
  }
  return s;
}

LpPoint encode_schedule(const Schedule& s, const TimeIndex& ti) {
  LpPoint p;
  p.values.assign(ti.varcount(), Rational(0));
  for (const auto& [j, t] : s.slots) p.values[ti.var(j, t)] = 1;
  return p;
}

}  // namespace schedlift
