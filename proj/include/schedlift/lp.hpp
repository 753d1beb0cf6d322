#pragma once

#include <map>
#include <optional>
#include <vector>

#include "schedlift/instance.hpp"
#include "schedlift/rational.hpp"
#include "schedlift/schedule.hpp"

namespace schedlift {

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearRow {
  // Sparse lhs; absent variables have coefficient zero.
  std::map<int, Rational> coeffs;
  Relation rel = Relation::LessEq;
  Rational rhs;
};

// A feasibility system over variables that live in [0,1]. The box is part of
// the model even when no explicit bound row restates it.
struct LinearProgram {
  int varcount = 0;
  std::vector<LinearRow> rows;
};

// Bijection (job j, slot t) <-> ground variable index, j in [1,n], t in [1,T].
struct TimeIndex {
  int n = 0;
  int T = 0;

  int var(int j, int t) const { return (j - 1) * T + (t - 1); }
  int job_of(int v) const { return v / T + 1; }
  int slot_of(int v) const { return v % T + 1; }
  int varcount() const { return n * T; }
};

struct LpPoint {
  std::vector<Rational> values;  // indexed by variable
};

struct SolveResult {
  bool feasible = false;
  LpPoint point;  // meaningful only when feasible
};

// Time-indexed feasibility system for makespan guess T: one assignment
// equality per job, one capacity row per slot, cumulative rows for every
// closed precedence pair at every t in {0,...,T-1}, then explicit bound rows.
std::pair<LinearProgram, TimeIndex> build_time_indexed_lp(const Instance& inst,
                                                          int T);

// Exact phase-1 simplex with Bland's rule. Feasible points satisfy every row
// (and the box) exactly; Infeasible is exact as well. The optional hint only
// selects initial nonbasic bounds and the values of variables no active row
// touches; it never changes the answer.
SolveResult solve_feasibility(const LinearProgram& lp);
SolveResult solve_feasibility(const LinearProgram& lp,
                              const std::vector<Rational>& hint);

// Exact membership test, including the [0,1] box.
bool point_satisfies(const LinearProgram& lp, const LpPoint& p);

// Smallest T in [1, n] whose system is feasible. Feasibility is monotone in T
// (zero-padding extends a point), and any feasible T admits n >= m*T-free
// counting plus chain arguments, so the scan may start at the trivial lower
// bounds without changing the result.
int lp_min_makespan(const Instance& inst);

// Decodes a 0/1 point into a schedule; nullopt if any value is fractional.
std::optional<Schedule> decode_integral_point(const LpPoint& p,
                                              const TimeIndex& ti);

// Encodes a schedule as the corresponding 0/1 point.
LpPoint encode_schedule(const Schedule& s, const TimeIndex& ti);

}  // namespace schedlift
