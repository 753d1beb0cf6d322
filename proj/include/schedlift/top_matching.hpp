#pragma once

#include <map>
#include <set>
#include <vector>

#include "schedlift/instance.hpp"
#include "schedlift/laminar.hpp"
#include "schedlift/schedule.hpp"

namespace schedlift {

struct TopMatchError : std::runtime_error {
  explicit TopMatchError(const std::string& what)
      : std::runtime_error(what) {}
};

// Half-open nothing here: both ends inclusive, indices of level-qk
// intervals within the node horizon.
struct AlignedRange {
  int a = 0;
  int b = 0;

  bool operator==(const AlignedRange&) const = default;
};

// Extends the range by one interval on each side, clipped to [1, count].
AlignedRange ext(AlignedRange range, int count);

// Per-job slot window aligned to level-qk interval boundaries. Jobs whose
// chopped support vanishes carry the empty flag and a collapsed window at
// their assigned interval's midpoint.
struct Window {
  bool empty = false;
  int r = 0, d = 0;        // inclusive slot bounds
  int t_lo = 0, t_hi = 0;  // level-qk interval indices when nonempty
};

// Chops the first and last level-qk interval touching S_j. Verifies window
// monotonicity along precedences: j before i forces r_j <= r_i, d_j <= d_i
// whenever both windows are nonempty.
std::map<int, Window> compute_windows(const Instance& inst,
                                      const JobWindows& windows, int qk,
                                      const LaminarFamily& fam);

// cap(t) = machines minus jobs already at slot t; slots run 1..T.
std::vector<int> residual_caps(const Instance& inst, const Schedule& partial,
                               int T);

struct MatchResult {
  std::map<int, int> matched;  // job -> slot
  std::set<int> unmatched;
};

// Maximum-cardinality assignment of jobs to slots inside their windows,
// each slot t used at most caps[t-1] times. Augmenting paths over the
// capacity-expanded slot units; the unmatched count equals the Hall
// deficiency of the system.
MatchResult capacitated_matching(const std::vector<int>& jobs,
                                 const std::map<int, Window>& windows,
                                 const std::vector<int>& caps);

struct MatchStats {
  int top_count = 0;
  int empty_window = 0;    // discarded before matching
  int unmatched = 0;       // discarded by the matching
  int replace_failed = 0;  // discarded by the precedence repair pass
};

struct InsertResult {
  Schedule schedule;
  std::vector<int> discarded;
  std::map<int, Window> windows;
  MatchStats stats;
};

// Extends `partial` (the recursively scheduled bottom jobs) by the top
// jobs. Phase A drops empty windows, phase B drops the matching's Hall
// deficiency, phase C re-places matched jobs in deadline order so top
// precedences come out respected; survivors all sit inside their own
// windows. Cross precedences are protected by the checked invariant that
// no related bottom job occupies a slot inside a top job's window.
InsertResult insert_top_jobs(const Instance& inst, const Schedule& partial,
                             const std::vector<int>& top,
                             const JobWindows& windows, int qk,
                             const LaminarFamily& fam);

}  // namespace schedlift
