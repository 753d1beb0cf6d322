#pragma once

#include <map>
#include <vector>

#include "schedlift/instance.hpp"
#include "schedlift/rational.hpp"

namespace schedlift {

struct LaminarError : std::runtime_error {
  explicit LaminarError(const std::string& what) : std::runtime_error(what) {}
};

struct Padded {
  Instance inst;      // originals keep their ids, dummies appended
  int T = 0;          // power-of-two horizon
  int original_n = 0;

  bool is_dummy(int job) const { return job > original_n; }
};

// Rounds the horizon up to a power of two and appends m*(T'-T) jobs that
// succeed every original job, so the padded optimum fills the horizon
// exactly when the original optimum was T.
Padded pad_to_power_of_two(const Instance& inst, int T);

// Interval (level, index) = [(index-1)*T/2^level + 1, index*T/2^level].
struct Interval {
  int level = 0;
  int index = 1;  // 1-based within the level
  int lo = 0;
  int hi = 0;

  int length() const { return hi - lo + 1; }
  bool operator==(const Interval&) const = default;
};

// Binary laminar family over [1,T]. Level L has 2^L intervals of length
// T/2^L; level depth() is the leaf level of unit intervals.
class LaminarFamily {
 public:
  explicit LaminarFamily(int T);

  int horizon() const { return T_; }
  int depth() const { return depth_; }  // levels run 0..depth()

  Interval interval(int level, int index) const;
  Interval root() const { return interval(0, 1); }
  Interval left_child(const Interval& iv) const;
  Interval right_child(const Interval& iv) const;

  // Last slot of the left half; slots >= midpoint+1 form the right half.
  int midpoint(const Interval& iv) const;

  // Minimal family interval containing [lo, hi], by descent from the root.
  Interval minimal_covering(int lo, int hi) const;

 private:
  int T_ = 1;
  int depth_ = 0;
};

struct JobWindow {
  int F_lo = 0, F_hi = 0;  // fractional support bounds
  int S_lo = 0, S_hi = 0;  // bookkeeping window, F subseteq S
  Interval assigned;       // minimal family interval containing S
};

// Windows for the jobs in scope of one recursion node, keyed by job id.
struct JobWindows {
  std::map<int, JobWindow> jobs;
};

// Recomputes every assignment as the minimal covering interval of S.
void assign_jobs(JobWindows& windows, const LaminarFamily& fam);

// Assignment snapshot taken before a run of conditionings at one level.
using AssignmentSnapshot = std::map<int, Interval>;

AssignmentSnapshot snapshot_assignments(const JobWindows& windows);

// Window update after conditionings at level ell. Jobs whose snapshot
// assignment sits strictly above ell keep one foot on their old midpoint:
// a fresh F inside the left half widens to [F_lo, mid+1], inside the right
// half to [mid, F_hi], and a straddling F is taken as-is. Jobs at or below
// ell take S = F. Assignments are then recomputed, which can never move a
// strictly-above job off its snapshot interval.
void update_support_intervals(JobWindows& windows, int ell,
                              const AssignmentSnapshot& snap,
                              const LaminarFamily& fam);

// Per-batch job counts: batch p covers levels [p*k, (p+1)*k - 1].
struct BatchView {
  int k = 1;
  std::vector<int> counts;  // one entry per batch
};

BatchView make_batch_view(const JobWindows& windows, int k, int batches);

// Batch p is good when |J(B_p)| <= (eps/4m) * sum of earlier batch counts,
// compared exactly.
bool is_good_batch(const BatchView& view, int p, const Rational& eps, int m);

}  // namespace schedlift
