#include "schedlift/laminar.hpp"

#include <string>

namespace schedlift {

Padded pad_to_power_of_two(const Instance& inst, int T) {
  if (T < 1) throw LaminarError("pad_to_power_of_two: horizon must be >= 1");
  int T2 = 1;
  while (T2 < T) T2 *= 2;
  const int n = inst.jobs();
  const int extra = inst.machines() * (T2 - T);
  std::vector<std::pair<int, int>> edges = inst.edges();
  for (int d = 0; d < extra; ++d)
    for (int o = 1; o <= n; ++o) edges.emplace_back(o, n + 1 + d);
  return Padded{Instance::make(n + extra, inst.machines(), std::move(edges)),
                T2, n};
}

LaminarFamily::LaminarFamily(int T) : T_(T) {
  if (T < 1) throw LaminarError("laminar family: horizon must be >= 1");
  int len = 1;
  while (len < T_) {
    len *= 2;
    ++depth_;
  }
  if (len != T_)
    throw LaminarError("laminar family: horizon " + std::to_string(T) +
                       " is not a power of two");
}

Interval LaminarFamily::interval(int level, int index) const {
  if (level < 0 || level > depth_)
    throw LaminarError("laminar family: level out of range");
  const int len = T_ >> level;
  if (index < 1 || index > (1 << level))
    throw LaminarError("laminar family: index out of range");
  Interval iv;
  iv.level = level;
  iv.index = index;
  iv.lo = (index - 1) * len + 1;
  iv.hi = index * len;
  return iv;
}

Interval LaminarFamily::left_child(const Interval& iv) const {
  return interval(iv.level + 1, 2 * iv.index - 1);
}

Interval LaminarFamily::right_child(const Interval& iv) const {
  return interval(iv.level + 1, 2 * iv.index);
}

int LaminarFamily::midpoint(const Interval& iv) const {
  if (iv.length() < 2)
    throw LaminarError("laminar family: unit interval has no midpoint");
  return iv.lo + iv.length() / 2 - 1;
}

Interval LaminarFamily::minimal_covering(int lo, int hi) const {
  if (lo < 1 || hi > T_ || lo > hi)
    throw LaminarError("laminar family: range outside [1, T]");
  Interval iv = root();
  while (iv.length() > 1) {
    const int mid = midpoint(iv);
    if (hi <= mid)
      iv = left_child(iv);
    else if (lo > mid)
      iv = right_child(iv);
    else
      break;
  }
  return iv;
}

void assign_jobs(JobWindows& windows, const LaminarFamily& fam) {
  for (auto& [job, w] : windows.jobs) {
    if (w.F_lo < w.S_lo || w.F_hi > w.S_hi)
      throw LaminarError("assign_jobs: job " + std::to_string(job) +
                         " has F outside S");
    w.assigned = fam.minimal_covering(w.S_lo, w.S_hi);
  }
}

AssignmentSnapshot snapshot_assignments(const JobWindows& windows) {
  AssignmentSnapshot snap;
  for (const auto& [job, w] : windows.jobs) snap[job] = w.assigned;
  return snap;
}

void update_support_intervals(JobWindows& windows, int ell,
                              const AssignmentSnapshot& snap,
                              const LaminarFamily& fam) {
  for (auto& [job, w] : windows.jobs) {
    const auto it = snap.find(job);
    if (it == snap.end())
      throw LaminarError("update_support_intervals: job " +
                         std::to_string(job) + " missing from snapshot");
    const Interval& old = it->second;
    if (old.level < ell) {
      const int mid = fam.midpoint(old);
      if (w.F_hi <= mid) {
        w.S_lo = w.F_lo;
        w.S_hi = mid + 1;
      } else if (w.F_lo > mid) {
        w.S_lo = mid;
        w.S_hi = w.F_hi;
      } else {
        w.S_lo = w.F_lo;
        w.S_hi = w.F_hi;
      }
    } else {
      w.S_lo = w.F_lo;
      w.S_hi = w.F_hi;
    }
  }
  assign_jobs(windows, fam);
  for (auto& [job, w] : windows.jobs) {
    const Interval& old = snap.at(job);
    if (old.level < ell && !(w.assigned == old))
      throw LaminarError("update_support_intervals: job " +
                         std::to_string(job) +
                         " moved off its snapshot interval");
  }
}

BatchView make_batch_view(const JobWindows& windows, int k, int batches) {
  if (k < 1 || batches < 0)
    throw LaminarError("make_batch_view: bad batch shape");
  BatchView view;
  view.k = k;
  view.counts.assign(static_cast<std::size_t>(batches), 0);
  for (const auto& [job, w] : windows.jobs) {
    const int p = w.assigned.level / k;
    if (p < batches) ++view.counts[static_cast<std::size_t>(p)];
  }
  return view;
}

bool is_good_batch(const BatchView& view, int p, const Rational& eps, int m) {
  if (p < 1 || p >= static_cast<int>(view.counts.size()))
    throw LaminarError("is_good_batch: batch index out of range");
  Rational earlier = 0;
  for (int i = 0; i < p; ++i) earlier += view.counts[static_cast<std::size_t>(i)];
  return Rational(view.counts[static_cast<std::size_t>(p)]) <=
         eps / (4 * m) * earlier;
}

}  // namespace schedlift
