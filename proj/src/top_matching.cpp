#include "schedlift/top_matching.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace schedlift {

AlignedRange ext(AlignedRange range, int count) {
  if (range.a < 1 || range.b > count || range.a > range.b)
    throw TopMatchError("ext: bad interval range");
  return {std::max(1, range.a - 1), std::min(count, range.b + 1)};
}

std::map<int, Window> compute_windows(const Instance& inst,
                                      const JobWindows& windows, int qk,
                                      const LaminarFamily& fam) {
  if (qk < 0 || qk > fam.depth())
    throw TopMatchError("compute_windows: level out of range");
  const int len = fam.horizon() >> qk;
  std::map<int, Window> out;
  for (const auto& [job, w] : windows.jobs) {
    if (w.S_lo < 1 || w.S_hi > fam.horizon() || w.S_lo > w.S_hi)
      throw TopMatchError("compute_windows: job " + std::to_string(job) +
                          " has window outside the horizon");
    const int tr = (w.S_lo - 1) / len + 1;
    const int td = (w.S_hi - 1) / len + 1;
    Window win;
    if (td <= tr + 1) {
      // Chopping leaves nothing; collapse onto the assigned midpoint.
      win.empty = true;
      win.r = win.d =
          w.assigned.length() >= 2 ? fam.midpoint(w.assigned) : w.assigned.lo;
    } else {
      win.t_lo = tr + 1;
      win.t_hi = td - 1;
      win.r = (win.t_lo - 1) * len + 1;
      win.d = win.t_hi * len;
    }
    out[job] = win;
  }
  const PrecRelation& rel = inst.closure();
  for (const auto& [j, wj] : out) {
    if (wj.empty) continue;
    for (const auto& [i, wi] : out) {
      if (wi.empty || i == j || !rel.before(j, i)) continue;
      if (wj.r > wi.r || wj.d > wi.d)
        throw TopMatchError("compute_windows: windows of " +
                            std::to_string(j) + " and " + std::to_string(i) +
                            " are not monotone along the precedence");
    }
  }
  return out;
}

std::vector<int> residual_caps(const Instance& inst, const Schedule& partial,
                               int T) {
  std::vector<int> caps(static_cast<std::size_t>(T), inst.machines());
  for (const auto& [job, slot] : partial.slots) {
    if (slot < 1 || slot > T)
      throw TopMatchError("residual_caps: job " + std::to_string(job) +
                          " sits outside the horizon");
    if (--caps[static_cast<std::size_t>(slot - 1)] < 0)
      throw TopMatchError("residual_caps: slot " + std::to_string(slot) +
                          " is over capacity");
  }
  return caps;
}

MatchResult capacitated_matching(const std::vector<int>& jobs,
                                 const std::map<int, Window>& windows,
                                 const std::vector<int>& caps) {
  const int T = static_cast<int>(caps.size());
  std::vector<std::vector<int>> owner(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    if (caps[static_cast<std::size_t>(t)] < 0)
      throw TopMatchError("capacitated_matching: negative capacity");
    owner[static_cast<std::size_t>(t)].assign(
        static_cast<std::size_t>(caps[static_cast<std::size_t>(t)]), 0);
  }

  MatchResult res;
  std::vector<char> visited(static_cast<std::size_t>(T) + 1, 0);
  const auto augment = [&](auto&& self, int j) -> bool {
    const Window& w = windows.at(j);
    if (w.empty)
      throw TopMatchError("capacitated_matching: empty window for job " +
                          std::to_string(j));
    for (int t = std::max(1, w.r); t <= std::min(T, w.d); ++t) {
      if (visited[static_cast<std::size_t>(t)]) continue;
      visited[static_cast<std::size_t>(t)] = 1;
      auto& units = owner[static_cast<std::size_t>(t - 1)];
      for (int& u : units) {
        if (u == 0) {
          u = j;
          res.matched[j] = t;
          return true;
        }
      }
      for (int& u : units) {
        const int other = u;
        if (self(self, other)) {
          u = j;
          res.matched[j] = t;
          return true;
        }
      }
    }
    return false;
  };

  std::vector<int> order = jobs;
  std::sort(order.begin(), order.end());
  for (int j : order) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(augment, j)) res.unmatched.insert(j);
  }
  return res;
}

InsertResult insert_top_jobs(const Instance& inst, const Schedule& partial,
                             const std::vector<int>& top,
                             const JobWindows& windows, int qk,
                             const LaminarFamily& fam) {
  JobWindows scoped;
  for (int j : top) {
    const auto it = windows.jobs.find(j);
    if (it == windows.jobs.end())
      throw TopMatchError("insert_top_jobs: no window for job " +
                          std::to_string(j));
    if (partial.slots.count(j))
      throw TopMatchError("insert_top_jobs: job " + std::to_string(j) +
                          " is already scheduled");
    scoped.jobs[j] = it->second;
  }

  InsertResult res{partial, {}, compute_windows(inst, scoped, qk, fam), {}};
  res.stats.top_count = static_cast<int>(top.size());
  const PrecRelation& rel = inst.closure();

  // No bottom job related to a top job may occupy a slot inside that job's
  // window; insertion anywhere in the window is then precedence-safe against
  // the bottom part.
  for (const auto& [j, w] : res.windows) {
    if (w.empty) continue;
    for (const auto& [i, t] : partial.slots) {
      if ((rel.before(j, i) || rel.before(i, j)) && t >= w.r && t <= w.d)
        throw TopMatchError(
            "insert_top_jobs: bottom job " + std::to_string(i) + " at slot " +
            std::to_string(t) + " lies inside the window of related top job " +
            std::to_string(j));
    }
  }

  // Jobs sharing an assigned interval straddle its midpoint, so their
  // windows all touch the two middle level-qk intervals; the union per
  // assigned interval must come out as one connected run.
  {
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> runs;
    for (const auto& [j, w] : res.windows) {
      if (w.empty) continue;
      const Interval& iv = scoped.jobs.at(j).assigned;
      runs[{iv.level, iv.index}].emplace_back(w.t_lo, w.t_hi);
    }
    for (auto& [iv, spans] : runs) {
      std::sort(spans.begin(), spans.end());
      int reach = spans.front().second;
      for (const auto& [a, b] : spans) {
        if (a > reach + 1)
          throw TopMatchError(
              "insert_top_jobs: window neighbourhood of interval level " +
              std::to_string(iv.first) + " index " +
              std::to_string(iv.second) + " is disconnected");
        reach = std::max(reach, b);
      }
    }
  }

  std::vector<int> to_match;
  for (const auto& [j, w] : res.windows) {
    if (w.empty) {
      res.discarded.push_back(j);
      ++res.stats.empty_window;
    } else {
      to_match.push_back(j);
    }
  }

  const std::vector<int> caps = residual_caps(inst, partial, fam.horizon());
  std::map<int, Window> match_windows;
  for (int j : to_match) match_windows[j] = res.windows.at(j);
  const MatchResult mr = capacitated_matching(to_match, match_windows, caps);
  for (int j : mr.unmatched) {
    res.discarded.push_back(j);
    ++res.stats.unmatched;
  }

  // The matching fixes who survives; placement order by deadline with a
  // topological tie-break lets the greedy pass honour top precedences.
  std::map<int, int> rank;
  {
    const auto& topo = inst.topo_order();
    for (std::size_t i = 0; i < topo.size(); ++i)
      rank[topo[i]] = static_cast<int>(i);
  }
  std::vector<int> order;
  for (const auto& [j, t] : mr.matched) order.push_back(j);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Window& wa = res.windows.at(a);
    const Window& wb = res.windows.at(b);
    if (wa.d != wb.d) return wa.d < wb.d;
    if (wa.r != wb.r) return wa.r < wb.r;
    if (rank.at(a) != rank.at(b)) return rank.at(a) < rank.at(b);
    return a < b;
  });
  std::vector<int> avail = caps;
  std::map<int, int> placed;
  for (int j : order) {
    int floor_slot = 0;
    for (const auto& [p, tp] : placed)
      if (rel.before(p, j)) floor_slot = std::max(floor_slot, tp);
    const Window& w = res.windows.at(j);
    int chosen = 0;
    for (int t = std::max(w.r, floor_slot + 1); t <= w.d; ++t) {
      if (avail[static_cast<std::size_t>(t - 1)] > 0) {
        chosen = t;
        break;
      }
    }
    if (chosen == 0) {
      res.discarded.push_back(j);
      ++res.stats.replace_failed;
      continue;
    }
    --avail[static_cast<std::size_t>(chosen - 1)];
    placed[j] = chosen;
  }
  for (const auto& [j, t] : placed) res.schedule.slots[j] = t;
  for (int j : res.discarded) res.schedule.discarded.push_back(j);
  std::sort(res.discarded.begin(), res.discarded.end());
  std::sort(res.schedule.discarded.begin(), res.schedule.discarded.end());
  return res;
}

}  // namespace schedlift
