#include "schedlift/oracle.hpp"

#include <algorithm>
#include <bit>

#include "schedlift/prng.hpp"

namespace schedlift {

namespace {

std::vector<std::uint32_t> direct_pred_masks(const Instance& inst) {
  std::vector<std::uint32_t> pred(static_cast<std::size_t>(inst.jobs()) + 1, 0);
  for (const auto& [u, v] : inst.edges())
    pred[static_cast<std::size_t>(v)] |= std::uint32_t{1} << (u - 1);
  return pred;
}

// Jobs runnable next: not done yet, all direct predecessors done. For
// reachable states (order ideals) this equals ancestor-closedness.
std::vector<int> available_jobs(std::uint32_t done, int n,
                                const std::vector<std::uint32_t>& pred) {
  std::vector<int> out;
  for (int j = 1; j <= n; ++j) {
    const std::uint32_t bit = std::uint32_t{1} << (j - 1);
    if (done & bit) continue;
    if ((pred[static_cast<std::size_t>(j)] & done) ==
        pred[static_cast<std::size_t>(j)])
      out.push_back(j);
  }
  return out;
}

template <typename Fn>
void for_each_subset_of_size(const std::vector<int>& items, int size, Fn&& fn) {
  std::vector<int> pick;
  pick.reserve(static_cast<std::size_t>(size));
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (static_cast<int>(pick.size()) == size) {
      fn(pick);
      return;
    }
    const std::size_t needed =
        static_cast<std::size_t>(size) - pick.size();
    for (std::size_t i = from; i + needed <= items.size(); ++i) {
      pick.push_back(items[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
}

std::uint32_t mask_of(const std::vector<int>& jobs) {
  std::uint32_t mask = 0;
  for (int j : jobs) mask |= std::uint32_t{1} << (j - 1);
  return mask;
}

}  // namespace

ExactResult exact_makespan(const Instance& inst) {
  const int n = inst.jobs();
  if (n > kOracleMaxJobs)
    throw OracleError("exact oracle handles at most " +
                      std::to_string(kOracleMaxJobs) + " jobs, got " +
                      std::to_string(n));
  const auto pred = direct_pred_masks(inst);
  const std::uint32_t full = (n == 32) ? ~std::uint32_t{0}
                                       : ((std::uint32_t{1} << n) - 1);

  // depth[state] = fewest slots that complete exactly `state`.
  std::vector<std::int8_t> depth(std::size_t{1} << n, -1);
  depth[0] = 0;
  std::vector<std::uint32_t> frontier{0};
  int d = 0;
  while (depth[full] < 0) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t state : frontier) {
      const auto avail = available_jobs(state, n, pred);
      const int take = std::min<int>(inst.machines(),
                                     static_cast<int>(avail.size()));
      for_each_subset_of_size(avail, take, [&](const std::vector<int>& pick) {
        const std::uint32_t to = state | mask_of(pick);
        if (depth[to] < 0) {
          depth[to] = static_cast<std::int8_t>(d + 1);
          next.push_back(to);
        }
      });
    }
    frontier = std::move(next);
    ++d;
    if (frontier.empty())
      throw OracleError("search exhausted without completing all jobs");
  }

  // Walk back from the full set: find a predecessor one level up whose
  // available set admits the removed jobs as a full-size pick.
  ExactResult result;
  result.makespan = depth[full];
  std::uint32_t state = full;
  for (int slot = depth[full]; slot >= 1; --slot) {
    bool stepped = false;
    const std::vector<int> members = [&] {
      std::vector<int> out;
      for (int j = 1; j <= n; ++j)
        if (state & (std::uint32_t{1} << (j - 1))) out.push_back(j);
      return out;
    }();
    for (int size = 1; size <= inst.machines() && !stepped; ++size) {
      for_each_subset_of_size(members, size, [&](const std::vector<int>& pick) {
        if (stepped) return;
        const std::uint32_t chosen = mask_of(pick);
        const std::uint32_t prev = state & ~chosen;
        if (depth[prev] != slot - 1) return;
        const auto avail = available_jobs(prev, n, pred);
        const int take = std::min<int>(inst.machines(),
                                       static_cast<int>(avail.size()));
        if (static_cast<int>(pick.size()) != take) return;
        for (int j : pick)
          if (std::find(avail.begin(), avail.end(), j) == avail.end()) return;
        for (int j : pick) result.witness.slots[j] = slot;
        state = prev;
        stepped = true;
      });
    }
    if (!stepped)
      throw OracleError("witness reconstruction failed");
  }
  return result;
}

std::vector<Schedule> enumerate_schedules(const Instance& inst, int T,
                                          int limit, std::uint64_t seed) {
  const int n = inst.jobs();
  if (n > kOracleMaxJobs)
    throw OracleError("schedule enumeration handles at most " +
                      std::to_string(kOracleMaxJobs) + " jobs, got " +
                      std::to_string(n));
  std::vector<Schedule> found;
  if (limit <= 0 || T < 0) return found;
  const auto pred = direct_pred_masks(inst);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  SplitMix64 rng(seed);

  // (state, slots used) pairs that cannot finish within T.
  std::vector<std::vector<std::uint32_t>> dead(
      static_cast<std::size_t>(T) + 1);
  auto is_dead = [&](int used, std::uint32_t state) {
    const auto& row = dead[static_cast<std::size_t>(used)];
    return std::find(row.begin(), row.end(), state) != row.end();
  };

  std::vector<std::pair<int, int>> placed;  // (job, slot)
  auto rec = [&](auto&& self, std::uint32_t state, int used) -> bool {
    if (static_cast<int>(found.size()) >= limit) return true;
    if (state == full) {
      Schedule s;
      for (const auto& [job, slot] : placed) s.slots[job] = slot;
      found.push_back(std::move(s));
      return static_cast<int>(found.size()) >= limit;
    }
    const int remaining = n - std::popcount(state);
    if (used >= T) return false;
    if (used + (remaining + inst.machines() - 1) / inst.machines() > T)
      return false;
    if (is_dead(used, state)) return false;

    const auto avail = available_jobs(state, n, pred);
    const int max_take = std::min<int>(inst.machines(),
                                       static_cast<int>(avail.size()));
    // Seeded order over slot loads and a seeded rotation within each load,
    // so different seeds surface different schedules first.
    std::vector<int> loads;
    for (int k = max_take; k >= 1; --k) loads.push_back(k);
    for (std::size_t i = loads.size(); i > 1; --i)
      std::swap(loads[i - 1], loads[rng.below(i)]);
    const std::size_t found_before = found.size();
    for (int take : loads) {
      std::vector<std::vector<int>> picks;
      for_each_subset_of_size(avail, take, [&](const std::vector<int>& pick) {
        picks.push_back(pick);
      });
      const std::size_t rot = picks.empty() ? 0 : rng.below(picks.size());
      for (std::size_t i = 0; i < picks.size(); ++i) {
        const auto& pick = picks[(i + rot) % picks.size()];
        for (int j : pick) placed.emplace_back(j, used + 1);
        const bool stop = self(self, state | mask_of(pick), used + 1);
        placed.resize(placed.size() - pick.size());
        if (stop) return true;
      }
    }
    if (found.size() == found_before)
      dead[static_cast<std::size_t>(used)].push_back(state);
    return false;
  };
  rec(rec, 0, 0);

  std::sort(found.begin(), found.end(),
            [](const Schedule& a, const Schedule& b) { return a.slots < b.slots; });
  found.erase(std::unique(found.begin(), found.end(),
                          [](const Schedule& a, const Schedule& b) {
                            return a.slots == b.slots;
                          }),
              found.end());
  return found;
}

}  // namespace schedlift
