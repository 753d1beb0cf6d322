#include "schedlift/baseline.hpp"

#include <algorithm>
#include <stdexcept>

namespace schedlift {

LowerBounds lower_bounds(const Instance& inst) {
  LowerBounds b;
  b.load = (inst.jobs() + inst.machines() - 1) / inst.machines();
  std::vector<int> all;
  for (int j = 1; j <= inst.jobs(); ++j) all.push_back(j);
  b.chain = static_cast<int>(longest_chain(inst.closure(), all).size());
  return b;
}

ListResult list_schedule(const Instance& inst) {
  const int n = inst.jobs();
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n) + 1);
  for (const auto& [u, v] : inst.edges())
    preds[static_cast<std::size_t>(v)].push_back(u);

  ListResult result;
  std::vector<int> done_slot(static_cast<std::size_t>(n) + 1, 0);
  std::vector<char> scheduled(static_cast<std::size_t>(n) + 1, 0);
  int remaining = n;
  int slot = 0;
  while (remaining > 0) {
    ++slot;
    std::vector<int> batch;
    for (int j = 1; j <= n && static_cast<int>(batch.size()) < inst.machines();
         ++j) {
      if (scheduled[static_cast<std::size_t>(j)]) continue;
      bool ready = true;
      for (int u : preds[static_cast<std::size_t>(j)])
        if (!scheduled[static_cast<std::size_t>(u)] ||
            done_slot[static_cast<std::size_t>(u)] >= slot) {
          ready = false;
          break;
        }
      if (ready) batch.push_back(j);
    }
    for (int j : batch) {
      scheduled[static_cast<std::size_t>(j)] = 1;
      done_slot[static_cast<std::size_t>(j)] = slot;
      result.schedule.slots[j] = slot;
    }
    remaining -= static_cast<int>(batch.size());
    if (static_cast<int>(batch.size()) == inst.machines())
      ++result.busy_slots;
    else
      ++result.nonbusy_slots;
    if (batch.empty())
      throw std::logic_error("list scheduling stalled with jobs remaining");
  }

  const LowerBounds lb = lower_bounds(inst);
  if (result.busy_slots > lb.load)
    throw std::logic_error("busy-slot count exceeded ceil(n/m)");
  if (result.nonbusy_slots > lb.chain)
    throw std::logic_error("non-busy-slot count exceeded the chain bound");
  return result;
}

}  // namespace schedlift
