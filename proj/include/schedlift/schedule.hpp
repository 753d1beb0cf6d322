#pragma once

#include <map>
#include <string>
#include <vector>

#include "schedlift/instance.hpp"

namespace schedlift {

// Slot indices are 1-based. A schedule may be partial: jobs listed in
// `discarded` carry no slot; every other job of the owning instance must
// appear in `slots`.
struct Schedule {
  std::map<int, int> slots;
  std::vector<int> discarded;

  int makespan() const {
    int best = 0;
    for (const auto& [job, slot] : slots) {
      (void)job;
      best = std::max(best, slot);
    }
    return best;
  }
};

struct Violation {
  enum class Kind { Capacity, Precedence, Partition, SlotRange };
  Kind kind;
  std::string detail;
};

// Checks slot capacity (at most m jobs per slot), precedence between
// scheduled jobs, slot indices >= 1, and that slots plus discarded cover
// every job exactly once.
std::vector<Violation> validate(const Instance& inst, const Schedule& sched);

}  // namespace schedlift
