#include "schedlift/schedule.hpp"

#include <algorithm>

namespace schedlift {

std::vector<Violation> validate(const Instance& inst, const Schedule& sched) {
  std::vector<Violation> out;
  std::map<int, int> per_slot;
  std::vector<int> seen(static_cast<std::size_t>(inst.jobs()) + 1, 0);

  for (const auto& [job, slot] : sched.slots) {
    if (job < 1 || job > inst.jobs()) {
      out.push_back({Violation::Kind::Partition,
                     "scheduled job " + std::to_string(job) + " is not in 1.." +
                         std::to_string(inst.jobs())});
      continue;
    }
    ++seen[static_cast<std::size_t>(job)];
    if (slot < 1) {
      out.push_back({Violation::Kind::SlotRange,
                     "job " + std::to_string(job) + " sits in slot " +
                         std::to_string(slot)});
      continue;
    }
    ++per_slot[slot];
  }
  for (int job : sched.discarded) {
    if (job < 1 || job > inst.jobs()) {
      out.push_back({Violation::Kind::Partition,
                     "discarded job " + std::to_string(job) + " is not in 1.." +
                         std::to_string(inst.jobs())});
      continue;
    }
    ++seen[static_cast<std::size_t>(job)];
  }
  for (int job = 1; job <= inst.jobs(); ++job) {
    if (seen[static_cast<std::size_t>(job)] != 1)
      out.push_back({Violation::Kind::Partition,
                     "job " + std::to_string(job) + " appears " +
                         std::to_string(seen[static_cast<std::size_t>(job)]) +
                         " times across slots and discards"});
  }
  for (const auto& [slot, count] : per_slot) {
    if (count > inst.machines())
      out.push_back({Violation::Kind::Capacity,
                     "slot " + std::to_string(slot) + " holds " +
                         std::to_string(count) + " jobs, capacity " +
                         std::to_string(inst.machines())});
  }
  for (const auto& [u, v] : inst.closure().pairs()) {
    const auto iu = sched.slots.find(u);
    const auto iv = sched.slots.find(v);
    if (iu == sched.slots.end() || iv == sched.slots.end()) continue;
    if (iu->second >= iv->second)
      out.push_back({Violation::Kind::Precedence,
                     "job " + std::to_string(u) + " in slot " +
                         std::to_string(iu->second) + " must precede job " +
                         std::to_string(v) + " in slot " +
                         std::to_string(iv->second)});
  }
  return out;
}

}  // namespace schedlift
