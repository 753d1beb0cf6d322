#pragma once

#include "schedlift/instance.hpp"
#include "schedlift/schedule.hpp"

namespace schedlift {

struct LowerBounds {
  int load = 0;   // ceil(n / m)
  int chain = 0;  // longest chain over all jobs
};

LowerBounds lower_bounds(const Instance& inst);

struct ListResult {
  Schedule schedule;
  int busy_slots = 0;     // slots running exactly m jobs
  int nonbusy_slots = 0;  // the rest
};

// Greedy list scheduling, lowest job id first. Every run re-checks the
// accounting that bounds the makespan: busy slots <= ceil(n/m) and
// non-busy slots <= longest chain (a chain job runs in every non-busy
// slot), which together give makespan <= (2 - 1/m) * OPT.
ListResult list_schedule(const Instance& inst);

}  // namespace schedlift
