#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "schedlift/instance.hpp"
#include "schedlift/schedule.hpp"

namespace schedlift {

// Bitmask state space: 2^n completion sets. Beyond this the oracle refuses.
inline constexpr int kOracleMaxJobs = 24;

struct OracleError : std::runtime_error {
  explicit OracleError(const std::string& message)
      : std::runtime_error(message) {}
};

struct ExactResult {
  int makespan = 0;
  Schedule witness;
};

// Optimal makespan via breadth-first search over order ideals of the
// precedence poset. Each slot schedules some size-min(m, #available) subset
// of the available jobs; restricting to full-size subsets preserves
// optimality for unit jobs (pulling a later job into a slack slot never
// hurts), and the test suite cross-checks this against unpruned
// enumeration.
ExactResult exact_makespan(const Instance& inst);

// Up to `limit` distinct feasible schedules with makespan <= T, collected
// by a seeded depth-first sweep; deterministic for fixed arguments and
// empty exactly when T is below the optimum. All slot loads from 1 up to
// min(m, #available) are explored, so non-greedy schedules appear too.
std::vector<Schedule> enumerate_schedules(const Instance& inst, int T,
                                          int limit, std::uint64_t seed);

}  // namespace schedlift
