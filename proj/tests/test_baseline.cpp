#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "schedlift/baseline.hpp"
#include "schedlift/oracle.hpp"
#include "support/reference.hpp"

using namespace schedlift;

TEST_CASE("list scheduling fills slots lowest id first") {
  // Three independent jobs plus the chain 4 < 5 < 6 on two machines: the
  // greedy order wastes slots behind the chain while the optimum overlaps
  // it with the independent work.
  const Instance inst = Instance::make(6, 2, {{4, 5}, {5, 6}});
  const ListResult res = list_schedule(inst);
  CHECK(res.schedule.slots.at(1) == 1);
  CHECK(res.schedule.slots.at(2) == 1);
  CHECK(res.schedule.slots.at(3) == 2);
  CHECK(res.schedule.slots.at(4) == 2);
  CHECK(res.schedule.slots.at(5) == 3);
  CHECK(res.schedule.slots.at(6) == 4);
  CHECK(res.schedule.makespan() == 4);

  const int opt = reference::naive_makespan(inst);
  CHECK(opt == 3);
  CHECK(exact_makespan(inst).makespan == 3);
  CHECK(res.schedule.makespan() > opt);  // strict gap witness
}

TEST_CASE("list schedule of a chain is the chain") {
  const ListResult res = list_schedule(generate_chain(5, 3));
  for (int j = 1; j <= 5; ++j) CHECK(res.schedule.slots.at(j) == j);
  CHECK(res.busy_slots == 0);
  CHECK(res.nonbusy_slots == 5);
}

TEST_CASE("graham bound holds on random instances") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);
    const int m = 2 + static_cast<int>(seed % 2);
    const Instance inst = generate_gnp(n, m, Rational(2, 5), 555 + seed);
    const ListResult res = list_schedule(inst);
    CHECK(validate(inst, res.schedule).empty());
    const int opt = exact_makespan(inst).makespan;
    // makespan * m <= (2m - 1) * opt, integer form of (2 - 1/m).
    CHECK(res.schedule.makespan() * m <= (2 * m - 1) * opt);
    CHECK(res.schedule.makespan() >= opt);
    CHECK(res.busy_slots + res.nonbusy_slots == res.schedule.makespan());
  }
}

TEST_CASE("lower bounds on fixed shapes") {
  const LowerBounds chain = lower_bounds(generate_chain(6, 2));
  CHECK(chain.load == 3);
  CHECK(chain.chain == 6);

  const LowerBounds indep = lower_bounds(Instance::make(7, 3, {}));
  CHECK(indep.load == 3);
  CHECK(indep.chain == 1);
}
