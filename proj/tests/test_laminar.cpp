#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support/reference.hpp"
#include "schedlift/instance.hpp"
#include "schedlift/laminar.hpp"
#include "schedlift/prng.hpp"

using namespace schedlift;

TEST_CASE("padding examples") {
  const Instance a = generate_chain(4, 2);
  const Padded pa = pad_to_power_of_two(a, 8);
  CHECK(pa.T == 8);
  CHECK(pa.inst.jobs() == 4);
  CHECK(pa.original_n == 4);

  const Instance b = generate_chain(5, 2);
  const Padded pb = pad_to_power_of_two(b, 5);
  CHECK(pb.T == 8);
  CHECK(pb.inst.jobs() == 5 + 6);
  CHECK(pb.original_n == 5);
  CHECK(!pb.is_dummy(5));
  CHECK(pb.is_dummy(6));
  // Dummies succeed every original and are mutually unordered.
  for (int d = 6; d <= 11; ++d) {
    for (int o = 1; o <= 5; ++o) CHECK(pb.inst.closure().before(o, d));
    for (int d2 = 6; d2 <= 11; ++d2) CHECK(!pb.inst.closure().before(d, d2));
  }
}

TEST_CASE("padded optimum fills the horizon") {
  for (std::uint64_t seed = 80; seed < 86; ++seed) {
    const Instance inst = generate_gnp(5, 2, Rational(1, 2), seed);
    const int opt = reference::naive_makespan(inst);
    const Padded p = pad_to_power_of_two(inst, opt);
    CHECK(reference::naive_makespan(p.inst) == p.T);
  }
}

TEST_CASE("interval coordinates") {
  const LaminarFamily fam(8);
  CHECK(fam.depth() == 3);
  CHECK(fam.root() == Interval{0, 1, 1, 8});
  CHECK(fam.interval(1, 1) == Interval{1, 1, 1, 4});
  CHECK(fam.interval(1, 2) == Interval{1, 2, 5, 8});
  CHECK(fam.interval(2, 3) == Interval{2, 3, 5, 6});
  CHECK(fam.interval(3, 8) == Interval{3, 8, 8, 8});
  CHECK(fam.left_child(fam.interval(1, 1)) == fam.interval(2, 1));
  CHECK(fam.right_child(fam.interval(1, 1)) == fam.interval(2, 2));
  CHECK(fam.midpoint(fam.root()) == 4);
  CHECK(fam.midpoint(fam.interval(2, 3)) == 5);
  CHECK_THROWS_AS(fam.midpoint(fam.interval(3, 1)), LaminarError);
  CHECK_THROWS_AS(fam.interval(4, 1), LaminarError);
  CHECK_THROWS_AS(fam.interval(2, 5), LaminarError);
  CHECK_THROWS_AS(LaminarFamily(5), LaminarError);
  CHECK(LaminarFamily(1).depth() == 0);
}

TEST_CASE("minimal covering descent") {
  const LaminarFamily fam(8);
  CHECK(fam.minimal_covering(3, 3) == fam.interval(3, 3));
  CHECK(fam.minimal_covering(4, 5) == fam.root());
  CHECK(fam.minimal_covering(1, 4) == fam.interval(1, 1));
  CHECK(fam.minimal_covering(5, 6) == fam.interval(2, 3));
  CHECK(fam.minimal_covering(1, 8) == fam.root());
  CHECK_THROWS_AS(fam.minimal_covering(0, 3), LaminarError);
  CHECK_THROWS_AS(fam.minimal_covering(3, 9), LaminarError);
  CHECK_THROWS_AS(fam.minimal_covering(5, 4), LaminarError);
}

TEST_CASE("assignment recompute and validation") {
  const LaminarFamily fam(8);
  JobWindows w;
  w.jobs[1] = {3, 3, 3, 3, {}};
  w.jobs[2] = {4, 5, 4, 5, {}};
  w.jobs[3] = {2, 3, 1, 4, {}};
  assign_jobs(w, fam);
  CHECK(w.jobs[1].assigned == fam.interval(3, 3));
  CHECK(w.jobs[2].assigned == fam.root());
  CHECK(w.jobs[3].assigned == fam.interval(1, 1));

  // Reassignment is a no-op without window changes.
  JobWindows again = w;
  assign_jobs(again, fam);
  for (const auto& [j, jw] : again.jobs)
    CHECK(jw.assigned == w.jobs[j].assigned);

  w.jobs[4] = {2, 6, 3, 4, {}};  // F outside S
  CHECK_THROWS_AS(assign_jobs(w, fam), LaminarError);
}

TEST_CASE("support interval update rules") {
  const LaminarFamily fam(8);

  // Pinned above: fresh F inside the left half keeps a foot at mid+1.
  JobWindows w;
  w.jobs[1] = {2, 5, 2, 5, {}};
  assign_jobs(w, fam);
  REQUIRE(w.jobs[1].assigned == fam.root());
  const AssignmentSnapshot snap = snapshot_assignments(w);
  w.jobs[1].F_lo = 2;
  w.jobs[1].F_hi = 3;
  update_support_intervals(w, 2, snap, fam);
  CHECK(w.jobs[1].S_lo == 2);
  CHECK(w.jobs[1].S_hi == 5);
  CHECK(w.jobs[1].assigned == fam.root());

  // Fresh F inside the right half keeps a foot at mid.
  JobWindows v;
  v.jobs[1] = {3, 7, 3, 7, {}};
  assign_jobs(v, fam);
  const AssignmentSnapshot vsnap = snapshot_assignments(v);
  v.jobs[1].F_lo = 6;
  v.jobs[1].F_hi = 7;
  update_support_intervals(v, 1, vsnap, fam);
  CHECK(v.jobs[1].S_lo == 4);
  CHECK(v.jobs[1].S_hi == 7);
  CHECK(v.jobs[1].assigned == fam.root());

  // Straddling F is taken as-is, and so is a job at the working level.
  JobWindows u;
  u.jobs[1] = {2, 6, 2, 6, {}};  // straddles root midpoint
  u.jobs[2] = {5, 6, 5, 6, {}};  // assigned at level 2
  assign_jobs(u, fam);
  REQUIRE(u.jobs[2].assigned.level == 2);
  const AssignmentSnapshot usnap = snapshot_assignments(u);
  u.jobs[1].F_lo = 3;
  u.jobs[1].F_hi = 5;
  u.jobs[2].F_lo = 6;
  u.jobs[2].F_hi = 6;
  update_support_intervals(u, 2, usnap, fam);
  CHECK(u.jobs[1].S_lo == 3);
  CHECK(u.jobs[1].S_hi == 5);
  CHECK(u.jobs[2].S_lo == 6);
  CHECK(u.jobs[2].S_hi == 6);
}

TEST_CASE("jobs pinned above the working level never move") {
  const LaminarFamily fam(16);
  SplitMix64 rng(97);
  for (int trial = 0; trial < 200; ++trial) {
    JobWindows w;
    for (int j = 1; j <= 6; ++j) {
      const int lo = 1 + static_cast<int>(rng.below(16));
      const int hi = lo + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(16 - lo + 1)));
      w.jobs[j] = {lo, hi, lo, hi, {}};
    }
    assign_jobs(w, fam);
    const AssignmentSnapshot snap = snapshot_assignments(w);
    const int ell = 1 + static_cast<int>(rng.below(4));
    for (int j = 1; j <= 6; ++j) {
      auto& jw = w.jobs[j];
      // F shrinks to a random nonempty subrange.
      const int span = jw.F_hi - jw.F_lo + 1;
      const int off = static_cast<int>(rng.below(span));
      jw.F_lo += off;
      jw.F_hi = jw.F_lo + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(jw.F_hi + 1 -
                                                         jw.F_lo)));
    }
    update_support_intervals(w, ell, snap, fam);
    for (int j = 1; j <= 6; ++j) {
      const auto& jw = w.jobs[j];
      CHECK(jw.F_lo >= jw.S_lo);
      CHECK(jw.F_hi <= jw.S_hi);
      if (snap.at(j).level < ell) CHECK(jw.assigned == snap.at(j));
    }
  }
}

TEST_CASE("batch counts and the goodness threshold") {
  const LaminarFamily fam(16);
  JobWindows w;
  w.jobs[1] = {1, 16, 1, 16, {}};  // level 0
  w.jobs[2] = {1, 8, 1, 8, {}};    // level 1
  w.jobs[3] = {9, 12, 9, 12, {}};  // level 2
  w.jobs[4] = {3, 3, 3, 3, {}};    // level 4, beyond two batches
  assign_jobs(w, fam);
  const BatchView view = make_batch_view(w, 2, 2);
  REQUIRE(view.counts.size() == 2);
  CHECK(view.counts[0] == 2);
  CHECK(view.counts[1] == 1);

  BatchView arith;
  arith.k = 1;
  arith.counts = {100, 12};
  CHECK(is_good_batch(arith, 1, Rational(1, 2), 1));  // 12 <= 12.5
  arith.counts[1] = 13;
  CHECK(!is_good_batch(arith, 1, Rational(1, 2), 1));
  arith.counts = {0, 0};
  CHECK(is_good_batch(arith, 1, Rational(1, 2), 2));  // 0 <= 0
  CHECK_THROWS_AS(is_good_batch(arith, 0, Rational(1, 2), 2), LaminarError);
  CHECK_THROWS_AS(is_good_batch(arith, 2, Rational(1, 2), 2), LaminarError);
}
