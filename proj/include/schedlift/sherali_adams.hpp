#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "schedlift/instance.hpp"
#include "schedlift/lp.hpp"

namespace schedlift {

// Canonical subset of ground variable indices (strictly increasing).
struct SubsetKey {
  std::vector<int> vars;

  SubsetKey() = default;
  explicit SubsetKey(std::vector<int> sorted) : vars(std::move(sorted)) {}
  static SubsetKey of(std::initializer_list<int> vs);
  static SubsetKey single(int v) { return SubsetKey(std::vector<int>{v}); }

  int size() const { return static_cast<int>(vars.size()); }
  bool contains(int v) const;
  SubsetKey with(int v) const;     // union with {v}
  SubsetKey without(int v) const;  // difference with {v}

  auto operator<=>(const SubsetKey&) const = default;
};

class SaError : public std::runtime_error {
 public:
  explicit SaError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a lift would exceed the configured variable cap.
class SaSizeError : public SaError {
 public:
  explicit SaSizeError(const std::string& what) : SaError(what) {}
};

inline constexpr std::size_t kDefaultLiftVarCap = 200000;

struct SaLift {
  int level = 0;
  LinearProgram base;
  LinearProgram lifted;
  std::vector<SubsetKey> keys;        // lifted var index -> key
  std::map<SubsetKey, int> keyindex;  // key -> lifted var index
};

// Generates, for every <=-normalized base row and every disjoint S, T with
// |S|+|T| <= s, the alternating-sum row over subset variables, keeps the
// lifted forms of the bound rows, and pins the empty key to one. Equalities
// become two rows; duplicate rows are emitted once.
SaLift build_sa_lift(const LinearProgram& base, int s,
                     std::size_t var_cap = kDefaultLiftVarCap);

// Product extension of a ground point: each key maps to the product of its
// members' ground values. Integral feasible ground points stay feasible for
// every lift level this way.
std::vector<Rational> induced_product_point(const SaLift& lift,
                                            const std::vector<Rational>& ground);

// One atom of a mixture-backed solution: an integral schedule with a weight.
struct MixtureAtom {
  Rational weight;
  std::vector<int> slots;  // job j at slots[j-1]
};

// A level-s solution. Two interchangeable representations:
//  - explicit: subset -> value map (absent keys read zero), as produced by
//    solving a lift;
//  - mixture: a convex combination of integral schedules, whose subset values
//    are the mixture probabilities of the indexed events. A mixture satisfies
//    the lift at every level, so its `level` acts as a conditioning budget.
class SaSolution {
 public:
  static SaSolution explicit_solution(int level, TimeIndex ti,
                                      std::map<SubsetKey, Rational> values);
  static SaSolution mixture(int level, TimeIndex ti,
                            std::vector<MixtureAtom> atoms);

  int level() const { return level_; }
  const TimeIndex& timeindex() const { return ti_; }
  bool is_mixture() const { return mixture_; }

  // Value of a subset variable. Explicit solutions answer keys up to size
  // level+1; mixtures answer any key.
  Rational value(const SubsetKey& key) const;
  Rational ground(int var) const { return value(SubsetKey::single(var)); }

  const std::map<SubsetKey, Rational>& values() const;
  const std::vector<MixtureAtom>& atoms() const;

 private:
  SaSolution() = default;
  int level_ = 0;
  TimeIndex ti_;
  bool mixture_ = false;
  std::map<SubsetKey, Rational> values_;
  std::vector<MixtureAtom> atoms_;
};

// Builds the time-indexed system for (inst, T), lifts it to level s, and runs
// the exact feasibility solver. nullopt means exactly infeasible. The
// optional ground hint (a point over the base variables) warms the solver up
// via its product extension.
std::optional<SaSolution> solve_sa(const Instance& inst, int T, int s,
                                   std::size_t var_cap = kDefaultLiftVarCap);
std::optional<SaSolution> solve_sa(const Instance& inst, int T, int s,
                                   const std::vector<Rational>& ground_hint,
                                   std::size_t var_cap = kDefaultLiftVarCap);

// z_S = y_{S + {i}} / y_{i}; drops one level; fixes i to probability one.
SaSolution condition_on_var(const SaSolution& sol, int var);

// Conditions job j on landing in the slot set E: the mass-weighted convex
// combination of the single-slot conditionings over E.
SaSolution condition_on_event(const SaSolution& sol, int job,
                              const std::set<int>& slots);

struct SupportInfo {
  std::set<int> supp;
  int r = 0;  // min supp
  int d = 0;  // max supp
};

// Slots with strictly positive single-variable mass for job j.
SupportInfo fractional_support(const SaSolution& sol, int job);

// Exact re-check of sol against the level-s lift of `base` (s <= sol.level
// for explicit solutions; any s for mixtures).
bool satisfies_lift(const SaSolution& sol, const LinearProgram& base, int s,
                    std::size_t var_cap = kDefaultLiftVarCap);

}  // namespace schedlift
