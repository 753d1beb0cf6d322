#include "schedlift/sherali_adams.hpp"

#include <algorithm>
#include <utility>

#include "schedlift/baseline.hpp"

namespace schedlift {

SubsetKey SubsetKey::of(std::initializer_list<int> vs) {
  std::vector<int> v(vs);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return SubsetKey(std::move(v));
}

bool SubsetKey::contains(int v) const {
  return std::binary_search(vars.begin(), vars.end(), v);
}

SubsetKey SubsetKey::with(int v) const {
  if (contains(v)) return *this;
  std::vector<int> out;
  out.reserve(vars.size() + 1);
  auto it = std::lower_bound(vars.begin(), vars.end(), v);
  out.insert(out.end(), vars.begin(), it);
  out.push_back(v);
  out.insert(out.end(), it, vars.end());
  return SubsetKey(std::move(out));
}

SubsetKey SubsetKey::without(int v) const {
  std::vector<int> out;
  out.reserve(vars.size());
  for (int x : vars)
    if (x != v) out.push_back(x);
  return SubsetKey(std::move(out));
}

namespace {

BigInt key_count(int ground, int max_size) {
  BigInt total = 0;
  BigInt binom = 1;
  for (int i = 0; i <= max_size; ++i) {
    total += binom;
    binom = binom * (ground - i) / (i + 1);
  }
  return total;
}

// All subsets of {0,...,g-1} with size <= cap, smallest sizes first.
void enumerate_keys(int ground, int cap, std::vector<SubsetKey>& out) {
  for (int size = 0; size <= cap; ++size) {
    std::vector<int> pick;
    const auto bysize = [&](auto&& self, int start) -> void {
      if (static_cast<int>(pick.size()) == size) {
        out.push_back(SubsetKey(pick));
        return;
      }
      const int need = size - static_cast<int>(pick.size());
      for (int v = start; v + need <= ground; ++v) {
        pick.push_back(v);
        self(self, v + 1);
        pick.pop_back();
      }
    };
    bysize(bysize, 0);
  }
}

struct NormRow {
  std::vector<std::pair<int, Rational>> coeffs;
  Rational rhs;
};

}  // namespace

SaLift build_sa_lift(const LinearProgram& base, int s, std::size_t var_cap) {
  if (s < 0) throw SaError("build_sa_lift: negative level");
  const int g = base.varcount;
  const BigInt vars_needed = key_count(g, s + 1);
  if (vars_needed > BigInt(var_cap))
    throw SaSizeError("build_sa_lift: " + vars_needed.str() +
                      " lifted variables exceed cap " +
                      std::to_string(var_cap));

  SaLift lift;
  lift.level = s;
  lift.base = base;
  enumerate_keys(g, s + 1, lift.keys);
  for (std::size_t i = 0; i < lift.keys.size(); ++i)
    lift.keyindex.emplace(lift.keys[i], static_cast<int>(i));
  lift.lifted.varcount = static_cast<int>(lift.keys.size());

  // Normalize the base into <=-rows; equalities contribute both directions.
  std::vector<NormRow> norm;
  for (const LinearRow& row : base.rows) {
    NormRow le, ge;
    for (const auto& [v, c] : row.coeffs) {
      if (c == 0) continue;
      le.coeffs.emplace_back(v, c);
      ge.coeffs.emplace_back(v, -c);
    }
    le.rhs = row.rhs;
    ge.rhs = -row.rhs;
    if (row.rel != Relation::GreaterEq) norm.push_back(le);
    if (row.rel != Relation::LessEq) norm.push_back(std::move(ge));
  }

  {
    LinearRow normalize;
    normalize.coeffs[lift.keyindex.at(SubsetKey{})] = 1;
    normalize.rel = Relation::Equal;
    normalize.rhs = 1;
    lift.lifted.rows.push_back(std::move(normalize));
  }

  std::set<std::vector<std::pair<int, Rational>>> seen;
  const auto emit = [&](const NormRow& row, const std::vector<int>& S,
                        const std::vector<int>& T) {
    std::map<int, Rational> coeffs;
    // Sum over sub-subsets of T with alternating sign.
    const int tn = static_cast<int>(T.size());
    for (int mask = 0; mask < (1 << tn); ++mask) {
      SubsetKey st(S);
      int bits = 0;
      for (int b = 0; b < tn; ++b)
        if (mask & (1 << b)) {
          st = st.with(T[b]);
          ++bits;
        }
      const int sign = (bits % 2 == 0) ? 1 : -1;
      for (const auto& [v, a] : row.coeffs) {
        const Rational contrib = sign > 0 ? a : -a;
        coeffs[lift.keyindex.at(st.with(v))] += contrib;
      }
      const Rational brhs = sign > 0 ? row.rhs : -row.rhs;
      coeffs[lift.keyindex.at(st)] -= brhs;
    }
    std::vector<std::pair<int, Rational>> cleaned;
    for (const auto& [v, c] : coeffs)
      if (c != 0) cleaned.emplace_back(v, c);
    if (cleaned.empty()) return;
    if (!seen.insert(cleaned).second) return;
    LinearRow out;
    for (const auto& [v, c] : cleaned) out.coeffs[v] = c;
    out.rel = Relation::LessEq;
    out.rhs = 0;
    lift.lifted.rows.push_back(std::move(out));
  };

  // Disjoint (S, T) pairs with |S| + |T| <= s, via each union set U and each
  // split of U.
  std::vector<int> U;
  const auto over_splits = [&](const NormRow& row) {
    const int un = static_cast<int>(U.size());
    for (int mask = 0; mask < (1 << un); ++mask) {
      std::vector<int> S, T;
      for (int b = 0; b < un; ++b)
        ((mask >> b) & 1 ? S : T).push_back(U[b]);
      emit(row, S, T);
    }
  };
  for (const NormRow& row : norm) {
    const auto rec = [&](auto&& self, int start, int remaining) -> void {
      over_splits(row);
      if (remaining == 0) return;
      for (int v = start; v < g; ++v) {
        U.push_back(v);
        self(self, v + 1, remaining - 1);
        U.pop_back();
      }
    };
    rec(rec, 0, s);
  }

  return lift;
}

std::vector<Rational> induced_product_point(
    const SaLift& lift, const std::vector<Rational>& ground) {
  if (static_cast<int>(ground.size()) != lift.base.varcount)
    throw SaError("induced_product_point: ground size mismatch");
  std::vector<Rational> out;
  out.reserve(lift.keys.size());
  for (const SubsetKey& key : lift.keys) {
    Rational v = 1;
    for (int var : key.vars) v *= ground[var];
    out.push_back(std::move(v));
  }
  return out;
}

SaSolution SaSolution::explicit_solution(int level, TimeIndex ti,
                                         std::map<SubsetKey, Rational> values) {
  SaSolution sol;
  sol.level_ = level;
  sol.ti_ = ti;
  sol.mixture_ = false;
  for (auto& [k, v] : values)
    if (v != 0) sol.values_.emplace(k, std::move(v));
  const auto it = sol.values_.find(SubsetKey{});
  if (it == sol.values_.end() || it->second != 1)
    throw SaError("explicit_solution: empty key must have value one");
  return sol;
}

SaSolution SaSolution::mixture(int level, TimeIndex ti,
                               std::vector<MixtureAtom> atoms) {
  SaSolution sol;
  sol.level_ = level;
  sol.ti_ = ti;
  sol.mixture_ = true;
  Rational total = 0;
  for (const MixtureAtom& a : atoms) {
    if (a.weight <= 0) throw SaError("mixture: weights must be positive");
    if (static_cast<int>(a.slots.size()) != ti.n)
      throw SaError("mixture: atom job count mismatch");
    for (int t : a.slots)
      if (t < 1 || t > ti.T) throw SaError("mixture: slot out of range");
    total += a.weight;
  }
  if (atoms.empty() || total != 1)
    throw SaError("mixture: weights must sum to one");
  sol.atoms_ = std::move(atoms);
  return sol;
}

Rational SaSolution::value(const SubsetKey& key) const {
  if (mixture_) {
    Rational mass = 0;
    for (const MixtureAtom& a : atoms_) {
      bool match = true;
      for (int var : key.vars) {
        const int j = ti_.job_of(var);
        if (a.slots[j - 1] != ti_.slot_of(var)) {
          match = false;
          break;
        }
      }
      if (match) mass += a.weight;
    }
    return mass;
  }
  if (key.size() > level_ + 1)
    throw SaError("value: key larger than this level holds");
  const auto it = values_.find(key);
  return it == values_.end() ? Rational(0) : it->second;
}

const std::map<SubsetKey, Rational>& SaSolution::values() const {
  if (mixture_) throw SaError("values: mixture-backed solution");
  return values_;
}

const std::vector<MixtureAtom>& SaSolution::atoms() const {
  if (!mixture_) throw SaError("atoms: explicit solution");
  return atoms_;
}

namespace {

// A valid schedule finishing within T induces a 0/1 product point feasible at
// every level, so the solver run can be skipped outright.
std::optional<SaSolution> integral_shortcut(const Instance& inst, int T,
                                            int s) {
  const Schedule greedy = list_schedule(inst).schedule;
  if (greedy.makespan() > T) return std::nullopt;
  const TimeIndex ti{inst.jobs(), T};
  std::map<SubsetKey, Rational> values;
  std::vector<int> on;
  for (const auto& [j, t] : greedy.slots) on.push_back(ti.var(j, t));
  std::sort(on.begin(), on.end());
  const int cap = s + 1;
  std::vector<int> pick;
  const auto rec = [&](auto&& self, std::size_t start) -> void {
    values[SubsetKey(pick)] = 1;
    if (static_cast<int>(pick.size()) == cap) return;
    for (std::size_t i = start; i < on.size(); ++i) {
      pick.push_back(on[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return SaSolution::explicit_solution(s, ti, std::move(values));
}

}  // namespace

std::optional<SaSolution> solve_sa(const Instance& inst, int T, int s,
                                   std::size_t var_cap) {
  auto [lp, ti] = build_time_indexed_lp(inst, T);
  const SaLift lift = build_sa_lift(lp, s, var_cap);
  if (auto direct = integral_shortcut(inst, T, s)) return direct;
  const SolveResult r = solve_feasibility(lift.lifted);
  if (!r.feasible) return std::nullopt;
  std::map<SubsetKey, Rational> values;
  for (std::size_t i = 0; i < lift.keys.size(); ++i)
    values[lift.keys[i]] = r.point.values[i];
  return SaSolution::explicit_solution(s, ti, std::move(values));
}

std::optional<SaSolution> solve_sa(const Instance& inst, int T, int s,
                                   const std::vector<Rational>& ground_hint,
                                   std::size_t var_cap) {
  auto [lp, ti] = build_time_indexed_lp(inst, T);
  const SaLift lift = build_sa_lift(lp, s, var_cap);
  const std::vector<Rational> hint = induced_product_point(lift, ground_hint);
  const SolveResult r = solve_feasibility(lift.lifted, hint);
  if (!r.feasible) return std::nullopt;
  std::map<SubsetKey, Rational> values;
  for (std::size_t i = 0; i < lift.keys.size(); ++i)
    values[lift.keys[i]] = r.point.values[i];
  return SaSolution::explicit_solution(s, ti, std::move(values));
}

SaSolution condition_on_var(const SaSolution& sol, int var) {
  if (sol.level() < 1) throw SaError("condition_on_var: level exhausted");
  const Rational mass = sol.ground(var);
  if (mass <= 0) throw SaError("condition_on_var: zero-mass variable");

  if (sol.is_mixture()) {
    const TimeIndex& ti = sol.timeindex();
    const int j = ti.job_of(var);
    const int t = ti.slot_of(var);
    std::vector<MixtureAtom> kept;
    for (const MixtureAtom& a : sol.atoms())
      if (a.slots[j - 1] == t) kept.push_back({a.weight / mass, a.slots});
    return SaSolution::mixture(sol.level() - 1, ti, std::move(kept));
  }

  const int new_level = sol.level() - 1;
  std::map<SubsetKey, Rational> out;
  for (const auto& [key, v] : sol.values()) {
    if (!key.contains(var)) continue;
    const Rational z = v / mass;
    out[key.without(var)] = z;
    if (key.size() <= new_level + 1) out[key] = z;
  }
  return SaSolution::explicit_solution(new_level, sol.timeindex(),
                                       std::move(out));
}

SaSolution condition_on_event(const SaSolution& sol, int job,
                              const std::set<int>& slots) {
  if (sol.level() < 1) throw SaError("condition_on_event: level exhausted");
  const TimeIndex& ti = sol.timeindex();
  if (job < 1 || job > ti.n) throw SaError("condition_on_event: bad job");
  Rational mass = 0;
  for (int t : slots) {
    if (t < 1 || t > ti.T) throw SaError("condition_on_event: bad slot");
    mass += sol.ground(ti.var(job, t));
  }
  if (mass <= 0) throw SaError("condition_on_event: zero event mass");

  if (sol.is_mixture()) {
    std::vector<MixtureAtom> kept;
    for (const MixtureAtom& a : sol.atoms())
      if (slots.count(a.slots[job - 1]))
        kept.push_back({a.weight / mass, a.slots});
    return SaSolution::mixture(sol.level() - 1, ti, std::move(kept));
  }

  const int new_level = sol.level() - 1;
  std::map<SubsetKey, Rational> out;
  for (int t : slots) {
    const int var = ti.var(job, t);
    for (const auto& [key, v] : sol.values()) {
      if (!key.contains(var)) continue;
      const Rational z = v / mass;
      out[key.without(var)] += z;
      if (key.size() <= new_level + 1) out[key] += z;
    }
  }
  return SaSolution::explicit_solution(new_level, sol.timeindex(),
                                       std::move(out));
}

SupportInfo fractional_support(const SaSolution& sol, int job) {
  const TimeIndex& ti = sol.timeindex();
  if (job < 1 || job > ti.n) throw SaError("fractional_support: bad job");
  SupportInfo info;
  for (int t = 1; t <= ti.T; ++t)
    if (sol.ground(ti.var(job, t)) > 0) info.supp.insert(t);
  if (info.supp.empty())
    throw SaError("fractional_support: empty support for job " +
                  std::to_string(job));
  info.r = *info.supp.begin();
  info.d = *info.supp.rbegin();
  return info;
}

bool satisfies_lift(const SaSolution& sol, const LinearProgram& base, int s,
                    std::size_t var_cap) {
  if (!sol.is_mixture() && s > sol.level())
    throw SaError("satisfies_lift: level exceeds solution");
  const SaLift lift = build_sa_lift(base, s, var_cap);
  for (const LinearRow& row : lift.lifted.rows) {
    Rational lhs = 0;
    for (const auto& [v, c] : row.coeffs) lhs += c * sol.value(lift.keys[v]);
    const bool ok = row.rel == Relation::LessEq  ? lhs <= row.rhs
                    : row.rel == Relation::Equal ? lhs == row.rhs
                                                 : lhs >= row.rhs;
    if (!ok) return false;
  }
  return true;
}

}  // namespace schedlift
