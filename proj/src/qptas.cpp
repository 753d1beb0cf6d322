#include "schedlift/qptas.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "schedlift/oracle.hpp"
#include "schedlift/prng.hpp"

namespace schedlift {

namespace {

int ceil_log2(int n) {
  int L = 0;
  while ((1LL << L) < n) ++L;
  return L;
}

Rational pow2(int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= 2;
  return r;
}

BigInt ceil_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  return (num + den - 1) / den;
}

std::string interval_str(const Interval& iv) {
  std::ostringstream os;
  os << "(" << iv.level << "," << iv.index << ")=[" << iv.lo << "," << iv.hi
     << "]";
  return os.str();
}

bool range_inside(const Interval& inner, const Interval& outer) {
  return inner.lo >= outer.lo && inner.hi <= outer.hi;
}

}  // namespace

QptasParams QptasParams::desk(int m, const Rational& eps, int k, int C, int R,
                              const Rational& delta, int base_threshold,
                              int budget) {
  QptasParams p;
  p.mode = Mode::Desk;
  p.m = m;
  p.eps = eps;
  p.k = k;
  p.C = C;
  p.R = R;
  p.delta = delta;
  p.base_threshold = base_threshold;
  p.budget = budget;
  p.validate();
  return p;
}

QptasParams QptasParams::paper(int m, const Rational& eps, int n, int budget) {
  if (m < 1) throw QptasError("machine count must be positive");
  if (eps <= 0 || eps > 1) throw QptasError("eps must lie in (0, 1]");
  if (n < 1) throw QptasError("job count must be positive");
  QptasParams p;
  p.mode = Mode::Paper;
  p.m = m;
  p.eps = eps;
  const int L = std::max(1, ceil_log2(n));

  const Rational retain = (Rational(4 * m) / eps) * (Rational(4 * m) / eps);
  const BigInt rbig = ceil_rational(retain);
  if (rbig > 1000000) throw QptasError("derived retained-batch count too large");
  p.R = static_cast<int>(rbig);
  p.C = 2 * p.R + 1;

  const Rational kval = Rational(32 * m) / eps * L;
  int k = 0;
  for (Rational pw = 1; pw < kval; pw *= 2) ++k;
  p.k = std::max(1, k);

  const long long ck = static_cast<long long>(p.C) * p.k;
  if (ck > 2000000) throw QptasError("derived scan depth too large");
  p.delta = eps / (Rational(8 * m) * Rational(static_cast<long>(ck)) *
                   pow2(static_cast<int>(ck)) * L);
  p.base_threshold = ck - 1 <= 30
                         ? (1 << static_cast<int>(ck - 1))
                         : std::numeric_limits<int>::max();
  p.budget = budget;
  p.validate();
  return p;
}

Rational QptasParams::eps4m() const { return eps / Rational(4 * m); }

void QptasParams::validate() const {
  if (m < 1) throw QptasError("machine count must be positive");
  if (eps <= 0 || eps > 1) throw QptasError("eps must lie in (0, 1]");
  if (k < 1) throw QptasError("batch width k must be positive");
  if (R < 1) throw QptasError("retained-batch count R must be positive");
  if (C < R + 1) throw QptasError("batch budget C must be at least R + 1");
  if (delta <= 0) throw QptasError("chain threshold delta must be positive");
  if (budget < 0) throw QptasError("conditioning budget must be nonnegative");
  const long long ck = static_cast<long long>(C) * k;
  const int need = ck - 1 <= 30 ? (1 << static_cast<int>(ck - 1))
                                : std::numeric_limits<int>::max();
  if (base_threshold < need)
    throw QptasError("base threshold below 2^(Ck-1): a scanned node could "
                     "run out of levels");
}

void DiscardLedger::discard_type1(int job, int node) {
  if (is_discarded(job))
    throw QptasError("job " + std::to_string(job) + " discarded twice");
  type1[job] = node;
}

void DiscardLedger::discard_type2(int job, int node) {
  if (is_discarded(job))
    throw QptasError("job " + std::to_string(job) + " discarded twice");
  type2[job] = node;
}

void DiscardLedger::charge(int job, int node) {
  if (charges.count(job))
    throw QptasError("job " + std::to_string(job) + " charged twice");
  if (!type2_nodes.count(node))
    throw QptasError("charge outside a type-2 recursion at node " +
                     std::to_string(node));
  charges[job] = node;
}

bool DiscardLedger::is_discarded(int job) const {
  return type1.count(job) != 0 || type2.count(job) != 0;
}

int DiscardLedger::total_discarded() const {
  return static_cast<int>(type1.size() + type2.size());
}

SaSolution seed_mixture(const Instance& inst, int T, int level,
                        std::uint64_t seed, int atom_limit) {
  if (atom_limit < 1) throw QptasError("atom limit must be positive");
  if (level < 0) throw QptasError("level must be nonnegative");
  const std::vector<Schedule> scheds =
      enumerate_schedules(inst, T, atom_limit, seed);
  if (scheds.empty())
    throw QptasError("no feasible schedule within horizon " +
                     std::to_string(T));
  SplitMix64 rng(seed);
  std::vector<Rational> raw;
  Rational total = 0;
  for (std::size_t i = 0; i < scheds.size(); ++i) {
    // 1000(i+1) plus a sub-1000 jitter: weights stay distinct and positive.
    const Rational w = Rational(1000 * (static_cast<long>(i) + 1) +
                                static_cast<long>(rng.next() % 997));
    raw.push_back(w);
    total += w;
  }
  std::vector<MixtureAtom> atoms;
  for (std::size_t i = 0; i < scheds.size(); ++i) {
    MixtureAtom atom;
    atom.weight = raw[i] / total;
    atom.slots.resize(inst.jobs());
    for (int j = 1; j <= inst.jobs(); ++j) atom.slots[j - 1] = scheds[i].slots.at(j);
    atoms.push_back(std::move(atom));
  }
  return SaSolution::mixture(level, TimeIndex{inst.jobs(), T}, atoms);
}

namespace {

// Per-batch assignment counts relative to the node's own level.
BatchView batch_counts(const JobWindows& w, int level_origin, int k,
                       int batches) {
  BatchView v;
  v.k = k;
  v.counts.assign(static_cast<std::size_t>(batches), 0);
  for (const auto& [job, jw] : w.jobs) {
    const int rel = jw.assigned.level - level_origin;
    if (rel < 0)
      throw QptasError("job " + std::to_string(job) +
                       " assigned above its node");
    const int b = rel / k;
    if (b < batches) ++v.counts[static_cast<std::size_t>(b)];
  }
  return v;
}

struct Engine {
  const Instance& inst;
  const LaminarFamily fam;
  const QptasParams& par;
  DiscardLedger ledger;
  RecursionTrace trace;
  Rational eps4m;
  Rational per_interval_cap;  // m / delta
  Rational per_node_cap;      // 2^{Ck} m / delta
  Rational insert_denom_coeff;  // eps / (4 ceil(log2 n)), times |I| per node
  int next_node = 0;

  Engine(const Instance& instance, int T, const QptasParams& params)
      : inst(instance), fam(T), par(params) {
    eps4m = par.eps4m();
    per_interval_cap = Rational(par.m) / par.delta;
    per_node_cap = pow2(par.C * par.k) * par.m / par.delta;
    insert_denom_coeff =
        par.eps / Rational(4 * std::max(1, ceil_log2(inst.jobs())));
  }

  Schedule run(SaSolution sol, const Interval& I0, std::vector<int> scope) {
    const int id = next_node++;
    const std::size_t slot = trace.nodes.size();
    trace.nodes.emplace_back();
    NodeTrace nt;
    nt.node = id;
    nt.interval = I0;
    nt.scope = static_cast<int>(scope.size());
    std::sort(scope.begin(), scope.end());

    Schedule out;
    if (scope.empty()) {
      nt.kind = 'e';
    } else if (I0.length() <= par.base_threshold) {
      out = base_case(sol, I0, scope, nt);
    } else {
      out = scan_and_recurse(std::move(sol), I0, scope, nt, id);
    }
    trace.nodes[slot] = nt;
    return out;
  }

  Schedule base_case(SaSolution& sol, const Interval& I0,
                     const std::vector<int>& scope, NodeTrace& nt) {
    nt.kind = 'l';
    if (static_cast<int>(scope.size()) > par.m * I0.length())
      throw QptasError("base case at " + interval_str(I0) + " holds " +
                       std::to_string(scope.size()) +
                       " jobs, beyond machine capacity");
    int cond = 0;
    for (;;) {
      int pick_job = 0;
      int pick_slot = 0;
      for (int j : scope) {
        const SupportInfo si = fractional_support(sol, j);
        if (si.supp.size() >= 2) {
          pick_job = j;
          pick_slot = *si.supp.begin();
          break;
        }
      }
      if (pick_job == 0) break;
      if (sol.level() <= 0)
        throw QptasError("conditioning budget exhausted while integralizing " +
                         interval_str(I0));
      sol = condition_on_event(sol, pick_job, {pick_slot});
      ++cond;
      if (cond > par.m * I0.length())
        throw QptasError("integralization of " + interval_str(I0) +
                         " exceeded m*|I| conditionings");
    }
    Schedule out;
    for (int j : scope) {
      const SupportInfo si = fractional_support(sol, j);
      if (si.supp.size() != 1)
        throw QptasError("job " + std::to_string(j) +
                         " still fractional after integralization");
      out.slots[j] = si.r;
    }
    nt.conditionings = cond;
    trace.base_conditionings += cond;
    trace.total_conditionings += cond;
    return out;
  }

  Schedule scan_and_recurse(SaSolution sol, const Interval& I0,
                            const std::vector<int>& scope, NodeTrace& nt,
                            int id) {
    const int Ck = par.C * par.k;
    if (I0.level + Ck > fam.depth())
      throw QptasError("node " + interval_str(I0) +
                       " too shallow for a " + std::to_string(Ck) +
                       "-level scan");

    JobWindows w;
    for (int j : scope) {
      const SupportInfo si = fractional_support(sol, j);
      JobWindow jw;
      jw.F_lo = si.r;
      jw.F_hi = si.d;
      jw.S_lo = si.r;
      jw.S_hi = si.d;
      w.jobs[j] = jw;
    }
    assign_jobs(w, fam);
    for (const auto& [j, jw] : w.jobs)
      if (!range_inside(jw.assigned, I0))
        throw QptasError("job " + std::to_string(j) + " assigned to " +
                         interval_str(jw.assigned) + " outside node " +
                         interval_str(I0));

    // Step 1: chain reduction over the top Ck levels, stopping early at the
    // first good batch boundary.
    int q = par.C;
    char kind = 'b';
    std::map<std::pair<int, int>, int> per_interval;
    int node_cond = 0;
    for (int lr = 0; lr < Ck && kind == 'b'; ++lr) {
      const int lg = I0.level + lr;
      const AssignmentSnapshot snap = snapshot_assignments(w);
      const int base_idx = (I0.index - 1) << lr;
      for (int ii = 1; ii <= (1 << lr); ++ii) {
        const Interval I = fam.interval(lg, base_idx + ii);
        for (;;) {
          std::vector<int> jobs_here;
          for (const auto& [j, jw] : w.jobs)
            if (jw.assigned == I) jobs_here.push_back(j);
          if (jobs_here.empty()) break;
          const std::vector<int> chain =
              longest_chain(inst.closure(), jobs_here);
          if (Rational(static_cast<long>(chain.size())) <=
              par.delta * I.length())
            break;
          const int head = chain.front();
          const Interval right = fam.right_child(I);
          const SupportInfo si = fractional_support(sol, head);
          std::set<int> event;
          for (int t : si.supp)
            if (t >= right.lo && t <= right.hi) event.insert(t);
          if (event.empty())
            throw QptasError("chain head " + std::to_string(head) +
                             " has no support in the right half of " +
                             interval_str(I));
          if (sol.level() <= 0)
            throw QptasError("conditioning budget exhausted at " +
                             interval_str(I));
          sol = condition_on_event(sol, head, event);
          ++node_cond;
          int& cnt = per_interval[{lg, I.index}];
          ++cnt;
          if (Rational(cnt) > per_interval_cap)
            throw QptasError("more than m/delta conditionings on " +
                             interval_str(I));
          if (Rational(node_cond) > per_node_cap)
            throw QptasError("more than 2^(Ck) m/delta conditionings at "
                             "node " + interval_str(I0));
          for (auto& [j, jw] : w.jobs) {
            const SupportInfo f = fractional_support(sol, j);
            jw.F_lo = f.r;
            jw.F_hi = f.d;
          }
          update_support_intervals(w, lg, snap, fam);
        }
      }
      if ((lr + 1) % par.k == 0) {
        const int p = (lr + 1) / par.k - 1;
        if (p >= 1 &&
            is_good_batch(batch_counts(w, I0.level, par.k, p + 1), p, par.eps,
                          par.m)) {
          q = p + 1;
          kind = 'a';
        }
      }
    }

    nt.kind = kind;
    nt.q = q;
    nt.conditionings = node_cond;
    trace.total_conditionings += node_cond;
    trace.max_node_conditionings =
        std::max(trace.max_node_conditionings, node_cond);
    nt.batch_sizes = batch_counts(w, I0.level, par.k, q).counts;

    return kind == 'a' ? recurse_type1(sol, I0, w, q, nt, id)
                       : recurse_type2(sol, I0, w, nt, id);
  }

  // Recurses on every interval at relative level `split`, handing each
  // child a copy of the current solution and the jobs assigned inside its
  // subtree.
  Schedule recurse_children(const SaSolution& sol, const Interval& I0,
                            const JobWindows& w, int split) {
    const int Lg = I0.level + split;
    const int width = 1 << split;
    Schedule lower;
    for (int ci = 1; ci <= width; ++ci) {
      const Interval child = fam.interval(Lg, (I0.index - 1) * width + ci);
      std::vector<int> cscope;
      for (const auto& [j, jw] : w.jobs)
        if (jw.assigned.level >= Lg && range_inside(jw.assigned, child))
          cscope.push_back(j);
      Schedule part = run(sol, child, std::move(cscope));
      for (const auto& [j, t] : part.slots) lower.slots[j] = t;
      lower.discarded.insert(lower.discarded.end(), part.discarded.begin(),
                             part.discarded.end());
    }
    return lower;
  }

  Schedule recurse_type1(const SaSolution& sol, const Interval& I0,
                         const JobWindows& w, int q, NodeTrace& nt, int id) {
    const int qk = q * par.k;
    std::vector<int> top, middle, bottom;
    for (const auto& [j, jw] : w.jobs) {
      const int rel = jw.assigned.level - I0.level;
      if (rel >= qk) {
        bottom.push_back(j);
      } else if (rel / par.k == q - 1) {
        middle.push_back(j);
      } else {
        top.push_back(j);
      }
    }

    // The discarded middle batch is bounded by the goodness inequality.
    if (Rational(static_cast<long>(middle.size())) >
        eps4m * Rational(static_cast<long>(top.size())))
      throw QptasError("middle batch at " + interval_str(I0) +
                       " exceeds its goodness bound");
    for (int j : middle) ledger.discard_type1(j, id);
    nt.discarded_batch = static_cast<int>(middle.size());

    // Longest chain among survivors of the scanned levels.
    if (!top.empty()) {
      const std::vector<int> chain = longest_chain(inst.closure(), top);
      if (Rational(static_cast<long>(chain.size())) >
          Rational(par.C * par.k) * par.delta * I0.length())
        throw QptasError("top chain at " + interval_str(I0) +
                         " exceeds Ck*delta*|I|");
    }

    // No related pair may end up with the successor under the
    // predecessor's left half, or the predecessor under the successor's
    // right half; the insertion windows rely on this.
    std::vector<int> alive = top;
    alive.insert(alive.end(), bottom.begin(), bottom.end());
    for (int u : alive) {
      for (int v : alive) {
        if (u == v || !inst.closure().before(u, v)) continue;
        const Interval& iu = w.jobs.at(u).assigned;
        const Interval& iv = w.jobs.at(v).assigned;
        if (iu.length() >= 2 && range_inside(iv, fam.left_child(iu)))
          throw QptasError("job " + std::to_string(v) +
                           " assigned under the left half of its "
                           "predecessor's interval " + interval_str(iu));
        if (iv.length() >= 2 && range_inside(iu, fam.right_child(iv)))
          throw QptasError("job " + std::to_string(u) +
                           " assigned under the right half of its "
                           "successor's interval " + interval_str(iv));
      }
    }

    Schedule lower = recurse_children(sol, I0, w, qk);

    InsertResult ins = insert_top_jobs(inst, lower, top, w, I0.level + qk, fam);
    for (int j : ins.discarded) ledger.discard_type1(j, id);
    nt.discarded_insert = static_cast<int>(ins.discarded.size());
    nt.match = ins.stats;
    const Rational denom = insert_denom_coeff * I0.length();
    nt.insert_ratio = Rational(static_cast<long>(ins.discarded.size())) / denom;

    Schedule out = std::move(ins.schedule);
    out.discarded.insert(out.discarded.end(), middle.begin(), middle.end());
    std::sort(out.discarded.begin(), out.discarded.end());
    return out;
  }

  Schedule recurse_type2(const SaSolution& sol, const Interval& I0,
                         const JobWindows& w, NodeTrace& nt, int id) {
    const int keep_from = (par.C - par.R) * par.k;
    std::vector<int> front, charged;
    for (const auto& [j, jw] : w.jobs) {
      const int rel = jw.assigned.level - I0.level;
      if (rel >= keep_from) {
        if (rel < par.C * par.k) charged.push_back(j);
      } else {
        front.push_back(j);
      }
    }

    ledger.type2_nodes.insert(id);
    for (int j : front) ledger.discard_type2(j, id);
    for (int j : charged) ledger.charge(j, id);
    nt.discarded_batch = static_cast<int>(front.size());
    nt.charged = static_cast<int>(charged.size());

    // Every scanned batch was bad, so counts grew geometrically; the
    // charged batches absorb the discard at rate eps4m * R.
    if (eps4m * par.R * Rational(static_cast<long>(front.size())) >
        Rational(static_cast<long>(charged.size())))
      throw QptasError("type-2 discard at " + interval_str(I0) +
                       " exceeds its charge capacity");

    Schedule out = recurse_children(sol, I0, w, keep_from);
    out.discarded.insert(out.discarded.end(), front.begin(), front.end());
    std::sort(out.discarded.begin(), out.discarded.end());
    return out;
  }
};

}  // namespace

QptasResult schedule_qptas(const Instance& inst, int T,
                           const QptasParams& params,
                           const SaSolution& start) {
  params.validate();
  if (T < 1 || (T & (T - 1)) != 0)
    throw QptasError("horizon must be a positive power of two");
  if (start.timeindex().n != inst.jobs() || start.timeindex().T != T)
    throw QptasError("start solution indexed for a different system");

  Engine eng(inst, T, params);
  std::vector<int> scope(static_cast<std::size_t>(inst.jobs()));
  std::iota(scope.begin(), scope.end(), 1);
  Schedule partial = eng.run(start, eng.fam.root(), std::move(scope));
  std::sort(partial.discarded.begin(), partial.discarded.end());

  // The ledger and the schedule must agree on the discarded set.
  std::set<int> recorded;
  for (const auto& [j, node] : eng.ledger.type1) recorded.insert(j);
  for (const auto& [j, node] : eng.ledger.type2) recorded.insert(j);
  const std::set<int> listed(partial.discarded.begin(),
                             partial.discarded.end());
  if (recorded != listed)
    throw QptasError("discard ledger disagrees with the schedule");

  const std::vector<Violation> bad = validate(inst, partial);
  if (!bad.empty())
    throw QptasError("assembled schedule invalid: " + bad.front().detail);

  QptasResult res;
  res.partial = std::move(partial);
  res.full = repair_discarded(res.partial, inst);
  res.ledger = std::move(eng.ledger);
  res.trace = std::move(eng.trace);
  return res;
}

QptasResult schedule_qptas(const Instance& inst, int T,
                           const QptasParams& params, std::uint64_t seed) {
  return schedule_qptas(inst, T, params,
                        seed_mixture(inst, T, params.budget, seed));
}

Schedule repair_discarded(const Schedule& partial, const Instance& inst) {
  Schedule out;
  out.slots = partial.slots;
  const std::set<int> disc(partial.discarded.begin(),
                           partial.discarded.end());
  if (disc.size() != partial.discarded.size())
    throw QptasError("discard list contains duplicates");
  std::vector<int> order;
  for (int j : inst.topo_order())
    if (disc.count(j)) order.push_back(j);
  if (order.size() != disc.size())
    throw QptasError("discard list names unknown jobs");

  for (int j : order) {
    int t = 0;
    for (int u = 1; u <= inst.jobs(); ++u) {
      if (!inst.closure().before(u, j)) continue;
      const auto it = out.slots.find(u);
      if (it != out.slots.end()) t = std::max(t, it->second);
    }
    for (auto& [job, s] : out.slots)
      if (s >= t + 1) ++s;
    out.slots[j] = t + 1;
    for (int v = 1; v <= inst.jobs(); ++v) {
      if (!inst.closure().before(j, v)) continue;
      const auto it = out.slots.find(v);
      if (it != out.slots.end() && it->second <= t + 1)
        throw QptasError("repair placed job " + std::to_string(j) +
                         " at or after its successor " + std::to_string(v));
    }
  }

  if (out.makespan() >
      partial.makespan() + static_cast<int>(partial.discarded.size()))
    throw QptasError("repair exceeded its one-slot-per-discard allowance");
  const std::vector<Violation> bad = validate(inst, out);
  if (!bad.empty())
    throw QptasError("repaired schedule invalid: " + bad.front().detail);
  return out;
}

}  // namespace schedlift
