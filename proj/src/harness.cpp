#include "schedlift/harness.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "json.hpp"

#include "schedlift/baseline.hpp"
#include "schedlift/laminar.hpp"
#include "schedlift/lp.hpp"
#include "schedlift/oracle.hpp"
#include "schedlift/prng.hpp"
#include "schedlift/schedule.hpp"

namespace schedlift {

namespace {

using nlohmann::ordered_json;

ordered_json instance_to_json(const Instance& inst) {
  ordered_json doc;
  doc["n"] = inst.jobs();
  doc["m"] = inst.machines();
  auto prec = ordered_json::array();
  for (const auto& [u, v] : inst.edges()) prec.push_back({u, v});
  doc["prec"] = std::move(prec);
  return doc;
}

ordered_json schedule_to_json(const Schedule& sched) {
  ordered_json doc;
  doc["makespan"] = sched.makespan();
  auto slots = ordered_json::array();
  for (const auto& [job, slot] : sched.slots) slots.push_back({job, slot});
  doc["slots"] = std::move(slots);
  doc["discarded"] = sched.discarded;
  return doc;
}

ordered_json scan_to_json(const MinScan& scan) {
  auto steps = ordered_json::array();
  for (const ScanStep& step : scan.steps)
    steps.push_back({{"T", step.T}, {"feasible", step.feasible}});
  return steps;
}

ordered_json doc_header(const char* op, const Instance& inst) {
  ordered_json doc;
  doc["schema"] = kJsonSchema;
  doc["op"] = op;
  doc["n"] = inst.jobs();
  doc["m"] = inst.machines();
  return doc;
}

std::string finish(const ordered_json& doc) { return doc.dump(2) + "\n"; }

void check_schedule(const Instance& inst, const Schedule& sched,
                    const char* what) {
  const auto violations = validate(inst, sched);
  if (!violations.empty())
    throw HarnessError(std::string(what) +
                       ": schedule failed validation: " +
                       violations.front().detail);
}

int scan_floor(const Instance& inst) {
  const LowerBounds lb = lower_bounds(inst);
  return std::max({1, lb.load, lb.chain});
}

// All derived horizon choices and the rounding call share this path so the
// JSON reports agree on what actually ran.
struct PipelineRun {
  int T_input;
  std::string T_source;
  Padded padded;
  QptasParams params;
  QptasResult result;
};

PipelineRun run_pipeline(const Instance& inst, const QptasOptions& opt) {
  if (opt.atoms < 1) throw HarnessError("rounding: atoms must be >= 1");
  int T = opt.T;
  std::string source = "flag";
  if (T == 0) {
    if (inst.jobs() <= kExactDefaultCap) {
      T = exact_makespan(inst).makespan;
      source = "exact";
    } else {
      T = lp_min_scan(inst).value;
      source = "lp";
    }
  }
  if (T < 1) throw HarnessError("rounding: horizon must be >= 1");
  Padded padded = pad_to_power_of_two(inst, T);
  QptasParams params =
      opt.mode == QptasParams::Mode::Desk
          ? QptasParams::desk(inst.machines(), opt.eps, opt.k, opt.C, opt.R,
                              opt.delta, opt.base_threshold, opt.budget)
          : QptasParams::paper(inst.machines(), opt.eps, padded.inst.jobs(),
                               opt.budget);
  const SaSolution start = seed_mixture(padded.inst, padded.T, params.budget,
                                        opt.seed, opt.atoms);
  QptasResult result = schedule_qptas(padded.inst, padded.T, params, start);
  return PipelineRun{T, std::move(source), std::move(padded),
                     std::move(params), std::move(result)};
}

ordered_json params_to_json(const QptasParams& params) {
  ordered_json doc;
  doc["mode"] = params.mode == QptasParams::Mode::Desk ? "desk" : "paper";
  doc["eps"] = rational_to_string(params.eps);
  doc["k"] = params.k;
  doc["C"] = params.C;
  doc["R"] = params.R;
  doc["delta"] = rational_to_string(params.delta);
  doc["base_threshold"] = params.base_threshold;
  doc["budget"] = params.budget;
  return doc;
}

ordered_json trace_to_json(const RecursionTrace& trace) {
  auto nodes = ordered_json::array();
  for (const NodeTrace& nt : trace.nodes) {
    ordered_json node;
    node["node"] = nt.node;
    node["interval"] = {nt.interval.lo, nt.interval.hi};
    node["level"] = nt.interval.level;
    node["scope"] = nt.scope;
    node["kind"] = std::string(1, nt.kind);
    node["q"] = nt.q;
    node["conditionings"] = nt.conditionings;
    node["batch_sizes"] = nt.batch_sizes;
    node["discarded_batch"] = nt.discarded_batch;
    node["discarded_insert"] = nt.discarded_insert;
    node["charged"] = nt.charged;
    node["match"] = {{"top_count", nt.match.top_count},
                     {"empty_window", nt.match.empty_window},
                     {"unmatched", nt.match.unmatched},
                     {"replace_failed", nt.match.replace_failed}};
    node["insert_ratio"] = rational_to_string(nt.insert_ratio);
    nodes.push_back(std::move(node));
  }
  return nodes;
}

}  // namespace

MinScan lp_min_scan(const Instance& inst) {
  MinScan scan;
  const int hi = list_schedule(inst).schedule.makespan();
  for (int T = scan_floor(inst); T <= hi; ++T) {
    const auto built = build_time_indexed_lp(inst, T);
    const bool ok = solve_feasibility(built.first).feasible;
    scan.steps.push_back({T, ok});
    if (ok) {
      scan.value = T;
      return scan;
    }
  }
  // The list schedule itself satisfies the relaxation at its makespan.
  throw HarnessError(
      "relaxation scan passed the list makespan without a feasible horizon");
}

MinScan sa_min_scan(const Instance& inst, int rounds,
                    std::size_t var_cap) {
  if (rounds < 0) throw HarnessError("lift scan: rounds must be >= 0");
  if (rounds == 0) return lp_min_scan(inst);
  // Both certificate shortcuts are exact: ground values of any lift point
  // satisfy the base rows (so a horizon the plain relaxation rejects needs
  // no lift solve), and an integral schedule yields a one-atom mixture
  // satisfying every lift level (so neither does one the oracle accepts).
  // The costly exact lift solve runs precisely on the window between the
  // two, which is what the scan exists to measure.
  const int opt =
      inst.jobs() <= kOracleMaxJobs ? exact_makespan(inst).makespan : -1;
  MinScan scan;
  const int hi = list_schedule(inst).schedule.makespan();
  for (int T = scan_floor(inst); T <= hi; ++T) {
    bool ok;
    if (opt >= 0 && T >= opt) {
      ok = true;
    } else {
      const auto built = build_time_indexed_lp(inst, T);
      ok = solve_feasibility(built.first).feasible &&
           solve_sa(inst, T, rounds, var_cap).has_value();
    }
    scan.steps.push_back({T, ok});
    if (ok) {
      scan.value = T;
      return scan;
    }
  }
  throw HarnessError(
      "lift scan passed the list makespan without a feasible horizon");
}

GapReport gap_search(int m, int n_max, int trials, std::uint64_t seed,
                     int sa_rounds) {
  if (m < 1) throw HarnessError("gap search: m must be >= 1");
  if (n_max < 1) throw HarnessError("gap search: n_max must be >= 1");
  if (n_max > kOracleMaxJobs)
    throw HarnessError("gap search: n_max exceeds the exact oracle limit " +
                       std::to_string(kOracleMaxJobs));
  if (trials < 0) throw HarnessError("gap search: trials must be >= 0");
  if (sa_rounds < 0) throw HarnessError("gap search: sa rounds must be >= 0");

  GapReport report;
  report.m = m;
  report.n_max = n_max;
  report.trials = trials;
  report.sa_rounds = sa_rounds;
  report.seed = seed;
  report.max_ratio = Rational(0);

  SplitMix64 rng(seed);
  const Rational menu[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2),
                           Rational(2, 3)};
  const int n_lo = std::min(3, n_max);
  // Fixed sweep of complete layered shapes, the family the relaxation
  // misjudges; iid edge sampling essentially never assembles one.
  std::vector<std::pair<int, int>> shapes;
  for (int n = 4; n <= n_max; ++n)
    for (int L = 2; L <= 3 && L <= n; ++L) shapes.emplace_back(n, L);
  std::size_t next_shape = 0;

  for (int trial = 0; trial < trials; ++trial) {
    GapWitness w;
    w.trial = trial;
    w.m = m;
    const bool structured = !shapes.empty() && trial % 4 == 3;
    const Instance inst = [&] {
      if (structured) {
        const auto [n, L] = shapes[next_shape++ % shapes.size()];
        w.kind = "layered";
        w.n = n;
        w.layers = L;
        return generate_layered(n, m, L);
      }
      w.kind = "gnp";
      w.n = n_lo + static_cast<int>(rng.below(
                       static_cast<std::uint64_t>(n_max - n_lo + 1)));
      w.edge_prob = menu[rng.below(4)];
      w.inst_seed = rng.next();
      return generate_gnp(w.n, m, w.edge_prob, w.inst_seed);
    }();

    const ExactResult exact = exact_makespan(inst);
    check_schedule(inst, exact.witness, "gap search: oracle witness");
    if (exact.witness.makespan() != exact.makespan)
      throw HarnessError("gap search: oracle witness makespan mismatch");

    const MinScan scan = sa_rounds >= 1 ? sa_min_scan(inst, sa_rounds)
                                        : lp_min_scan(inst);
    const Rational ratio = Rational(exact.makespan) / Rational(scan.value);
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (exact.makespan > scan.value) {
      w.opt = exact.makespan;
      w.relax_min = scan.value;
      w.ratio = ratio;
      w.instance_json = serialize_instance_json(inst);
      report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

std::string exact_json(const Instance& inst) {
  const ExactResult res = exact_makespan(inst);
  check_schedule(inst, res.witness, "exact: witness");
  ordered_json doc = doc_header("exact", inst);
  doc["opt"] = res.makespan;
  doc["schedule"] = schedule_to_json(res.witness);
  return finish(doc);
}

std::string list_json(const Instance& inst) {
  const ListResult res = list_schedule(inst);
  check_schedule(inst, res.schedule, "list: schedule");
  const LowerBounds lb = lower_bounds(inst);
  ordered_json doc = doc_header("list", inst);
  doc["makespan"] = res.schedule.makespan();
  doc["busy_slots"] = res.busy_slots;
  doc["nonbusy_slots"] = res.nonbusy_slots;
  doc["load_bound"] = lb.load;
  doc["chain_bound"] = lb.chain;
  doc["schedule"] = schedule_to_json(res.schedule);
  return finish(doc);
}

std::string lp_json(const Instance& inst) {
  const MinScan scan = lp_min_scan(inst);
  ordered_json doc = doc_header("lp", inst);
  doc["lp_min"] = scan.value;
  doc["scan"] = scan_to_json(scan);
  return finish(doc);
}

std::string sa_json(const Instance& inst, int rounds) {
  const MinScan scan = sa_min_scan(inst, rounds);
  ordered_json doc = doc_header("sa", inst);
  doc["rounds"] = rounds;
  doc["sa_min"] = scan.value;
  doc["scan"] = scan_to_json(scan);
  return finish(doc);
}

std::string qptas_json(const Instance& inst, const QptasOptions& opt) {
  PipelineRun run = run_pipeline(inst, opt);
  check_schedule(run.padded.inst, run.result.partial, "rounding: partial");
  check_schedule(run.padded.inst, run.result.full, "rounding: repaired");
  ordered_json doc = doc_header("qptas", inst);
  doc["T_input"] = run.T_input;
  doc["T_source"] = run.T_source;
  doc["T"] = run.padded.T;
  doc["padded_jobs"] = run.padded.inst.jobs();
  doc["params"] = params_to_json(run.params);
  doc["makespan_partial"] = run.result.partial.makespan();
  doc["discards_type1"] = static_cast<int>(run.result.ledger.type1.size());
  doc["discards_type2"] = static_cast<int>(run.result.ledger.type2.size());
  doc["charged"] = static_cast<int>(run.result.ledger.charges.size());
  doc["makespan_final"] = run.result.full.makespan();
  doc["conditionings"] = {
      {"total", run.result.trace.total_conditionings},
      {"base", run.result.trace.base_conditionings},
      {"max_node", run.result.trace.max_node_conditionings}};
  Rational max_insert_ratio(0);
  for (const NodeTrace& nt : run.result.trace.nodes)
    max_insert_ratio = std::max(max_insert_ratio, nt.insert_ratio);
  doc["max_insert_ratio"] = rational_to_string(max_insert_ratio);
  doc["padded_instance"] = instance_to_json(run.padded.inst);
  doc["schedule_partial"] = schedule_to_json(run.result.partial);
  doc["schedule"] = schedule_to_json(run.result.full);
  doc["trace"] = trace_to_json(run.result.trace);
  return finish(doc);
}

std::string gap_search_json(const GapReport& report) {
  ordered_json doc;
  doc["schema"] = kJsonSchema;
  doc["op"] = "gap-search";
  doc["m"] = report.m;
  doc["n_max"] = report.n_max;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["sa_rounds"] = report.sa_rounds;
  doc["max_ratio"] = rational_to_string(report.max_ratio);
  doc["witness_count"] = static_cast<int>(report.witnesses.size());
  auto arr = ordered_json::array();
  for (const GapWitness& w : report.witnesses) {
    ordered_json wd;
    wd["trial"] = w.trial;
    wd["kind"] = w.kind;
    wd["seed"] = w.inst_seed;
    wd["n"] = w.n;
    wd["m"] = w.m;
    wd["edge_prob"] = rational_to_string(w.edge_prob);
    wd["layers"] = w.layers;
    wd["opt"] = w.opt;
    wd["relax_min"] = w.relax_min;
    wd["ratio"] = rational_to_string(w.ratio);
    wd["instance"] = ordered_json::parse(w.instance_json);
    arr.push_back(std::move(wd));
  }
  doc["witnesses"] = std::move(arr);
  return finish(doc);
}

std::string compare_json(const Instance& inst, const QptasOptions& opt) {
  if (inst.jobs() > kOracleMaxJobs)
    throw HarnessError("compare: exact column needs n <= " +
                       std::to_string(kOracleMaxJobs));
  const ExactResult exact = exact_makespan(inst);
  check_schedule(inst, exact.witness, "compare: oracle witness");
  const ListResult lst = list_schedule(inst);
  check_schedule(inst, lst.schedule, "compare: list schedule");
  const MinScan lp = lp_min_scan(inst);
  const MinScan sa1 = sa_min_scan(inst, 1);
  QptasOptions qopt = opt;
  if (qopt.T == 0) qopt.T = exact.makespan;
  PipelineRun run = run_pipeline(inst, qopt);
  check_schedule(run.padded.inst, run.result.full, "compare: repaired");
  ordered_json doc = doc_header("compare", inst);
  doc["opt"] = exact.makespan;
  doc["list"] = lst.schedule.makespan();
  doc["lp"] = lp.value;
  doc["sa1"] = sa1.value;
  doc["qptas_final"] = run.result.full.makespan();
  doc["qptas"] = {
      {"T_input", run.T_input},
      {"T", run.padded.T},
      {"makespan_partial", run.result.partial.makespan()},
      {"discards", run.result.ledger.total_discarded()}};
  return finish(doc);
}

}  // namespace schedlift
