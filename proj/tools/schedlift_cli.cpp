#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "schedlift/capi.h"

namespace {

const char* status_code(sl_status status) {
  switch (status) {
    case SL_OK:
      return "ok";
    case SL_ERR_ARGUMENT:
      return "argument";
    case SL_ERR_PARSE:
      return "parse";
    case SL_ERR_DOMAIN:
      return "domain";
    case SL_ERR_LIMIT:
      return "limit";
    case SL_ERR_INTERNAL:
      return "internal";
  }
  return "internal";
}

// Solver and parse failures become a structured document on stdout with
// exit code 1; usage problems go to stderr with exit code 2.
int emit_status(sl_status status) {
  nlohmann::ordered_json doc;
  doc["schema"] = "schedlift/1";
  doc["error"] = {{"code", status_code(status)},
                  {"message", sl_last_error()}};
  std::cout << doc.dump(2) << "\n";
  return 1;
}

int emit_text(const char* text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

// Returns 0 and fills *inst on success, otherwise the process exit code.
int load_instance(const std::string& path, sl_instance** inst) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return 2;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const sl_status status = sl_instance_parse(text.c_str(), inst);
  if (status != SL_OK) return emit_status(status);
  return 0;
}

struct QptasFlags {
  std::string eps = "1/2";
  std::string mode = "desk";
  std::string delta = "1/4";
  int k = 1;
  int C = 3;
  int R = 1;
  int base_threshold = 8;
  int budget = 256;
  int T = 0;
  std::uint64_t seed = 0;
  int atoms = 6;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--epsilon", eps, "target accuracy, a rational");
    cmd->add_option("--mode", mode, "parameter regime")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--k", k, "levels per batch");
    cmd->add_option("--C", C, "batches scanned before a type-2 recursion");
    cmd->add_option("--R", R, "batches retained by type 2");
    cmd->add_option("--delta", delta, "chain threshold per interval");
    cmd->add_option("--base-threshold", base_threshold,
                    "interval length that integralizes directly");
    cmd->add_option("--budget", budget, "conditioning budget");
    cmd->add_option("--T", T, "horizon; 0 picks one automatically");
    cmd->add_option("--seed", seed, "seed for the start mixture");
    cmd->add_option("--atoms", atoms, "schedules in the start mixture");
  }

  sl_qptas_options to_capi() const {
    sl_qptas_options opt;
    sl_qptas_options_init(&opt);
    opt.eps = eps.c_str();
    opt.delta = delta.c_str();
    opt.paper_mode = mode == "paper" ? 1 : 0;
    opt.k = k;
    opt.C = C;
    opt.R = R;
    opt.base_threshold = base_threshold;
    opt.budget = budget;
    opt.T = T;
    opt.seed = seed;
    opt.atoms = atoms;
    return opt;
  }
};

int run_with_instance(const std::string& in_path, const std::string& out_path,
                      sl_status (*run)(const sl_instance*, char**)) {
  sl_instance* inst = nullptr;
  if (const int code = load_instance(in_path, &inst)) return code;
  char* text = nullptr;
  const sl_status status = run(inst, &text);
  sl_instance_free(inst);
  if (status != SL_OK) return emit_status(status);
  const int code = emit_text(text, out_path);
  sl_string_free(text);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact, relaxed and rounded schedules for unit jobs with "
               "precedence constraints"};
  app.require_subcommand(1);

  std::string in_path;
  std::string out_path;

  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_kind = "gnp";
  int gen_n = 0;
  int gen_m = 1;
  std::string gen_p = "1/2";
  int gen_layers = 2;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "generator")
      ->check(CLI::IsMember({"gnp", "chain", "layered"}));
  gen->add_option("--n", gen_n, "number of jobs")->required();
  gen->add_option("--m", gen_m, "number of machines")->required();
  gen->add_option("--p", gen_p, "edge probability for gnp");
  gen->add_option("--layers", gen_layers, "layer count for layered");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", out_path, "output path (default stdout)");

  auto* exact = app.add_subcommand("exact", "optimal makespan by search");
  exact->add_option("--in", in_path, "instance file")->required();
  exact->add_option("--out", out_path, "output path (default stdout)");

  auto* list = app.add_subcommand("list", "greedy list schedule and bounds");
  list->add_option("--in", in_path, "instance file")->required();
  list->add_option("--out", out_path, "output path (default stdout)");

  auto* lp = app.add_subcommand("lp", "smallest feasible relaxation horizon");
  lp->add_option("--in", in_path, "instance file")->required();
  lp->add_option("--out", out_path, "output path (default stdout)");

  auto* sa = app.add_subcommand("sa", "smallest feasible lifted horizon");
  int sa_rounds = 1;
  sa->add_option("--in", in_path, "instance file")->required();
  sa->add_option("--rounds", sa_rounds, "lift level");
  sa->add_option("--out", out_path, "output path (default stdout)");

  auto* qptas = app.add_subcommand("qptas", "recursive rounding pipeline");
  QptasFlags qptas_flags;
  qptas->add_option("--in", in_path, "instance file")->required();
  qptas_flags.add_options(qptas);
  qptas->add_option("--out", out_path, "output path (default stdout)");

  auto* gap = app.add_subcommand("gap-search",
                                 "hunt for integrality-gap witnesses");
  int gap_m = 2;
  int gap_n_max = 8;
  int gap_trials = 50;
  std::uint64_t gap_seed = 0;
  int gap_sa_rounds = 0;
  gap->add_option("--m", gap_m, "number of machines")->required();
  gap->add_option("--n-max", gap_n_max, "largest sampled size")->required();
  gap->add_option("--trials", gap_trials, "sampled instances")->required();
  gap->add_option("--seed", gap_seed, "sampling seed")->required();
  gap->add_option("--sa-rounds", gap_sa_rounds,
                  "compare against this lift level instead of the relaxation");
  gap->add_option("--out", out_path, "output path (default stdout)");

  auto* compare = app.add_subcommand(
      "compare", "optimal, greedy, relaxed and rounded values side by side");
  QptasFlags compare_flags;
  compare->add_option("--in", in_path, "instance file")->required();
  compare_flags.add_options(compare);
  compare->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (gen->parsed()) {
    sl_instance* inst = nullptr;
    const std::string layers_text = std::to_string(gen_layers);
    const char* param =
        gen_kind == "layered" ? layers_text.c_str() : gen_p.c_str();
    const sl_status status =
        sl_instance_generate(gen_kind.c_str(), gen_n, gen_m, param, gen_seed,
                             &inst);
    if (status != SL_OK) return emit_status(status);
    char* text = nullptr;
    const sl_status ser = sl_instance_serialize(inst, 1, &text);
    sl_instance_free(inst);
    if (ser != SL_OK) return emit_status(ser);
    std::string body(text);
    sl_string_free(text);
    body += "\n";
    return emit_text(body.c_str(), out_path);
  }
  if (exact->parsed()) return run_with_instance(in_path, out_path, sl_run_exact);
  if (list->parsed()) return run_with_instance(in_path, out_path, sl_run_list);
  if (lp->parsed()) return run_with_instance(in_path, out_path, sl_run_lp);
  if (sa->parsed()) {
    sl_instance* inst = nullptr;
    if (const int code = load_instance(in_path, &inst)) return code;
    char* text = nullptr;
    const sl_status status = sl_run_sa(inst, sa_rounds, &text);
    sl_instance_free(inst);
    if (status != SL_OK) return emit_status(status);
    const int code = emit_text(text, out_path);
    sl_string_free(text);
    return code;
  }
  if (qptas->parsed() || compare->parsed()) {
    const QptasFlags& flags = qptas->parsed() ? qptas_flags : compare_flags;
    sl_instance* inst = nullptr;
    if (const int code = load_instance(in_path, &inst)) return code;
    const sl_qptas_options opt = flags.to_capi();
    char* text = nullptr;
    const sl_status status = qptas->parsed()
                                 ? sl_run_qptas(inst, &opt, &text)
                                 : sl_run_compare(inst, &opt, &text);
    sl_instance_free(inst);
    if (status != SL_OK) return emit_status(status);
    const int code = emit_text(text, out_path);
    sl_string_free(text);
    return code;
  }
  if (gap->parsed()) {
    char* text = nullptr;
    const sl_status status =
        sl_gap_search(gap_m, gap_n_max, gap_trials, gap_seed, gap_sa_rounds,
                      &text);
    if (status != SL_OK) return emit_status(status);
    const int code = emit_text(text, out_path);
    sl_string_free(text);
    return code;
  }
  std::cerr << "no subcommand\n";
  return 2;
}
