#include "schedlift/capi.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <utility>

#include "schedlift/harness.hpp"
#include "schedlift/instance.hpp"
#include "schedlift/laminar.hpp"
#include "schedlift/oracle.hpp"
#include "schedlift/qptas.hpp"
#include "schedlift/rational.hpp"
#include "schedlift/sherali_adams.hpp"
#include "schedlift/top_matching.hpp"

struct sl_instance {
  schedlift::Instance inst;
};

namespace {

thread_local std::string g_last_error;

sl_status fail(sl_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

sl_status deliver(const std::string& text, char** out) {
  char* copy = static_cast<char*>(std::malloc(text.size() + 1));
  if (!copy) return fail(SL_ERR_INTERNAL, "out of memory");
  std::memcpy(copy, text.c_str(), text.size() + 1);
  *out = copy;
  return SL_OK;
}

// SaSizeError must be tested before its base SaError.
template <typename Fn>
sl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const schedlift::InstanceError& e) {
    return fail(SL_ERR_PARSE, e.what());
  } catch (const schedlift::SaSizeError& e) {
    return fail(SL_ERR_LIMIT, e.what());
  } catch (const schedlift::OracleError& e) {
    return fail(SL_ERR_LIMIT, e.what());
  } catch (const schedlift::HarnessError& e) {
    return fail(SL_ERR_ARGUMENT, e.what());
  } catch (const schedlift::QptasError& e) {
    return fail(SL_ERR_DOMAIN, e.what());
  } catch (const schedlift::SaError& e) {
    return fail(SL_ERR_DOMAIN, e.what());
  } catch (const schedlift::LaminarError& e) {
    return fail(SL_ERR_DOMAIN, e.what());
  } catch (const schedlift::TopMatchError& e) {
    return fail(SL_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(SL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SL_ERR_INTERNAL, "unknown failure");
  }
}

sl_status convert_options(const sl_qptas_options* in,
                          schedlift::QptasOptions& out) {
  out = schedlift::QptasOptions{};
  if (!in) return SL_OK;
  if (in->eps) {
    const auto eps = schedlift::rational_from_string(in->eps);
    if (!eps) return fail(SL_ERR_ARGUMENT, "eps is not a rational");
    out.eps = *eps;
  }
  if (in->delta) {
    const auto delta = schedlift::rational_from_string(in->delta);
    if (!delta) return fail(SL_ERR_ARGUMENT, "delta is not a rational");
    out.delta = *delta;
  }
  out.mode = in->paper_mode ? schedlift::QptasParams::Mode::Paper
                            : schedlift::QptasParams::Mode::Desk;
  out.k = in->k;
  out.C = in->C;
  out.R = in->R;
  out.base_threshold = in->base_threshold;
  out.budget = in->budget;
  out.T = in->T;
  out.seed = in->seed;
  out.atoms = in->atoms;
  return SL_OK;
}

}  // namespace

extern "C" {

int32_t sl_abi_version(void) { return 1; }

const char* sl_last_error(void) { return g_last_error.c_str(); }

sl_status sl_instance_parse(const char* text, sl_instance** out) {
  if (!text || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new sl_instance{schedlift::parse_instance_auto(text)};
    *out = handle;
    return SL_OK;
  });
}

sl_status sl_instance_generate(const char* kind, int32_t n, int32_t m,
                               const char* param, uint64_t seed,
                               sl_instance** out) {
  if (!kind || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  if (n < 1 || m < 1)
    return fail(SL_ERR_ARGUMENT, "job and machine counts must be at least 1");
  return guarded([&]() -> sl_status {
    const std::string name(kind);
    schedlift::Instance inst = [&] {
      if (name == "gnp") {
        const auto p = param ? schedlift::rational_from_string(param)
                             : std::optional<schedlift::Rational>(
                                   schedlift::Rational(1, 2));
        if (!p || *p < 0 || *p > 1)
          throw schedlift::HarnessError(
              "gnp needs an edge probability in [0, 1]");
        return schedlift::generate_gnp(n, m, *p, seed);
      }
      if (name == "chain") return schedlift::generate_chain(n, m);
      if (name == "layered") {
        int layers = 2;
        if (param) {
          char* end = nullptr;
          layers = static_cast<int>(std::strtol(param, &end, 10));
          if (!end || *end != '\0')
            throw schedlift::HarnessError("layered needs a layer count");
        }
        return schedlift::generate_layered(n, m, layers);
      }
      throw schedlift::HarnessError("unknown generator kind '" + name + "'");
    }();
    *out = new sl_instance{std::move(inst)};
    return SL_OK;
  });
}

void sl_instance_free(sl_instance* inst) { delete inst; }

sl_status sl_instance_serialize(const sl_instance* inst, int32_t as_json,
                                char** out) {
  if (!inst || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    return deliver(as_json ? schedlift::serialize_instance_json(inst->inst)
                           : schedlift::serialize_instance(inst->inst),
                   out);
  });
}

int32_t sl_instance_jobs(const sl_instance* inst) {
  return inst ? inst->inst.jobs() : 0;
}

int32_t sl_instance_machines(const sl_instance* inst) {
  return inst ? inst->inst.machines() : 0;
}

sl_status sl_run_exact(const sl_instance* inst, char** out) {
  if (!inst || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  return guarded([&] { return deliver(schedlift::exact_json(inst->inst), out); });
}

sl_status sl_run_list(const sl_instance* inst, char** out) {
  if (!inst || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  return guarded([&] { return deliver(schedlift::list_json(inst->inst), out); });
}

sl_status sl_run_lp(const sl_instance* inst, char** out) {
  if (!inst || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  return guarded([&] { return deliver(schedlift::lp_json(inst->inst), out); });
}

sl_status sl_run_sa(const sl_instance* inst, int32_t rounds, char** out) {
  if (!inst || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  return guarded(
      [&] { return deliver(schedlift::sa_json(inst->inst, rounds), out); });
}

void sl_qptas_options_init(sl_qptas_options* opt) {
  if (!opt) return;
  const schedlift::QptasOptions defaults;
  opt->eps = nullptr;
  opt->delta = nullptr;
  opt->paper_mode = 0;
  opt->k = defaults.k;
  opt->C = defaults.C;
  opt->R = defaults.R;
  opt->base_threshold = defaults.base_threshold;
  opt->budget = defaults.budget;
  opt->T = defaults.T;
  opt->seed = defaults.seed;
  opt->atoms = defaults.atoms;
}

sl_status sl_run_qptas(const sl_instance* inst, const sl_qptas_options* opt,
                       char** out) {
  if (!inst || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  schedlift::QptasOptions options;
  const sl_status converted = convert_options(opt, options);
  if (converted != SL_OK) return converted;
  return guarded([&] {
    return deliver(schedlift::qptas_json(inst->inst, options), out);
  });
}

sl_status sl_run_compare(const sl_instance* inst, const sl_qptas_options* opt,
                         char** out) {
  if (!inst || !out) return fail(SL_ERR_ARGUMENT, "null argument");
  schedlift::QptasOptions options;
  const sl_status converted = convert_options(opt, options);
  if (converted != SL_OK) return converted;
  return guarded([&] {
    return deliver(schedlift::compare_json(inst->inst, options), out);
  });
}

sl_status sl_gap_search(int32_t m, int32_t n_max, int32_t trials,
                        uint64_t seed, int32_t sa_rounds, char** out) {
  if (!out) return fail(SL_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const schedlift::GapReport report =
        schedlift::gap_search(m, n_max, trials, seed, sa_rounds);
    return deliver(schedlift::gap_search_json(report), out);
  });
}

void sl_string_free(char* text) { std::free(text); }

}  // extern "C"
