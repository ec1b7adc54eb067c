#include "cli/run_config.hpp"

#include <cstdlib>

#include "sproc/error.hpp"

namespace sproc::cli {

void RunConfig::validate() const {
  if (!(tol_psd > 0) || !(tol_sub > 0) || !(tol_boundary > 0)) throw InputError("tolerances must be positive");
  if (ascent_iters <= 0 || restarts <= 0) throw InputError("--ascent-iters and --restarts must be positive");
  if (probes < 0) throw InputError("--probes must be non-negative");
  if (substitution_samples <= 0) throw InputError("substitution samples must be positive");
}

ProcedureConfig RunConfig::procedure() const {
  ProcedureConfig p;
  p.ascent.iterations = ascent_iters;
  p.ascent.restarts = restarts;
  p.ascent.seed = seed;
  p.primal.seed = seed;
  p.sampling.seed = seed;
  p.sampling.boundary = tol_boundary;
  p.probes = probes;
  p.probe_seed = seed;
  p.substitution_tol = tol_sub;
  p.substitution_samples = substitution_samples;
  p.exact_only = exact_only;
  return p;
}

io::Json RunConfig::to_json() const {
  return {{"tol_psd", tol_psd},
          {"tol_sub", tol_sub},
          {"tol_boundary", tol_boundary},
          {"ascent_iters", ascent_iters},
          {"restarts", restarts},
          {"probes", probes},
          {"substitution_samples", substitution_samples},
          {"exact_only", exact_only},
          {"seed", seed},
          {"seed_source", seed_source},
          {"out", out}};
}

void resolve_seed(RunConfig& cfg, bool seed_given, std::string_view input_text) {
  if (seed_given) {
    cfg.seed_source = "flag";
    return;
  }
  if (const char* env = std::getenv("SPROC_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw InputError("SPROC_SEED must be an unsigned integer");
    cfg.seed = v;
    cfg.seed_source = "env";
    return;
  }
  cfg.seed = io::fnv1a(input_text);
  cfg.seed_source = "input-hash";
}

}  // namespace sproc::cli
