#pragma once

#include <cstdint>
#include <string>

#include "io/json_io.hpp"

namespace sproc::cli {

/// Everything that influences a run. Embedded verbatim in every report.
struct RunConfig {
  double tol_psd = kEpsPsd;
  double tol_sub = 1e-6;
  double tol_boundary = 1e-6;
  int ascent_iters = 500;
  int restarts = 5;
  int probes = 20;
  int substitution_samples = 10000;
  bool exact_only = false;
  std::uint64_t seed = 0;
  /// "flag", "env" or "input-hash".
  std::string seed_source;
  std::string out;

  /// Throws InputError on a non-positive tolerance or count.
  void validate() const;
  ProcedureConfig procedure() const;
  io::Json to_json() const;
};

/// --seed wins, then SPROC_SEED, then the FNV-1a hash of the input text.
void resolve_seed(RunConfig& cfg, bool seed_given, std::string_view input_text);

}  // namespace sproc::cli
