// sproc: command-line front end for the robust S-procedure checkers.
//
// Exit codes: 0 definite result, 2 when the report contains UNKNOWN anywhere,
// 1 on input errors (including malformed JSON).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/bundled.hpp"
#include "cli/run_config.hpp"
#include "io/json_io.hpp"
#include "sproc/error.hpp"

#ifndef SPROC_VERSION
#define SPROC_VERSION "unknown"
#endif

namespace sproc::cli {
namespace {

using io::Json;

struct Input {
  std::string text;
  Json json;
};

Input load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  Input out{ss.str(), {}};
  out.json = io::parse(out.text, path);
  return out;
}

RVec parse_list(const std::string& text, const std::string& flag) {
  RVec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_rational(item));
    } catch (const InputError& e) {
      throw InputError(flag + ": " + e.what());
    }
  }
  if (out.empty()) throw InputError(flag + ": empty list");
  return out;
}

struct App {
  RunConfig cfg;
  bool seed_given = false;
  std::string instance_path;
  std::string rhs_path;
  std::string theorem = "t2_1";
  // influence
  std::string center;
  std::string claim_t0, claim_rhs, claim_quadratic;
  bool keep_endpoints = false;
  std::vector<std::string> points;
  std::string lo, hi, res, csv_path, pgm_path;

  Json report(const std::string& command, const Input& input, Json result) const {
    return {{"tool", "sproc"},
            {"version", SPROC_VERSION},
            {"command", command},
            {"input_fnv1a", io::fnv1a(input.text)},
            {"config", cfg.to_json()},
            {"result", std::move(result)}};
  }

  std::optional<RhsFunction> rhs() const {
    if (rhs_path.empty()) return std::nullopt;
    return io::rhs_from(load(rhs_path).json);
  }

  RhsFunction required_rhs(const std::string& command) const {
    auto h = rhs();
    if (!h) throw InputError(command + " needs --rhs FILE");
    return *h;
  }

  // Loads the instance, fixes the seed and applies --tol-psd.
  std::pair<Input, RobustInstance> prepare(const std::string& path) {
    Input in = load(path);
    RobustInstance inst = io::instance_from(in.json);
    resolve_seed(cfg, seed_given, in.text);
    cfg.validate();
    set_psd_tolerance(cfg.tol_psd);
    return {std::move(in), std::move(inst)};
  }

  Json run(const std::string& command) {
    if (command == "influence-reduce" || command == "influence-raster") return run_influence(command);
    auto [in, inst] = prepare(instance_path);
    const ProcedureConfig pc = cfg.procedure();
    Json result;
    if (command == "check-a") {
      result = io::to_json(check_A(inst, pc));
    } else if (command == "certify-b") {
      BResult b = certify_B(inst, pc);
      result = io::to_json(b);
      if (b.certificate && !b.certificate->exact) {
        const double m = substitution_margin(inst, *b.certificate, pc.substitution_samples, pc.ascent.seed);
        result["substitution_margin"] = io::decimal(m);
        result["substitution_ok"] = m >= -pc.substitution_tol;
      }
    } else if (command == "check-ah") {
      result = io::to_json(check_A_h(inst, required_rhs(command), pc));
    } else if (command == "certify-bh") {
      result = io::to_json(certify_B_h(inst, required_rhs(command), pc));
    } else if (command == "hypotheses") {
      result = io::to_json(check_hypotheses(inst, rhs(), pc));
    } else if (command == "validate") {
      result = io::to_json(validate_equivalence(inst, parse_theorem(theorem), rhs(), pc));
    }
    return report(command, in, std::move(result));
  }

  Json run_influence(const std::string& command) {
    Input in = load(instance_path);
    StarField field = io::starfield_from(in.json);
    resolve_seed(cfg, seed_given, in.text);
    cfg.validate();
    set_psd_tolerance(cfg.tol_psd);
    if (center.empty()) throw InputError(command + " needs --center ID");
    InfluenceSystem sys = worst_case_reduce(field, center);
    Json result = {{"system", io::to_json(sys)}};
    result["note"] = "forms are evaluated at star positions too; such points are flagged";

    if (command == "influence-reduce") {
      Json pts = Json::array();
      for (const auto& p : points) {
        RVec x = parse_list(p, "--point");
        Json e = {{"point", io::to_json(x)}, {"member", robust_member(x, sys)}};
        if (auto s = star_at(x, field)) e["at_star"] = *s;
        pts.push_back(std::move(e));
      }
      if (!points.empty()) result["points"] = pts;
      const int claims = !claim_t0.empty() + !claim_rhs.empty() + !claim_quadratic.empty();
      if (claims > 1) throw InputError("give at most one of --claim-t0, --claim-rhs, --claim-quadratic");
      if (claims == 1) {
        InfluenceClaim claim;
        if (!claim_t0.empty()) claim.t0 = claim_t0;
        if (!claim_rhs.empty()) claim.rhs = io::rhs_from(load(claim_rhs).json);
        if (!claim_quadratic.empty()) claim.quadratic = io::quadratic_from(load(claim_quadratic).json, "claim");
        InfluenceInstance ii = to_robust_instance(sys, claim, keep_endpoints ? &field : nullptr);
        result["mapping"] = ii.mapping;
        result["instance"] = io::to_json(ii.instance);
        result["A"] = io::to_json(check_A(ii.instance, cfg.procedure()));
      }
      return report(command, in, std::move(result));
    }

    RasterBox box;
    box.lo = lo.empty() ? RVec(field.dim, Rational(-5)) : parse_list(lo, "--lo");
    box.hi = hi.empty() ? RVec(field.dim, Rational(5)) : parse_list(hi, "--hi");
    if (res.empty()) {
      box.resolution.assign(field.dim, 100);
    } else {
      for (const auto& r : parse_list(res, "--res")) {
        if (r.get_den() != 1 || !r.get_num().fits_sint_p()) throw InputError("--res: expected integers");
        box.resolution.push_back(static_cast<int>(r.get_num().get_si()));
      }
    }
    Raster r = region_raster(sys, box);
    std::size_t members = 0;
    for (auto c : r.cells) members += c;
    result["box"] = {{"lo", io::to_json(box.lo)}, {"hi", io::to_json(box.hi)}, {"resolution", box.resolution}};
    result["members"] = members;
    result["cells"] = r.cells.size();
    // star positions that fall exactly on a grid point
    Json flagged = Json::array();
    for (const auto& s : field.stars) {
      bool on_grid = true;
      for (std::size_t k = 0; k < field.dim; ++k) {
        const Rational t = (s.pos[k] - box.lo[k]) * (box.resolution[k] - 1) / (box.hi[k] - box.lo[k]);
        on_grid = on_grid && t.get_den() == 1 && sgn(t) >= 0 && t <= box.resolution[k] - 1;
      }
      if (on_grid) flagged.push_back(s.id);
    }
    result["stars_on_grid"] = flagged;
    if (!csv_path.empty()) io::write_file(csv_path, raster_csv(r));
    if (!pgm_path.empty()) io::write_file(pgm_path, raster_pgm(r));
    result["csv"] = csv_path;
    result["pgm"] = pgm_path;
    return report(command, in, std::move(result));
  }
};

struct Check {
  std::string name;
  bool pass;
};

// Runs the bundled regression instances with default settings.
Json selftest(std::vector<Check>& checks) {
  auto inst = [](const char* name) { return io::instance_from(io::parse(bundled(name), name)); };
  ProcedureConfig pc;
  auto tr = inst("trust_region.json");
  checks.push_back({"trust region: check-a holds", check_A(tr, pc).verdict == Verdict::Holds});
  checks.push_back({"trust region: certify-b finds lambda = 1", [&] {
                      auto b = certify_B(tr, pc);
                      return b.certificate && std::abs(to_double(b.certificate->lambda[0]) - 1.0) < 1e-6;
                    }()});
  auto nc = inst("negative_const.json");
  checks.push_back({"negative constant: check-a violated", check_A(nc, pc).verdict == Verdict::Violated});
  checks.push_back({"negative constant: certify-b NONE", !certify_B(nc, pc).certificate});
  auto ab = inst("abs_perturbed.json");
  checks.push_back({"polyhedral |x|: exact certificate", [&] {
                      auto b = certify_B(ab, pc);
                      return b.certificate && b.certificate->exact && b.certificate->lambda == RVec{Rational(-1)};
                    }()});
  auto rn = inst("regression_nonconvex.json");
  checks.push_back({"nonconvex regression: check-a holds", check_A(rn, pc).verdict == Verdict::Holds});
  checks.push_back({"nonconvex regression: certify-b NONE", !certify_B(rn, pc).certificate});
  checks.push_back({"nonconvex regression: T2_1 agrees with an invalid procedure", [&] {
                      auto v = validate_equivalence(rn, Theorem::T2_1, std::nullopt, pc);
                      return v.agreement == Agreement::Agree && v.sides.size() == 4 && v.sides[2].value == Tri::False &&
                             v.sides[3].value == Tri::False;
                    }()});
  auto field = io::starfield_from(io::parse(bundled("example_field.json"), "example_field.json"));
  checks.push_back({"influence: worked example form", [&] {
                      auto sys = worst_case_reduce(field, "s");
                      QuadraticFn want({{Rational(3), Rational(0)}, {Rational(0), Rational(3)}},
                                       {Rational(-16), Rational(0)}, Rational(16));
                      return sys.constraints.size() == 1 && sys.constraints[0].q == want;
                    }()});
  Json out = Json::array();
  for (const auto& c : checks) out.push_back({{"check", c.name}, {"pass", c.pass}});
  return out;
}

int main_impl(int argc, char** argv) {
  CLI::App cli{"Robust S-procedure verification laboratory"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", SPROC_VERSION);
  App app;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol-psd", app.cfg.tol_psd, "PSD tolerance on smallest eigenvalues");
    sub->add_option("--tol-sub", app.cfg.tol_sub, "accepted substitution margin of a certificate");
    sub->add_option("--tol-boundary", app.cfg.tol_boundary, "band reported UNKNOWN around sampled boundaries");
    sub->add_option("--seed", app.cfg.seed, "random seed (default: SPROC_SEED, then a hash of the input)")
        ->each([&](const std::string&) { app.seed_given = true; });
    sub->add_option("--ascent-iters", app.cfg.ascent_iters, "multiplier ascent iterations per restart");
    sub->add_option("--restarts", app.cfg.restarts, "multiplier ascent restarts");
    sub->add_option("--probes", app.cfg.probes, "random probe points for h*");
    sub->add_option("--sub-samples", app.cfg.substitution_samples, "samples for the substitution check");
    sub->add_flag("--exact-only", app.cfg.exact_only, "skip heuristic paths (quadratic results become UNKNOWN)");
    sub->add_option("--out", app.cfg.out, "write the report here instead of stdout");
  };
  std::vector<CLI::App*> subs;
  auto instance_cmd = [&](const char* name, const char* help) {
    CLI::App* sub = cli.add_subcommand(name, help);
    sub->add_option("instance", app.instance_path, "instance JSON")->required();
    common(sub);
    subs.push_back(sub);
    return sub;
  };
  instance_cmd("check-a", "decide (A): sup_u F_u(x, 0) >= 0 for all x");
  instance_cmd("certify-b", "search a certificate (u, lambda) for (B)");
  instance_cmd("check-ah", "decide (A_h) for the h in --rhs")
      ->add_option("--rhs", app.rhs_path, "RHS function JSON")->required();
  instance_cmd("certify-bh", "certify (B_h) on the probe set of --rhs")
      ->add_option("--rhs", app.rhs_path, "RHS function JSON")->required();
  instance_cmd("hypotheses", "evaluate H1-H6")->add_option("--rhs", app.rhs_path, "RHS function JSON");
  CLI::App* val = instance_cmd("validate", "cross-check one equivalence theorem");
  val->add_option("--theorem", app.theorem, "t2_1, c2_1, c2_2, t3_1, c3_1, t4_1 or c4_1")->required();
  val->add_option("--rhs", app.rhs_path, "RHS function JSON (t4_1, c4_1)");

  CLI::App* red = instance_cmd("influence-reduce", "worst-case influence system of a star");
  red->add_option("--center", app.center, "star id")->required();
  red->add_option("--claim-t0", app.claim_t0, "ask whether the constraint of this rival is redundant");
  red->add_option("--claim-rhs", app.claim_rhs, "claim max_i <a_i, x> + b_i >= 0 on the region (RHS JSON)");
  red->add_option("--claim-quadratic", app.claim_quadratic, "claim f(x) >= 0 on the region (quadratic JSON)");
  red->add_flag("--keep-endpoints", app.keep_endpoints, "one scenario per endpoint combination");
  red->add_option("--point", app.points, "membership query x1,x2[,x3]");
  CLI::App* ras = instance_cmd("influence-raster", "membership grid of the robust region");
  ras->add_option("--center", app.center, "star id")->required();
  ras->add_option("--lo", app.lo, "lower corner, comma separated (default -5)");
  ras->add_option("--hi", app.hi, "upper corner, comma separated (default 5)");
  ras->add_option("--res", app.res, "points per axis, comma separated (default 100)");
  ras->add_option("--csv", app.csv_path, "write the grid as CSV");
  ras->add_option("--pgm", app.pgm_path, "write the grid as plain PGM (2-D only)");

  CLI::App* self = cli.add_subcommand("selftest", "run the bundled regression instances");
  std::string self_out;
  self->add_option("--out", self_out, "write the report here");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (self->parsed()) {
    std::vector<Check> checks;
    Json result = selftest(checks);
    bool ok = true;
    for (const auto& c : checks) {
      std::printf("%s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str());
      ok = ok && c.pass;
    }
    if (!self_out.empty()) {
      io::write_file(self_out, io::dump({{"tool", "sproc"}, {"version", SPROC_VERSION}, {"command", "selftest"},
                                         {"result", result}}));
    }
    return ok ? 0 : 1;
  }

  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    Json rep = app.run(sub->get_name());
    const std::string text = io::dump(rep);
    if (app.cfg.out.empty()) {
      std::cout << text;
    } else {
      io::write_file(app.cfg.out, text);
    }
    return io::contains_unknown(rep) ? 2 : 0;
  }
  return 1;
}

}  // namespace
}  // namespace sproc::cli

int main(int argc, char** argv) {
  try {
    return sproc::cli::main_impl(argc, argv);
  } catch (const sproc::InputError& e) {
    std::fprintf(stderr, "sproc: input error: %s\n", e.what());
    return 1;
  } catch (const sproc::ArithmeticError& e) {
    std::fprintf(stderr, "sproc: arithmetic error: %s\n", e.what());
    return 1;
  }
}
