// Command-line driver: kernel and weight diagnostics, sufficiency-condition
// checks, Morrey norms, potential tables, and config-driven boundedness
// experiments.
//
// Exit codes:
//   0  ran; verdict positive or not applicable
//   1  ran; a checked condition failed
//   2  configuration error (bad flags, malformed or inconsistent config)
//   3  numerical failure (divergence where the preconditions need finiteness)

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rieszlab/common.hpp"
#include "rieszlab/conditions.hpp"
#include "rieszlab/grids.hpp"
#include "rieszlab/harness.hpp"
#include "rieszlab/kernel.hpp"
#include "rieszlab/operators.hpp"
#include "rieszlab/report.hpp"
#include "rieszlab/spaces.hpp"
#include "rieszlab/testfunc.hpp"
#include "rieszlab/weight.hpp"

namespace rieszlab {
namespace {

constexpr int kOk = 0;
constexpr int kConditionFailed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericFailure = 3;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::string format;
  int refine = 1;
  std::int64_t seed = -1;  // -1 keeps the config value
};

void add_common_flags(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path,
                  "JSON experiment config (schema version 1)");
  cmd->add_option("--preset", opts->preset,
                  "Built-in preset name instead of a config file");
  cmd->add_option("--out", opts->out_path,
                  "Write the report here instead of stdout");
  cmd->add_option("--format", opts->format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--refine", opts->refine,
                  "Refine the evaluation grids by this factor")
      ->check(CLI::Range(1, 64));
  cmd->add_option("--seed", opts->seed, "Override the sampling seed")
      ->check(CLI::NonNegativeNumber);
}

// Loads --config or --preset into a validated config and applies the common
// overrides. The check-* commands accept kind-less config files by falling
// back to conditions-only; everything else keeps the strict schema.
ExperimentConfig resolve_config(const CommonOpts& opts,
                                const std::string& fallback_kind) {
  if (!opts.config_path.empty() && !opts.preset.empty()) {
    throw ConfigError("--config and --preset are mutually exclusive");
  }
  ExperimentConfig cfg;
  if (!opts.preset.empty()) {
    cfg = preset_config(opts.preset);
  } else if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) {
      throw ConfigError("cannot open config file: " + opts.config_path);
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config " + opts.config_path + ": " + e.what());
    }
    if (j.is_object() && !fallback_kind.empty() && !j.contains("kind") &&
        !j.contains("preset")) {
      j["kind"] = fallback_kind;
    }
    cfg = parse_config(j);
  } else {
    throw ConfigError("one of --config or --preset is required");
  }
  if (opts.refine > 1) {
    cfg.r_grid = cfg.r_grid.refined(opts.refine);
    cfg.t_grid = cfg.t_grid.refined(opts.refine);
  }
  if (opts.seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(opts.seed);
  }
  if (!opts.out_path.empty()) {
    cfg.out_path = opts.out_path;
  }
  if (!opts.format.empty()) {
    cfg.out_format = opts.format;
  }
  return cfg;
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

void emit_json(const nlohmann::ordered_json& j, const std::string& path) {
  emit_text(j.dump(2) + "\n", path);
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string conditions_csv(const std::vector<ConditionReport>& conds) {
  std::string csv = "id,holds,divergent,value,stable\n";
  for (const ConditionReport& c : conds) {
    csv += c.id + "," + fmt_bool(c.holds) + "," +
           fmt_bool(c.empirical_C.divergent) + "," +
           (c.empirical_C.divergent ? std::string() : fmt_num(c.empirical_C.value)) +
           "," + fmt_bool(c.stable) + "\n";
  }
  return csv;
}

int exit_for_verdict(const std::string& verdict) {
  if (verdict == "bounded-evidence" || verdict == "conditions-pass" ||
      verdict == "vacuous") {
    return kOk;
  }
  return kConditionFailed;  // conditions-fail or inconclusive
}

int cmd_check_kernel(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts, "conditions-only");
  if (!cfg.kernel) {
    throw ConfigError("check-kernel: the config does not define a kernel");
  }
  LogGrid grid = default_kernel_grid();
  if (opts.refine > 1) {
    grid = grid.refined(opts.refine);
  }
  const TailResult tail = tail_integral(*cfg.kernel, cfg.tolerance);
  const GrowthReport growth = check_growth(*cfg.kernel, GrowthSpec{}, grid);
  const DoublingReport doubling = check_doubling(*cfg.kernel, 16.0, grid);
  const bool ok = !tail.divergent && growth.holds && doubling.holds;

  if (cfg.out_format == "csv") {
    std::string csv = "check,holds,value\n";
    csv += "tail-integral," + fmt_bool(!tail.divergent) + "," +
           (tail.divergent ? std::string() : fmt_num(tail.value)) + "\n";
    csv += "kernel-growth," + fmt_bool(growth.holds) + "," +
           fmt_num(growth.empirical_c) + "\n";
    csv += "kernel-doubling," + fmt_bool(doubling.holds) + "," +
           fmt_num(doubling.empirical_c) + "\n";
    emit_text(csv, cfg.out_path);
  } else {
    nlohmann::ordered_json j;
    j["kernel"] = cfg.kernel->describe();
    nlohmann::ordered_json tj;
    tj["divergent"] = tail.divergent;
    tj["value"] = tail.divergent ? 0.0 : tail.value;
    tj["est_error"] = tail.err;
    tj["blocks"] = tail.blocks;
    j["tail_integral"] = tj;
    j["growth"] = to_json(growth);
    j["doubling"] = to_json(doubling);
    j["ok"] = ok;
    emit_json(j, cfg.out_path);
  }
  return ok ? kOk : kConditionFailed;
}

int cmd_check_weight(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts, "conditions-only");
  if (!cfg.weight) {
    throw ConfigError("check-weight: the config does not define a weight");
  }
  BallGrid grid = default_ball_grid(cfg.dim);
  if (opts.refine > 1) {
    grid.radii = default_ball_radii().refined(opts.refine).points();
  }
  const ApqReport apq =
      apq_characteristic(*cfg.weight, cfg.p, cfg.q, grid, cfg.tolerance);
  const HolderReport lower =
      holder_lower_bound_check(*cfg.weight, cfg.p, cfg.q, grid, cfg.tolerance);
  const ReverseDoublingReport reverse = reverse_doubling_check(
      *cfg.weight, cfg.q, 2.0, 0.5, grid, cfg.tolerance);
  const bool ok = !apq.value.divergent && lower.holds && reverse.holds;

  if (cfg.out_format == "csv") {
    std::string csv = "check,holds,value\n";
    csv += "apq-characteristic," + fmt_bool(!apq.value.divergent) + "," +
           (apq.value.divergent ? std::string() : fmt_num(apq.value.value)) +
           "\n";
    csv += "apq-lower-bound," + fmt_bool(lower.holds) + "," +
           fmt_num(lower.min_value) + "\n";
    csv += "reverse-doubling," + fmt_bool(reverse.holds) + "," +
           fmt_num(reverse.worst_ratio) + "\n";
    emit_text(csv, cfg.out_path);
  } else {
    nlohmann::ordered_json j;
    j["weight"] = cfg.weight->describe();
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    j["apq"] = to_json(apq);
    j["lower_bound"] = to_json(lower);
    j["reverse_doubling"] = to_json(reverse);
    j["ok"] = ok;
    emit_json(j, cfg.out_path);
  }
  return ok ? kOk : kConditionFailed;
}

int cmd_check_conditions(const CommonOpts& opts) {
  ExperimentConfig cfg = resolve_config(opts, "conditions-only");
  cfg.kind = "conditions-only";
  const BoundednessReport rep = run_conditions_only(cfg);
  if (cfg.out_format == "csv") {
    emit_text(conditions_csv(rep.conditions), cfg.out_path);
  } else {
    emit_json(to_json(rep), cfg.out_path);
  }
  std::cerr << "verdict: " << rep.verdict << "\n";
  return rep.verdict == "conditions-pass" ? kOk : kConditionFailed;
}

int cmd_experiment(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts, "");
  const BoundednessReport rep = run_experiment(cfg);
  if (cfg.out_path.empty()) {
    emit_text(cfg.out_format == "csv" ? report_csv(rep)
                                      : to_json(rep).dump(2) + "\n",
              "");
  } else {
    emit_report(rep, cfg.out_format, cfg.out_path);
  }
  std::cerr << "verdict: " << rep.verdict << "\n";
  return exit_for_verdict(rep.verdict);
}

struct NormOpts {
  std::string function_id = "indicator-unit";
  std::string which = "strong";
};

int cmd_norm(const CommonOpts& opts, const NormOpts& nopts) {
  const ExperimentConfig cfg = resolve_config(opts, "");
  if (!cfg.weight) {
    throw ConfigError("norm: the config does not define a weight");
  }
  const TestFunction f = library_function(nopts.function_id, cfg.dim);

  // Source-space shape: phi1 with the w^p measure for the two-shape kinds,
  // phi^{1/p} with the plain w measure for the shared-shape kind.
  PhiFunction shape = PhiFunction::power(0.0);
  double weight_power = 1.0;
  if (cfg.phi1) {
    shape = *cfg.phi1;
    weight_power = cfg.p;
  } else if (cfg.phi) {
    shape = cfg.phi->pow(1.0 / cfg.p);
    weight_power = 1.0;
  } else {
    throw ConfigError("norm: the config defines neither phi1 nor phi");
  }

  NormResult res;
  if (nopts.which == "strong") {
    res = morrey_norm_local(make_view(f), cfg.p, shape, *cfg.weight,
                            weight_power, cfg.x0, cfg.r_grid, cfg.tolerance);
  } else if (nopts.which == "weak") {
    res = weak_morrey_norm_local(make_view(f), cfg.p, shape, *cfg.weight,
                                 weight_power, cfg.x0, cfg.r_grid);
  } else {
    const std::vector<Point> centers =
        cfg.centers.empty() ? std::vector<Point>{cfg.x0} : cfg.centers;
    res = morrey_norm_global(make_view(f), cfg.p, shape, *cfg.weight,
                             weight_power, centers, cfg.r_grid, cfg.tolerance);
  }

  if (cfg.out_format == "csv") {
    std::string csv = "function,norm,p,value,refined_value,stable\n";
    csv += nopts.function_id + "," + nopts.which + "," + fmt_num(cfg.p) + "," +
           fmt_num(res.value) + "," + fmt_num(res.refined_value) + "," +
           fmt_bool(res.stable) + "\n";
    emit_text(csv, cfg.out_path);
  } else {
    nlohmann::ordered_json j;
    j["function"] = nopts.function_id;
    j["norm"] = nopts.which;
    j["p"] = cfg.p;
    j["weight_power"] = weight_power;
    j["result"] = to_json(res);
    emit_json(j, cfg.out_path);
  }
  return kOk;
}

struct PotentialOpts {
  std::string function_id = "indicator-unit";
};

int cmd_potential(const CommonOpts& opts, const PotentialOpts& popts) {
  const ExperimentConfig cfg = resolve_config(opts, "");
  if (!cfg.kernel) {
    throw ConfigError("potential: the config does not define a kernel");
  }
  const TestFunction f = library_function(popts.function_id, cfg.dim);
  QuadratureSpec spec;
  spec.tolerance = std::min(cfg.tolerance, 1e-8);

  // Sample along the first axis at x0 and x0 +- r for every grid radius.
  const std::vector<double> radii = cfg.r_grid.points();
  std::vector<double> offsets;
  offsets.reserve(2 * radii.size() + 1);
  for (auto it = radii.rbegin(); it != radii.rend(); ++it) {
    offsets.push_back(-*it);
  }
  offsets.push_back(0.0);
  offsets.insert(offsets.end(), radii.begin(), radii.end());

  struct Sample {
    double x = 0.0;
    PotentialResult pr;
  };
  std::vector<Sample> samples;
  samples.reserve(offsets.size());
  for (double s : offsets) {
    Point x = cfg.x0;
    x[0] += s;
    samples.push_back({x[0], riesz_apply_ex(f, *cfg.kernel, x, spec)});
  }

  if (cfg.out_format == "csv") {
    std::string csv = "x,value,est_error\n";
    for (const Sample& s : samples) {
      csv += fmt_num(s.x) + "," + fmt_num(s.pr.value) + "," +
             fmt_num(s.pr.est_error) + "\n";
    }
    emit_text(csv, cfg.out_path);
  } else {
    nlohmann::ordered_json j;
    j["function"] = popts.function_id;
    j["kernel"] = cfg.kernel->describe();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const Sample& s : samples) {
      nlohmann::ordered_json row;
      row["x"] = s.x;
      row["value"] = s.pr.value;
      row["est_error"] = s.pr.est_error;
      rows.push_back(row);
    }
    j["samples"] = rows;
    emit_json(j, cfg.out_path);
  }
  return kOk;
}

int cmd_presets() {
  for (const std::string& name : preset_names()) {
    std::cout << name << "\n";
  }
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Generalized Riesz potentials on weighted local Morrey spaces: "
      "condition checks, norms, potential tables, and boundedness "
      "experiments."};
  app.require_subcommand(1);

  CommonOpts kernel_opts;
  CLI::App* sub_kernel = app.add_subcommand(
      "check-kernel",
      "Tail integrability, growth envelope, and doubling of the kernel");
  add_common_flags(sub_kernel, &kernel_opts);

  CommonOpts weight_opts;
  CLI::App* sub_weight = app.add_subcommand(
      "check-weight",
      "Muckenhoupt characteristic and doubling diagnostics of the weight");
  add_common_flags(sub_weight, &weight_opts);

  CommonOpts cond_opts;
  CLI::App* sub_cond = app.add_subcommand(
      "check-conditions",
      "Run every sufficiency check the config supports, without norm rows");
  add_common_flags(sub_cond, &cond_opts);

  CommonOpts norm_common;
  NormOpts norm_opts;
  CLI::App* sub_norm = app.add_subcommand(
      "norm",
      "Evaluate a library function's Morrey norm in the configured source "
      "space");
  add_common_flags(sub_norm, &norm_common);
  sub_norm->add_option("--function", norm_opts.function_id,
                       "Library function id")
      ->capture_default_str();
  sub_norm->add_option("--norm", norm_opts.which, "Norm flavour")
      ->check(CLI::IsMember({"strong", "weak", "global"}))
      ->capture_default_str();

  CommonOpts pot_common;
  PotentialOpts pot_opts;
  CLI::App* sub_pot = app.add_subcommand(
      "potential",
      "Tabulate the potential of a library function along the first axis");
  add_common_flags(sub_pot, &pot_common);
  sub_pot->add_option("--function", pot_opts.function_id,
                      "Library function id")
      ->capture_default_str();

  CommonOpts exp_opts;
  CLI::App* sub_exp = app.add_subcommand(
      "experiment", "Run a config-driven boundedness experiment");
  add_common_flags(sub_exp, &exp_opts);

  CLI::App* sub_presets =
      app.add_subcommand("presets", "List the built-in preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (app.got_subcommand(sub_kernel)) {
      return cmd_check_kernel(kernel_opts);
    }
    if (app.got_subcommand(sub_weight)) {
      return cmd_check_weight(weight_opts);
    }
    if (app.got_subcommand(sub_cond)) {
      return cmd_check_conditions(cond_opts);
    }
    if (app.got_subcommand(sub_norm)) {
      return cmd_norm(norm_common, norm_opts);
    }
    if (app.got_subcommand(sub_pot)) {
      return cmd_potential(pot_common, pot_opts);
    }
    if (app.got_subcommand(sub_exp)) {
      return cmd_experiment(exp_opts);
    }
    if (app.got_subcommand(sub_presets)) {
      return cmd_presets();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "numerical precondition violated: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kOk;
}

}  // namespace
}  // namespace rieszlab

int main(int argc, char** argv) { return rieszlab::run(argc, argv); }
