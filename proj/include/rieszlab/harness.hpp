#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rieszlab/common.hpp"
#include "rieszlab/conditions.hpp"
#include "rieszlab/grids.hpp"
#include "rieszlab/hardy.hpp"
#include "rieszlab/kernel.hpp"
#include "rieszlab/spaces.hpp"
#include "rieszlab/testfunc.hpp"
#include "rieszlab/weight.hpp"

namespace rieszlab {

// Config-driven experiment runner: assembles kernels, weights, shape
// functions, and the fixed test-function library, runs the boundedness
// verifications with their sufficiency checks prepended, and produces
// byte-deterministic reports.
//
// Experiment kinds:
//   spanne          local-to-local norm ratios through the potential
//   weak-type       p = 1 branch with the weak target norm
//   adams           global norms with the phi^{1/p} -> phi^{1/q} pairing
//   lemma-local     two-term local estimate swept over (f, r)
//   hardy           half-line tail-integral inequality against its best
//                   constant
//   conditions-only sufficiency checks without norm rows

struct ExperimentConfig {
  std::string kind;
  std::string preset_name = "custom";
  int dim = 1;
  double p = 2.0;
  double q = 4.0;

  std::optional<Kernel> kernel;
  std::optional<Weight> weight;
  std::optional<PhiFunction> phi1;  // source shape (spanne / weak-type)
  std::optional<PhiFunction> phi2;  // target shape (spanne / weak-type)
  std::optional<PhiFunction> phi;   // shared shape (adams)

  Point x0{0.0, 0.0, 0.0};
  std::vector<Point> centers;  // global-norm centers; defaults to {x0}

  LogGrid r_grid{0.05, 20.0, 17};
  LogGrid t_grid = default_halfline_grid();

  // Ids from the fixed library: zero, indicator-half, indicator-unit,
  // indicator-double, gaussian, bump, outer-tail.
  std::vector<std::string> functions;

  double tolerance = 1e-8;
  std::uint64_t seed = 1;
  int hedberg_samples = 6;
  int parallelism = 0;  // 0 = hardware concurrency

  // Half-line data for the hardy kind.
  std::optional<HalfLineFunction> hw1;
  std::optional<HalfLineFunction> hw2;
  std::optional<HalfLineFunction> hw;
  std::vector<std::pair<std::string, HalfLineFunction>> g_family;

  std::string out_path;           // optional default output target
  std::string out_format = "json";
};

// Strict schema-version-1 parser: unknown keys, malformed values, and
// inconsistent exponents raise ConfigError. A "preset" key resolves the
// named preset first; the remaining keys override its fields.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

std::vector<std::string> preset_names();
ExperimentConfig preset_config(const std::string& name);

// One test function library entry; throws ConfigError for unknown ids.
TestFunction library_function(const std::string& id, int dim);

struct FunctionRow {
  std::string function_id;
  double source_norm = 0.0;
  double target_norm = 0.0;
  double ratio = 0.0;
  bool ratio_defined = false;  // false when the source norm vanishes
  double refined_ratio = 0.0;
  bool stable = false;  // both norms stable under grid doubling
  std::string error;    // captured per-row failure; empty on success
};

struct HedbergSample {
  std::string function_id;
  double offset = 0.0;  // |x - x0| of the sampled point
  double value = 0.0;   // I_rho f (x)
  double bound = 0.0;   // Mf(x)^{p/q} * ||f||^{1 - p/q}
  double ratio = 0.0;
};

// Deterministic workload counters stand in for wall-clock runtime stats:
// timing would break the byte-identical report contract.
struct WorkloadStats {
  int rows = 0;
  int conditions = 0;
  int hedberg_samples = 0;
  int r_grid_points = 0;
};

struct BoundednessReport {
  int schema_version = 1;
  std::string kind;
  std::string preset;
  // Target norms are evaluated on B(x0, r) against the target shape at the
  // same r; the factor-of-two radius slack some estimates carry is absorbed
  // into the empirical constant.
  std::string radius_convention = "inner-r";
  std::vector<std::pair<std::string, std::string>> parameters;  // echo

  std::vector<ConditionReport> conditions;
  std::vector<FunctionRow> rows;

  double sup_ratio = 0.0;
  bool sup_defined = false;
  double refined_sup_ratio = 0.0;
  bool sup_stable = false;

  bool hedberg_present = false;
  double hedberg_constant = 0.0;
  std::vector<HedbergSample> hedberg;

  // bounded-evidence | conditions-fail | vacuous | inconclusive |
  // conditions-pass (conditions-only kind)
  std::string verdict;
  WorkloadStats workload;
};

BoundednessReport run_spanne(const ExperimentConfig& cfg);
BoundednessReport run_spanne_weak(const ExperimentConfig& cfg);
BoundednessReport run_adams(const ExperimentConfig& cfg);
BoundednessReport run_lemma_local(const ExperimentConfig& cfg);
BoundednessReport run_hardy(const ExperimentConfig& cfg);
BoundednessReport run_conditions_only(const ExperimentConfig& cfg);

// Dispatch on cfg.kind.
BoundednessReport run_experiment(const ExperimentConfig& cfg);

}  // namespace rieszlab
