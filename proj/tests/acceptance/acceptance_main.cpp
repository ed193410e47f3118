// Acceptance gate: seven checks covering closed-form oracles, norm and
// Muckenhoupt sanity, the Hardy best constant, condition-verdict agreement
// with the analytic exponent signs, theorem-level boundedness evidence, and
// structural invariants. One [PASS]/[FAIL] line per criterion; tolerances
// are pinned next to each check. Exit 0 only when all seven pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rieszlab/common.hpp"
#include "rieszlab/conditions.hpp"
#include "rieszlab/grids.hpp"
#include "rieszlab/hardy.hpp"
#include "rieszlab/harness.hpp"
#include "rieszlab/kernel.hpp"
#include "rieszlab/operators.hpp"
#include "rieszlab/report.hpp"
#include "rieszlab/spaces.hpp"
#include "rieszlab/testfunc.hpp"
#include "rieszlab/weight.hpp"

namespace rieszlab {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

void note(Outcome* o, bool ok, const std::string& what) {
  if (!ok) {
    o->pass = false;
    if (!o->detail.empty()) {
      o->detail += "; ";
    }
    o->detail += what;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// 1. Closed-form values: I_{1/2} chi_{[-1,1]}(0) = 4 within 1e-6 relative;
//    integral_1^inf t^{1/2} t^{-2} dt = 2 within 1e-8; tilde-rho for
//    rho(t) = t at r = 3 in the plane = 3 within 1e-8. Each under 1 second.
Outcome criterion1() {
  Outcome o;

  const Kernel k_half = Kernel::power(1, 0.5);
  const TestFunction unit_ball =
      TestFunction::indicator_ball(Ball{Point{0.0, 0.0, 0.0}, 1.0, 1});

  auto t0 = Clock::now();
  const double pot = riesz_apply(unit_ball, k_half, Point{0.0, 0.0, 0.0});
  const double s_pot = seconds_since(t0);
  note(&o, rel_err(pot, 4.0) < 1e-6, "potential " + fmt(pot) + " != 4");
  note(&o, s_pot < 1.0, "potential took " + fmt(s_pot) + " s");

  t0 = Clock::now();
  const TailResult tail = tail_integral(k_half, 1e-10);
  const double s_tail = seconds_since(t0);
  note(&o, !tail.divergent && std::fabs(tail.value - 2.0) < 1e-8,
       "tail integral " + fmt(tail.value) + " != 2");
  note(&o, s_tail < 1.0, "tail took " + fmt(s_tail) + " s");

  const Kernel k_linear = Kernel::power(2, 1.0);
  t0 = Clock::now();
  const ExtReal trho = tilde_rho(k_linear, 3.0, 1e-10);
  const double s_trho = seconds_since(t0);
  note(&o, !trho.divergent && std::fabs(trho.value - 3.0) < 1e-8,
       "tilde-rho " + fmt(trho.value) + " != 3");
  note(&o, s_trho < 1.0, "tilde-rho took " + fmt(s_trho) + " s");
  return o;
}

// 2. Norm oracles: the unit indicator in the classical n=1, lambda=1/2, p=2
//    space has local Morrey norm 1 within 1e-3 on the default grid (which
//    contains r = 1), and its weak norm equals the strong one within 1e-3.
Outcome criterion2() {
  Outcome o;
  const TestFunction f =
      TestFunction::indicator_ball(Ball{Point{0.0, 0.0, 0.0}, 1.0, 1});
  const PhiFunction phi = PhiFunction::morrey_power(0.5, 1, 2.0);
  const Weight w = Weight::constant(1, 1.0);

  const NormResult strong =
      morrey_norm_local(make_view(f), 2.0, phi, w, 2.0, Point{0.0, 0.0, 0.0});
  note(&o, std::fabs(strong.value - 1.0) < 1e-3,
       "strong norm " + fmt(strong.value) + " != 1");

  const NormResult weak = weak_morrey_norm_local(make_view(f), 2.0, phi, w,
                                                 2.0, Point{0.0, 0.0, 0.0});
  note(&o, std::fabs(weak.value - strong.value) < 1e-3,
       "weak norm " + fmt(weak.value) + " != strong " + fmt(strong.value));
  return o;
}

// 3. Muckenhoupt sanity: the unit weight has characteristic 1 within 1e-6 on
//    every default grid (n = 1, 2, 3), and the Hoelder lower bound >= 1-1e-4
//    holds on 100% of the sampled admissible (weight, p, q) tuples.
Outcome criterion3() {
  Outcome o;
  for (int dim = 1; dim <= 3; ++dim) {
    const ApqReport rep = apq_characteristic(Weight::constant(dim, 1.0), 2.0,
                                             4.0, default_ball_grid(dim));
    note(&o,
         !rep.value.divergent && std::fabs(rep.value.value - 1.0) < 1e-6,
         "unit-weight characteristic in n=" + std::to_string(dim));
  }

  struct PQ {
    double p;
    double q;
  };
  const std::vector<PQ> exponents{
      {2.0, 4.0}, {1.5, 3.0}, {3.0, 6.0}, {2.0, 8.0 / 3.0}, {1.0, 4.0 / 3.0}};
  std::vector<Weight> weights;
  weights.push_back(Weight::constant(1, 2.0));
  weights.push_back(Weight::power(1, -0.05));
  weights.push_back(Weight::power(1, 0.1));
  weights.push_back(Weight::power(1, 0.2, Point{0.5, 0.0, 0.0}));
  weights.push_back(Weight::power_log(1, 0.1, 0.5));
  weights.push_back(Weight::power_log(1, 0.0, 1.0));
  weights.push_back(Weight::constant(2, 1.0));
  weights.push_back(Weight::power(2, 0.5));

  int tuples = 0;
  int held = 0;
  for (const Weight& w : weights) {
    for (const PQ& e : exponents) {
      const HolderReport rep =
          holder_lower_bound_check(w, e.p, e.q, default_ball_grid(w.dim()));
      ++tuples;
      if (rep.holds) {
        ++held;
      } else {
        note(&o, false,
             w.describe() + " p=" + fmt(e.p) + " q=" + fmt(e.q) +
                 " min=" + fmt(rep.min_value));
      }
    }
  }
  note(&o, held == tuples,
       "lower bound held on " + std::to_string(held) + "/" +
           std::to_string(tuples));
  return o;
}

// 4. Hardy best constant: B(w1=1, w2(t)=t, w(s)=s^{-2}) = 1 within 1e-6, and
//    every sampled non-decreasing g satisfies the companion inequality with
//    C = 1 + 1e-6 (divergent right sides hold vacuously).
Outcome criterion4() {
  Outcome o;
  const HalfLineFunction one = HalfLineFunction::constant(1.0);
  const HalfLineFunction linear = HalfLineFunction::power(1.0, 1.0);
  const HalfLineFunction inv_sq = HalfLineFunction::power(1.0, -2.0);

  const BestConstantReport bc = best_constant_B(one, linear, inv_sq);
  note(&o, !bc.value.divergent && std::fabs(bc.value.value - 1.0) < 1e-6,
       "best constant " + fmt(bc.value.value) + " != 1");

  std::vector<std::pair<std::string, HalfLineFunction>> gs;
  gs.emplace_back("g-constant", HalfLineFunction::constant(1.0));
  gs.emplace_back("g-quarter-power", HalfLineFunction::power(1.0, 0.25));
  gs.emplace_back("g-sqrt", HalfLineFunction::power(1.0, 0.5));
  gs.emplace_back("g-linear", HalfLineFunction::power(1.0, 1.0));
  gs.emplace_back("g-quadratic", HalfLineFunction::power(2.0, 2.0));
  gs.emplace_back("g-ramp", HalfLineFunction::table(
                                {{0.1, 0.0}, {1.0, 0.5}, {10.0, 2.0}}));
  gs.emplace_back("g-plateau", HalfLineFunction::table(
                                   {{0.01, 0.1}, {1.0, 1.0}, {5.0, 1.0}}));

  const double c_test = 1.0 + 1e-6;
  for (const auto& [id, g] : gs) {
    note(&o, g.non_decreasing(), id + " is not non-decreasing");
    const HardyInequalityReport rep =
        hardy_inequality_check(g, one, linear, inv_sq, c_test);
    note(&o, rep.holds, id + " violates the inequality at C = 1+1e-6");
  }
  return o;
}

// 5. Condition verdicts vs the analytic exponent signs: across >= 200 power
//    presets, the spanne-integral verdict matches the sign of
//    E_s = (lambda-n)/p + alpha and the adams-integral verdict matches the
//    sign of E_a = lambda - n + alpha in 100% of cases, in under 2 minutes.
//    Presets within 0.025 of the finite/divergent frontier are excluded as
//    boundary cases.
Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  const Weight w = Weight::constant(1, 1.0);
  const Point origin{0.0, 0.0, 0.0};
  const std::vector<double> alphas{0.125, 0.25, 0.375, 0.5, 0.625, 0.75};
  const std::vector<double> ps{1.0, 1.25, 1.5, 2.0, 3.0};
  const std::vector<double> lambdas{0.1, 0.25, 0.4, 0.6, 0.75, 0.9};

  int presets = 0;
  int matched = 0;
  for (double alpha : alphas) {
    const Kernel kernel = Kernel::power(1, alpha);
    for (double p : ps) {
      for (double lambda : lambdas) {
        const double e_s = (lambda - 1.0) / p + alpha;
        if (std::fabs(e_s) >= 0.025) {
          // Matched phi2 = r^{E_s} keeps the reported ratio flat whenever
          // the integral converges; any decaying phi2 works otherwise.
          const PhiFunction phi1 = PhiFunction::morrey_power(lambda, 1, p);
          const PhiFunction phi2 = PhiFunction::power(e_s < 0.0 ? e_s : -0.1);
          const ConditionReport rep = check_spanne_integral(
              phi1, phi2, kernel, w, p, p + 0.75, origin);
          ++presets;
          if (rep.holds == (e_s < 0.0)) {
            ++matched;
          } else {
            note(&o, false,
                 "spanne a=" + fmt(alpha) + " p=" + fmt(p) +
                     " l=" + fmt(lambda));
          }
        }

        const double e_a = lambda - 1.0 + alpha;
        if (std::fabs(e_a) >= 0.025) {
          // The balanced q = p(n-lambda)/(n-lambda-alpha) flattens the
          // finite case; any q > p serves the divergent one.
          const double q =
              e_a < 0.0 ? p * (1.0 - lambda) / (1.0 - lambda - alpha)
                        : p + 1.0;
          const PhiFunction phi = PhiFunction::power(lambda - 1.0);
          const ConditionReport rep =
              check_adams_integral(phi, kernel, w, p, q, {origin});
          ++presets;
          if (rep.holds == (e_a < 0.0)) {
            ++matched;
          } else {
            note(&o, false,
                 "adams a=" + fmt(alpha) + " p=" + fmt(p) +
                     " l=" + fmt(lambda));
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  note(&o, presets >= 200, "only " + std::to_string(presets) + " presets");
  note(&o, matched == presets,
       std::to_string(matched) + "/" + std::to_string(presets) + " matched");
  note(&o, secs < 120.0, "sweep took " + fmt(secs) + " s");
  return o;
}

// 6. Theorem-level evidence: the classical two-shape preset (n=1, alpha=1/4,
//    p=2, q=4, lambda=1/4, mu=1/2, w=1) and the classical shared-shape
//    preset (n=1, lambda=1/2, alpha=1/8, p=2, q=8/3, w=1) produce finite sup
//    ratios that move < 5% under grid doubling; the endpoint shape
//    lambda = n - alpha p makes the tail-integral condition diverge. All in
//    under 5 minutes.
Outcome criterion6() {
  Outcome o;
  const auto t0 = Clock::now();

  const BoundednessReport spanne =
      run_spanne(preset_config("spanne-classical"));
  note(&o,
       spanne.sup_defined && std::isfinite(spanne.sup_ratio) &&
           spanne.sup_stable,
       "two-shape sup " + fmt(spanne.sup_ratio) + " stable=" +
           (spanne.sup_stable ? "true" : "false"));
  note(&o, spanne.verdict == "bounded-evidence",
       "two-shape verdict " + spanne.verdict);

  const BoundednessReport adams = run_adams(preset_config("adams-classical"));
  note(&o,
       adams.sup_defined && std::isfinite(adams.sup_ratio) &&
           adams.sup_stable,
       "shared-shape sup " + fmt(adams.sup_ratio) + " stable=" +
           (adams.sup_stable ? "true" : "false"));
  note(&o, adams.verdict == "bounded-evidence",
       "shared-shape verdict " + adams.verdict);

  const ExperimentConfig endpoint = preset_config("spanne-endpoint");
  const ConditionReport tail = check_spanne_integral(
      *endpoint.phi1, *endpoint.phi2, *endpoint.kernel, *endpoint.weight,
      endpoint.p, endpoint.q, endpoint.x0);
  note(&o, !tail.holds && tail.empirical_C.divergent,
       "endpoint tail integral did not diverge");

  const double secs = seconds_since(t0);
  note(&o, secs < 300.0, "evidence runs took " + fmt(secs) + " s");
  return o;
}

// 7. Structural properties: linearity of the potential (1e-8 relative),
//    scaling covariance of the classical kernel (1e-6), split consistency
//    at quadrature tolerance, norm homogeneity (1e-10 relative), weak <=
//    strong on all tested inputs, and byte-identical reports across repeat
//    runs and parallelism levels.
Outcome criterion7() {
  Outcome o;
  const Kernel k = Kernel::power(1, 0.5);
  const TestFunction f1 =
      TestFunction::indicator_ball(Ball{Point{0.0, 0.0, 0.0}, 1.0, 1});
  const TestFunction f2 =
      TestFunction::gaussian(1, 1.0, Point{0.7, 0.0, 0.0});
  const Point x{0.3, 0.0, 0.0};

  const double v1 = riesz_apply(f1, k, x);
  const double v2 = riesz_apply(f2, k, x);
  const double v_scaled = riesz_apply(f1.scaled(2.5), k, x);
  note(&o, rel_err(v_scaled, 2.5 * v1) < 1e-8, "scalar linearity");
  const double v_sum = riesz_apply(TestFunction::sum(f1, f2), k, x);
  note(&o, rel_err(v_sum, v1 + v2) < 1e-7, "split consistency f1+f2");

  // I_alpha(f(lam .))(x) = lam^{-alpha} I_alpha f(lam x) for rho = t^alpha.
  const double lam = 2.0;
  const double lhs = riesz_apply(f1.dilated(lam), k, x);
  const double rhs = std::pow(lam, -0.5) *
                     riesz_apply(f1, k, Point{lam * x[0], 0.0, 0.0});
  note(&o, rel_err(lhs, rhs) < 1e-6, "scaling covariance");

  const PhiFunction phi = PhiFunction::morrey_power(0.5, 1, 2.0);
  const Weight w = Weight::constant(1, 1.0);
  const TestFunction g = TestFunction::gaussian(1, 1.0);
  const double c = 5.0;
  {
    const double base =
        morrey_norm_local(make_view(g), 2.0, phi, w, 2.0, Point{}).value;
    const double scaled =
        morrey_norm_local(make_view(g.scaled(c)), 2.0, phi, w, 2.0, Point{})
            .value;
    note(&o, rel_err(scaled, c * base) < 1e-10, "strong norm homogeneity");
  }
  {
    const double base =
        weak_morrey_norm_local(make_view(g), 2.0, phi, w, 2.0, Point{}).value;
    const double scaled =
        weak_morrey_norm_local(make_view(g.scaled(c)), 2.0, phi, w, 2.0,
                               Point{})
            .value;
    note(&o, rel_err(scaled, c * base) < 1e-10, "weak norm homogeneity");
  }
  {
    const std::vector<Point> centers{Point{0.0, 0.0, 0.0},
                                     Point{0.5, 0.0, 0.0}};
    const double base =
        morrey_norm_global(make_view(g), 2.0, phi, w, 1.0, centers).value;
    const double scaled =
        morrey_norm_global(make_view(g.scaled(c)), 2.0, phi, w, 1.0, centers)
            .value;
    note(&o, rel_err(scaled, c * base) < 1e-10, "global norm homogeneity");
  }

  for (const char* id : {"indicator-unit", "gaussian", "bump"}) {
    const TestFunction f = library_function(id, 1);
    const double strong =
        morrey_norm_local(make_view(f), 2.0, phi, w, 2.0, Point{}).value;
    const double weak =
        weak_morrey_norm_local(make_view(f), 2.0, phi, w, 2.0, Point{}).value;
    note(&o, weak <= strong * (1.0 + 1e-9),
         std::string(id) + ": weak " + fmt(weak) + " > strong " +
             fmt(strong));
  }

  ExperimentConfig cfg = preset_config("spanne-classical");
  cfg.functions = {"indicator-half", "indicator-unit"};
  cfg.r_grid = LogGrid{0.1, 10.0, 5};
  std::vector<std::string> dumps;
  for (int parallelism : {0, 1, 2, 2}) {
    cfg.parallelism = parallelism;
    dumps.push_back(to_json(run_experiment(cfg)).dump(2));
  }
  for (size_t i = 1; i < dumps.size(); ++i) {
    note(&o, dumps[i] == dumps[0],
         "report " + std::to_string(i) + " differs from the first run");
  }
  return o;
}

int run_all() {
  struct Entry {
    const char* title;
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> entries = {
      {"closed-form potential, tail-integral, and tilde-rho values",
       criterion1},
      {"unit Morrey norm oracle and weak/strong agreement", criterion2},
      {"Muckenhoupt characteristic and Hoelder lower bound", criterion3},
      {"Hardy best constant and companion inequality", criterion4},
      {"integral-condition verdicts match the exponent signs", criterion5},
      {"boundedness evidence on the classical presets", criterion6},
      {"linearity, covariance, homogeneity, determinism", criterion7},
  };

  int failures = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = entries[i].fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = seconds_since(t0);
    std::printf("[%s] %zu. %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL",
                i + 1, entries[i].title, secs, o.detail.empty() ? "" : " -- ",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
      ++failures;
    }
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(entries.size()) - failures, entries.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace rieszlab

int main() { return rieszlab::run_all(); }
