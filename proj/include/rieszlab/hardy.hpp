#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rieszlab/common.hpp"
#include "rieszlab/grids.hpp"

namespace rieszlab {

// Nonnegative functions on the half line (0, inf): the phi shapes, Hardy
// weights, and cone members that drive the supremal machinery. Monotonicity
// flags are sampled at construction; the analytic families also know their
// exact tail behavior, which the supremal transform turns into divergence
// verdicts. Tables interpolate the value linearly in log t and extrapolate
// by constants on both sides (values may be zero, so no log-log).
class HalfLineFunction {
 public:
  enum class Family { kPower, kPowerLog, kTable };

  // amplitude * t^gamma, amplitude >= 0.
  static HalfLineFunction power(double amplitude, double gamma);
  // amplitude * t^gamma * (1 + |ln t|)^delta.
  static HalfLineFunction power_log(double amplitude, double gamma,
                                    double delta);
  // (t, value) knots, strictly increasing t > 0, values >= 0.
  static HalfLineFunction table(std::vector<std::pair<double, double>> rows);
  static HalfLineFunction constant(double value) { return power(value, 0.0); }

  double operator()(double t) const;  // requires t > 0

  Family family() const { return family_; }
  double amplitude() const { return amplitude_; }
  double gamma() const { return gamma_; }
  double delta() const { return delta_; }
  const std::vector<std::pair<double, double>>& rows() const { return rows_; }

  bool non_decreasing() const { return non_decreasing_; }
  bool non_increasing() const { return non_increasing_; }
  bool vanishes_at_zero() const { return vanishes_at_zero_; }
  // The cone of non-decreasing functions vanishing at the origin.
  bool in_cone_a() const { return non_decreasing_ && vanishes_at_zero_; }

  // Radii where the evaluation rule changes (table knots, the log kink).
  std::vector<double> breakpoints() const;
  std::string describe() const;

 private:
  HalfLineFunction() = default;
  void finalize();

  Family family_ = Family::kPower;
  double amplitude_ = 1.0;
  double gamma_ = 0.0;
  double delta_ = 0.0;
  std::vector<std::pair<double, double>> rows_;
  bool non_decreasing_ = false;
  bool non_increasing_ = false;
  bool vanishes_at_zero_ = false;
};

// ess sup_{s > t} g(s): exact for monotone inputs (g(t) when non-increasing,
// divergence by tail analysis when growing), grid supremum with near-t
// probes and knot checks otherwise. The tail grid must extend at least
// three decades beyond t.
ExtReal supremal_transform(const HalfLineFunction& g, double t,
                           const LogGrid& tail_grid = default_halfline_grid());

// H_w g(t) = integral_t^inf g(s) w(s) ds with a dyadic far-field walk;
// divergence is a verdict, not an error.
ExtReal weighted_hardy(const HalfLineFunction& g, const HalfLineFunction& w,
                       double t, double tol = 1e-10);

// B = sup_t w2(t) * integral_t^inf w(s) / (ess sup_{tau > s} w1(tau)) ds,
// with the conventions 1/inf = 0 and 0*inf = 0 so the expression stays
// defined for degenerate inputs. The supremum is taken over the grid; probe
// points three decades beyond each end turn runaway growth into a
// divergence verdict.
struct BestConstantReport {
  ExtReal value;         // B estimate, or divergent
  double t_star = 0.0;   // maximizing grid point (finite case)
};

BestConstantReport best_constant_B(const HalfLineFunction& w1,
                                   const HalfLineFunction& w2,
                                   const HalfLineFunction& w,
                                   const LogGrid& t_grid = default_halfline_grid());

// Companion inequality check: sup_t w2(t) H_w g(t) <= c * sup_t w1(t) g(t)
// on the grid, for a supplied constant c (callers use the best constant
// times a small slack). A divergent right side holds vacuously.
struct HardyInequalityReport {
  bool holds = false;
  ExtReal lhs;
  ExtReal rhs;
  double worst_t = 0.0;  // maximizer of the left side (finite case)
};

HardyInequalityReport hardy_inequality_check(
    const HalfLineFunction& g, const HalfLineFunction& w1,
    const HalfLineFunction& w2, const HalfLineFunction& w, double c,
    const LogGrid& t_grid = default_halfline_grid());

// Boundedness criterion for the identity embedding:
// sup_t w2(t) / (ess sup_{s > t} w1(s)), requiring that tail sup to be
// finite and positive at every probed t (hypothesis violation -> error).
struct EmbeddingReport {
  ExtReal value;
  double t_star = 0.0;
};

EmbeddingReport identity_embedding_check(
    const HalfLineFunction& w1, const HalfLineFunction& w2,
    const LogGrid& t_grid = default_halfline_grid());

}  // namespace rieszlab
