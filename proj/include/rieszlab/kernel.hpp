#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rieszlab/grids.hpp"
#include "rieszlab/quadrature.hpp"

namespace rieszlab {

// Radial kernel rho(t) driving the potential rho(|x-y|)/|x-y|^n. Analytic
// families are strictly positive; tables may hold zero rows and evaluate to
// zero outside their support. Construction asserts integrability of
// rho(t)/t near the origin (for the analytic families this is alpha > 0).
class Kernel {
 public:
  enum class Family { kPower, kPowerLog, kTable };

  static Kernel power(int dim, double alpha);
  static Kernel power_log(int dim, double alpha, double beta);
  static Kernel table(int dim, std::vector<std::pair<double, double>> rows);
  static Kernel table_from_file(int dim, const std::string& path);

  double operator()(double t) const;           // rho(t)
  double density(double t) const;              // rho(t) / t^n

  int dim() const { return dim_; }
  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::vector<std::pair<double, double>>& rows() const { return rows_; }
  std::string describe() const;

 private:
  Kernel() = default;

  Family family_ = Family::kPower;
  int dim_ = 1;
  double alpha_ = 0.5;
  double beta_ = 0.0;
  std::vector<std::pair<double, double>> rows_;
};

// integral_1^inf rho(t) t^{-n-1} dt with divergence verdict.
TailResult tail_integral(const Kernel& kernel, double tol);

// integral_r^inf of the same integrand (the tail condition at radius r).
TailResult tail_integral_from(const Kernel& kernel, double r, double tol);

// tilde-rho(r) = r^n integral_r^inf rho(t) t^{-n-1} dt (free constant = 1).
ExtReal tilde_rho(const Kernel& kernel, double r, double tol);

// Growth envelope sup_{r<s<=2r} rho(s)/s^n <= C integral_{k1 r}^{k2 r}
// rho(t) t^{-n-1} dt.
struct GrowthSpec {
  double k1 = 0.5;
  double k2 = 2.0;
  double c = 8.0;
};

struct GrowthReport {
  bool holds = false;
  double empirical_c = 0.0;  // largest observed lhs/rhs ratio
  double worst_r = 0.0;
  double worst_s = 0.0;
  double bound_c = 0.0;      // the C the envelope was checked against
};

GrowthReport check_growth(const Kernel& kernel, const GrowthSpec& spec,
                          const LogGrid& r_grid);

// Pointwise doubling of rho(t)/t^n over pairs with 1/2 <= r/t <= 2.
struct DoublingReport {
  bool holds = false;
  double empirical_c = 0.0;
  double worst_r = 0.0;
  double worst_t = 0.0;
  double bound_c = 0.0;
};

DoublingReport check_doubling(const Kernel& kernel, double c,
                              const LogGrid& r_grid);

}  // namespace rieszlab
