#include "rieszlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rieszlab {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw PreconditionError("kernel: dimension must be 1, 2 or 3");
  }
}

}  // namespace

Kernel Kernel::power(int dim, double alpha) {
  check_dim(dim);
  if (!(alpha > 0.0)) {
    throw PreconditionError(
        "power kernel: requires alpha > 0 (integral of rho(t)/t near 0)");
  }
  Kernel k;
  k.family_ = Family::kPower;
  k.dim_ = dim;
  k.alpha_ = alpha;
  return k;
}

Kernel Kernel::power_log(int dim, double alpha, double beta) {
  check_dim(dim);
  if (!(alpha > 0.0)) {
    throw PreconditionError(
        "power-log kernel: requires alpha > 0 (integral of rho(t)/t near 0)");
  }
  Kernel k;
  k.family_ = Family::kPowerLog;
  k.dim_ = dim;
  k.alpha_ = alpha;
  k.beta_ = beta;
  return k;
}

Kernel Kernel::table(int dim, std::vector<std::pair<double, double>> rows) {
  check_dim(dim);
  if (rows.size() < 2) {
    throw PreconditionError("table kernel: needs at least 2 rows");
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].first > 0.0)) {
      throw PreconditionError("table kernel: abscissae must satisfy t > 0");
    }
    if (rows[i].second < 0.0) {
      throw PreconditionError("table kernel: values must satisfy rho >= 0");
    }
    if (i > 0 && !(rows[i].first > rows[i - 1].first)) {
      throw PreconditionError("table kernel: abscissae must be strictly increasing");
    }
  }
  Kernel k;
  k.family_ = Family::kTable;
  k.dim_ = dim;
  k.rows_ = std::move(rows);
  return k;
}

Kernel Kernel::table_from_file(int dim, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("table kernel: cannot open " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double t, v;
    if (ss >> t >> v) rows.emplace_back(t, v);
  }
  return table(dim, std::move(rows));
}

double Kernel::operator()(double t) const {
  if (!(t > 0.0)) throw PreconditionError("kernel: evaluation requires t > 0");
  switch (family_) {
    case Family::kPower:
      return std::pow(t, alpha_);
    case Family::kPowerLog:
      return std::pow(t, alpha_) * std::pow(1.0 + std::abs(std::log(t)), beta_);
    case Family::kTable: {
      if (t < rows_.front().first || t > rows_.back().first) return 0.0;
      auto it = std::lower_bound(
          rows_.begin(), rows_.end(), t,
          [](const std::pair<double, double>& row, double x) {
            return row.first < x;
          });
      if (it == rows_.begin()) return it->second;
      const auto [t1, v1] = *it;
      const auto [t0, v0] = *(it - 1);
      if (t1 == t) return v1;
      const double u = (std::log(t) - std::log(t0)) / (std::log(t1) - std::log(t0));
      if (v0 > 0.0 && v1 > 0.0) {
        return std::exp((1.0 - u) * std::log(v0) + u * std::log(v1));
      }
      return (1.0 - u) * v0 + u * v1;
    }
  }
  throw NumericError("kernel: unreachable family");
}

double Kernel::density(double t) const {
  return (*this)(t) / std::pow(t, dim_);
}

std::string Kernel::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::kPower:
      os << "power(alpha=" << alpha_ << ")";
      break;
    case Family::kPowerLog:
      os << "power-log(alpha=" << alpha_ << ", beta=" << beta_ << ")";
      break;
    case Family::kTable:
      os << "table(" << rows_.size() << " rows)";
      break;
  }
  return os.str();
}

TailResult tail_integral(const Kernel& kernel, double tol) {
  return tail_integral_from(kernel, 1.0, tol);
}

TailResult tail_integral_from(const Kernel& kernel, double r, double tol) {
  if (!(r > 0.0)) throw PreconditionError("tail_integral: requires r > 0");
  return dyadic_tail([&](double t) { return kernel.density(t) / t; }, r, tol);
}

ExtReal tilde_rho(const Kernel& kernel, double r, double tol) {
  const TailResult tail = tail_integral_from(kernel, r, tol);
  if (tail.divergent) return ExtReal::diverged();
  return ExtReal::finite(std::pow(r, kernel.dim()) * tail.value);
}

GrowthReport check_growth(const Kernel& kernel, const GrowthSpec& spec,
                          const LogGrid& r_grid) {
  if (!(spec.k1 > 0.0) || !(spec.k2 > 2.0 * spec.k1)) {
    throw PreconditionError("growth spec: requires 0 < 2 k1 < k2");
  }
  if (!(spec.c > 0.0)) throw PreconditionError("growth spec: requires C > 0");
  GrowthReport rep;
  rep.bound_c = spec.c;
  const int samples = 64;
  for (double r : r_grid.points()) {
    double lhs = 0.0, worst_s = r;
    for (int j = 1; j <= samples; ++j) {
      const double s = r * std::pow(2.0, static_cast<double>(j) / samples);
      const double v = kernel.density(s);
      if (v > lhs) {
        lhs = v;
        worst_s = s;
      }
    }
    const double rhs = integrate_line(
        [&](double t) { return kernel.density(t) / t; }, spec.k1 * r,
        spec.k2 * r, {}, {}, 1e-10);
    if (!(rhs > 0.0)) continue;  // table kernels can vanish on the window
    const double ratio = lhs / rhs;
    if (ratio > rep.empirical_c) {
      rep.empirical_c = ratio;
      rep.worst_r = r;
      rep.worst_s = worst_s;
    }
  }
  rep.holds = rep.empirical_c <= spec.c;
  return rep;
}

DoublingReport check_doubling(const Kernel& kernel, double c,
                              const LogGrid& r_grid) {
  if (!(c >= 1.0)) throw PreconditionError("doubling check: requires C >= 1");
  DoublingReport rep;
  rep.bound_c = c;
  const int sub = 16;
  for (double r : r_grid.points()) {
    const double dr = kernel.density(r);
    if (!(dr > 0.0)) continue;
    for (int j = -sub; j <= sub; ++j) {
      const double t = r * std::pow(2.0, static_cast<double>(j) / sub);
      const double dt = kernel.density(t);
      if (!(dt > 0.0)) continue;
      const double ratio = std::max(dr / dt, dt / dr);
      if (ratio > rep.empirical_c) {
        rep.empirical_c = ratio;
        rep.worst_r = r;
        rep.worst_t = t;
      }
    }
  }
  rep.holds = rep.empirical_c <= c;
  return rep;
}

}  // namespace rieszlab
