#include "rieszlab/testfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rieszlab {

double TestFunction::Component::profile(double t) const {
  switch (family) {
    case Family::kIndicator:
      return t < radius ? amplitude : 0.0;
    case Family::kPowerBump:
      if (t >= radius) return 0.0;
      if (t <= 0.0) {
        if (beta > 0.0) return 0.0;
        if (beta < 0.0) return std::numeric_limits<double>::infinity();
        return amplitude;
      }
      return amplitude * std::pow(t, beta);
    case Family::kGaussian:
      return amplitude * std::exp(-0.5 * t * t / (sigma * sigma));
    case Family::kOuterTail:
      return t >= 1.0 ? amplitude * std::pow(t, beta) : 0.0;
    case Family::kTable: {
      if (table.empty() || t > table.back().first) return 0.0;
      if (t <= table.front().first) return amplitude * table.front().second;
      auto it = std::upper_bound(
          table.begin(), table.end(), t,
          [](double v, const std::pair<double, double>& row) {
            return v < row.first;
          });
      const auto& [t1, v1] = *it;
      const auto& [t0, v0] = *(it - 1);
      const double u = (t - t0) / (t1 - t0);
      return amplitude * ((1.0 - u) * v0 + u * v1);
    }
  }
  return 0.0;
}

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw PreconditionError("TestFunction: dimension must be 1, 2 or 3");
  }
}

}  // namespace

TestFunction TestFunction::indicator_ball(const Ball& b) {
  check_dim(b.dim);
  if (!(b.radius > 0.0)) {
    throw PreconditionError("TestFunction: requires radius > 0");
  }
  TestFunction f(b.dim);
  Component c;
  c.family = Family::kIndicator;
  c.center = b.center;
  c.radius = b.radius;
  f.components_.push_back(c);
  return f;
}

TestFunction TestFunction::power_bump(int dim, double beta,
                                      const Ball& support) {
  check_dim(dim);
  if (!(support.radius > 0.0)) {
    throw PreconditionError("TestFunction: requires radius > 0");
  }
  if (!(beta > -double(dim))) {
    throw PreconditionError(
        "TestFunction: power bump requires beta > -n for local integrability");
  }
  TestFunction f(dim);
  Component c;
  c.family = Family::kPowerBump;
  c.center = support.center;
  c.radius = support.radius;
  c.beta = beta;
  f.components_.push_back(c);
  return f;
}

TestFunction TestFunction::gaussian(int dim, double sigma,
                                    const Point& center) {
  check_dim(dim);
  if (!(sigma > 0.0)) {
    throw PreconditionError("TestFunction: requires sigma > 0");
  }
  TestFunction f(dim);
  Component c;
  c.family = Family::kGaussian;
  c.center = center;
  c.sigma = sigma;
  f.components_.push_back(c);
  return f;
}

TestFunction TestFunction::outer_tail(int dim) {
  check_dim(dim);
  TestFunction f(dim);
  Component c;
  c.family = Family::kOuterTail;
  c.beta = -2.0 * dim;
  f.components_.push_back(c);
  return f;
}

TestFunction TestFunction::radial_table(
    int dim, std::vector<std::pair<double, double>> rows,
    const Point& center) {
  check_dim(dim);
  if (rows.size() < 2) {
    throw PreconditionError("TestFunction: table needs at least two rows");
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first < 0.0 || rows[i].second < 0.0) {
      throw PreconditionError("TestFunction: table rows must be nonnegative");
    }
    if (i > 0 && rows[i].first <= rows[i - 1].first) {
      throw PreconditionError(
          "TestFunction: table radii must be strictly increasing");
    }
  }
  TestFunction f(dim);
  Component c;
  c.family = Family::kTable;
  c.center = center;
  c.table = std::move(rows);
  f.components_.push_back(c);
  return f;
}

TestFunction TestFunction::zero(int dim) {
  check_dim(dim);
  return TestFunction(dim);
}

TestFunction TestFunction::sum(const TestFunction& a, const TestFunction& b) {
  if (a.dim_ != b.dim_) {
    throw PreconditionError("TestFunction::sum: dimension mismatch");
  }
  TestFunction f(a.dim_);
  f.components_ = a.components_;
  f.components_.insert(f.components_.end(), b.components_.begin(),
                       b.components_.end());
  return f;
}

double TestFunction::operator()(const Point& x) const {
  double v = 0.0;
  for (const Component& c : components_) v += c.profile(dist(x, c.center, dim_));
  return v;
}

TestFunction TestFunction::scaled(double c) const {
  TestFunction f = *this;
  for (Component& comp : f.components_) comp.amplitude *= c;
  return f;
}

TestFunction TestFunction::dilated(double lam) const {
  if (!(lam > 0.0)) {
    throw PreconditionError("TestFunction::dilated: requires lam > 0");
  }
  TestFunction f(dim_);
  for (Component c : components_) {
    switch (c.family) {
      case Family::kIndicator:
        c.radius /= lam;
        break;
      case Family::kPowerBump:
        c.radius /= lam;
        c.amplitude *= std::pow(lam, c.beta);
        break;
      case Family::kGaussian:
        c.sigma /= lam;
        break;
      default:
        throw PreconditionError(
            "TestFunction::dilated: only indicator, power bump and gaussian "
            "components dilate within the family");
    }
    for (int i = 0; i < dim_; ++i) c.center[i] /= lam;
    f.components_.push_back(c);
  }
  return f;
}

Features TestFunction::quad_features() const {
  Features feats;
  for (const Component& c : components_) {
    switch (c.family) {
      case Family::kIndicator:
        feats.spheres.push_back(Ball{c.center, c.radius, dim_});
        break;
      case Family::kPowerBump:
        feats.spheres.push_back(Ball{c.center, c.radius, dim_});
        if (c.beta != 0.0) feats.singular_points.push_back(c.center);
        break;
      case Family::kGaussian:
        break;
      case Family::kOuterTail:
        feats.spheres.push_back(Ball{c.center, 1.0, dim_});
        break;
      case Family::kTable:
        for (const auto& [t, v] : c.table) {
          if (t > 0.0) feats.spheres.push_back(Ball{c.center, t, dim_});
        }
        break;
    }
  }
  return feats;
}

bool TestFunction::compactly_supported() const {
  for (const Component& c : components_) {
    if (c.family == Family::kGaussian || c.family == Family::kOuterTail) {
      return false;
    }
  }
  return true;
}

double TestFunction::support_radius_about_origin() const {
  double r = 0.0;
  for (const Component& c : components_) {
    double local = 0.0;
    switch (c.family) {
      case Family::kIndicator:
      case Family::kPowerBump:
        local = c.radius;
        break;
      case Family::kTable:
        local = c.table.empty() ? 0.0 : c.table.back().first;
        break;
      case Family::kGaussian:
      case Family::kOuterTail:
        return std::numeric_limits<double>::infinity();
    }
    r = std::max(r, norm(c.center, dim_) + local);
  }
  return r;
}

std::string TestFunction::describe() const {
  if (components_.empty()) return "zero";
  std::ostringstream os;
  bool first = true;
  for (const Component& c : components_) {
    if (!first) os << "+";
    first = false;
    switch (c.family) {
      case Family::kIndicator:
        os << "indicator(r=" << c.radius << ")";
        break;
      case Family::kPowerBump:
        os << "bump(beta=" << c.beta << ",r=" << c.radius << ")";
        break;
      case Family::kGaussian:
        os << "gaussian(sigma=" << c.sigma << ")";
        break;
      case Family::kOuterTail:
        os << "outer-tail";
        break;
      case Family::kTable:
        os << "table(" << c.table.size() << " rows)";
        break;
    }
    if (norm(c.center, dim_) > 0.0) os << "@off-center";
    if (c.amplitude != 1.0) os << "*" << c.amplitude;
  }
  return os.str();
}

}  // namespace rieszlab
