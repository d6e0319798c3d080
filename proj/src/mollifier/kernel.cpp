#include "mollifier/kernel.hpp"

#include "common/quadrature.hpp"

#include <cmath>

namespace lipmass::mollifier {
namespace {

// Integral of r^{n-1} exp(-1/(1-r^2)) over [0, 1].
double radial_moment_gl(int n) {
  const Rule1D rule = gauss_legendre(200, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * std::pow(rule.nodes[i], n - 1) * BumpKernel::profile(rule.nodes[i]);
  return s;
}

double radial_moment_simpson(int n) {
  const int m = 20000;
  const double h = 1.0 / m;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double r = i * h;
    const double f = std::pow(r, n - 1) * BumpKernel::profile(r);
    s += (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0)) * f;
  }
  return s * h / 3.0;
}

}  // namespace

double BumpKernel::profile(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

BumpKernel::BumpKernel(int n, double delta) : n_(n), delta_(delta) {
  check_dimension(n);
  require(delta > 0.0 && std::isfinite(delta), ErrorCode::kInvalidArgument, "kernel width must be positive");
  const double gl = radial_moment_gl(n);
  const double simpson = radial_moment_simpson(n);
  require(std::abs(gl - simpson) <= 1e-8 * gl, ErrorCode::kNumerical,
          "kernel normalization rules disagree beyond 1e-8");
  c_ = 1.0 / (unit_sphere_area(n) * gl);
}

double BumpKernel::value(const Vec& x) const {
  return c_ * profile(x.norm() / delta_) / std::pow(delta_, n_);
}

Vec BumpKernel::gradient(const Vec& x) const {
  const double r = x.norm() / delta_;
  if (r >= 1.0) return Vec::Zero(n_);
  const double q = 1.0 - r * r;
  // d/dx exp(-1/q) = exp(-1/q) * (-2 x / delta^2) / q^2
  return (c_ / std::pow(delta_, n_)) * profile(r) * (-2.0 / (delta_ * delta_ * q * q)) * x;
}

double BumpKernel::integral() const { return c_ * unit_sphere_area(n_) * radial_moment_gl(n_); }

BumpKernel rescale_kernel(const BumpKernel& phi, double delta) { return BumpKernel(phi.dim(), delta); }

BallQuadrature ball_quadrature(const BumpKernel& unit, int order) {
  require(order >= 2, ErrorCode::kInvalidArgument, "ball quadrature order must be >= 2");
  const int n = unit.dim();
  const Rule1D rule = gauss_legendre(order);
  BallQuadrature q;
  q.dim = n;
  q.order = order;
  std::vector<int> idx(n, 0);
  Vec y(n);
  const BumpKernel phi = rescale_kernel(unit, 1.0);
  while (true) {
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
      y[k] = rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
    }
    if (y.squaredNorm() < 1.0) {
      const double wk = w * phi.value(y);
      if (wk > 0.0) {
        q.nodes.push_back(y);
        q.weights.push_back(wk);
        q.raw_mass += wk;
      }
    }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == order) idx[k--] = 0;
    if (k < 0) break;
  }
  require(q.raw_mass > 0.0, ErrorCode::kNumerical, "ball quadrature captured no kernel mass");
  for (double& w : q.weights) w /= q.raw_mass;
  return q;
}

}  // namespace lipmass::mollifier
