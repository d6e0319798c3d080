#include "common/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace lipmass {

namespace {

// Legendre P_order(x) and its derivative.
void legendre(int order, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= order; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = order * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

Rule1D gauss_legendre(int order, double a, double b) {
  require(order >= 1, ErrorCode::kInvalidArgument, "Gauss-Legendre order must be >= 1");
  Rule1D rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  if (order == 1) {
    rule.weights[0] = 2.0;
  } else {
    for (int i = 0; i < (order + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
      double p = 0.0, dp = 1.0;
      for (int iter = 0; iter < 100; ++iter) {
        legendre(order, x, p, dp);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      legendre(order, x, p, dp);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      rule.nodes[i] = -x;
      rule.nodes[order - 1 - i] = x;
      rule.weights[i] = w;
      rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  }
  const double mid = 0.5 * (a + b), half_len = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = mid + half_len * rule.nodes[i];
    rule.weights[i] *= half_len;
  }
  return rule;
}

double unit_sphere_area(int k) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

double unit_ball_volume(double k) {
  require(k >= 0.0, ErrorCode::kInvalidArgument, "ball dimension must be nonnegative");
  return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

SphereRule sphere_product_rule(int order) {
  require(order >= 2, ErrorCode::kInvalidArgument, "sphere quadrature order must be >= 2");
  SphereRule rule;
  rule.dim = 3;
  const Rule1D z = gauss_legendre(order);
  const int azimuth = 2 * order;
  const double dphi = 2.0 * std::numbers::pi / azimuth;
  rule.normals.reserve(static_cast<std::size_t>(order) * azimuth);
  for (int i = 0; i < order; ++i) {
    const double ct = z.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < azimuth; ++j) {
      const double phi = (j + 0.5) * dphi;
      Vec nu(3);
      nu << st * std::cos(phi), st * std::sin(phi), ct;
      rule.normals.push_back(nu);
      rule.weights.push_back(z.weights[i] * dphi);
    }
  }
  return rule;
}

SphereRule sphere_monte_carlo(int n, int samples, std::uint64_t seed) {
  check_dimension(n);
  require(samples >= 1, ErrorCode::kInvalidArgument, "Monte Carlo sample count must be >= 1");
  SphereRule rule;
  rule.dim = n;
  rule.monte_carlo = true;
  Rng rng(seed);
  const double w = unit_sphere_area(n) / samples;
  for (int s = 0; s < samples; ++s) {
    Vec v(n);
    double norm = 0.0;
    do {
      for (int k = 0; k < n; ++k) v[k] = rng.normal();
      norm = v.norm();
    } while (norm < 1e-12);
    rule.normals.push_back(v / norm);
    rule.weights.push_back(w);
  }
  return rule;
}

double Rng::uniform() {
  // 53 random bits mapped to [0,1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lipmass
