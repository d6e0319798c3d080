#include "geometry/diagnostics.hpp"

#include "common/fit.hpp"
#include "common/quadrature.hpp"
#include "geometry/curvature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace lipmass::geometry {
namespace {

std::vector<Vec> directions(int n, int order, int samples, std::uint64_t seed) {
  const SphereRule rule = n == 3 ? sphere_product_rule(order) : sphere_monte_carlo(n, samples, seed);
  return rule.normals;
}

DecayOrderFit fit_order(const std::vector<double>& radii, std::vector<double> values, double floor) {
  DecayOrderFit fit;
  fit.values = std::move(values);
  const bool any_above = std::any_of(fit.values.begin(), fit.values.end(), [&](double v) { return v > floor; });
  if (any_above) {
    if (auto slope = loglog_slope(radii, fit.values, floor)) fit.order = -*slope;
  }
  return fit;
}

}  // namespace

SampleDomain SampleDomain::box(Vec lower, Vec upper, int resolution) {
  SampleDomain d;
  d.kind = Kind::kBox;
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  d.resolution = resolution;
  return d;
}

SampleDomain SampleDomain::annulus(double inner, double outer, int resolution) {
  SampleDomain d;
  d.kind = Kind::kAnnulus;
  d.inner = inner;
  d.outer = outer;
  d.resolution = resolution;
  return d;
}

std::vector<Vec> sample_points(const SampleDomain& domain, int n) {
  require(domain.resolution >= 2, ErrorCode::kInvalidArgument, "sampling resolution must be >= 2");
  std::vector<Vec> pts;
  if (domain.kind == SampleDomain::Kind::kBox) {
    require(domain.lower.size() == n && domain.upper.size() == n, ErrorCode::kInvalidArgument,
            "sample box dimension mismatch");
    const int r = domain.resolution;
    std::vector<int> idx(n, 0);
    while (true) {
      Vec x(n);
      for (int k = 0; k < n; ++k)
        x[k] = domain.lower[k] + (domain.upper[k] - domain.lower[k]) * idx[k] / (r - 1.0);
      pts.push_back(x);
      int k = n - 1;
      while (k >= 0 && ++idx[k] == r) idx[k--] = 0;
      if (k < 0) break;
    }
    return pts;
  }
  require(domain.inner > 0.0 && domain.outer >= domain.inner, ErrorCode::kInvalidArgument,
          "annulus radii must satisfy 0 < inner <= outer");
  const auto dirs = directions(n, domain.sphere_order, domain.sphere_samples, domain.seed);
  for (int s = 0; s < domain.resolution; ++s) {
    // Geometric spacing of shells so both ends of a wide annulus are resolved.
    const double r = domain.inner * std::pow(domain.outer / domain.inner, s / (domain.resolution - 1.0));
    for (const Vec& d : dirs) pts.push_back(r * d);
  }
  return pts;
}

double uniform_equivalence_constant(const MetricField& g, const SampleDomain& domain) {
  const int n = g.dim();
  double c = 1.0;
  Mat m;
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (const Vec& x : sample_points(domain, n)) {
    g.metric_at(x, m);
    eig.compute(m, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    require(lo > 0.0, ErrorCode::kNumerical, "non-positive-definite metric sample");
    c = std::max({c, hi, 1.0 / lo});
  }
  return c;
}

DecayFitResult decay_fit(const MetricField& g, const std::vector<double>& radii, int sphere_order, double floor,
                         std::uint64_t seed) {
  const int n = g.dim();
  require(radii.size() >= 3, ErrorCode::kInvalidArgument, "decay fit needs at least 3 radii");
  for (std::size_t i = 0; i < radii.size(); ++i)
    require(radii[i] > 0.0 && (i == 0 || radii[i] > radii[i - 1]), ErrorCode::kInvalidArgument,
            "decay-fit radii must be positive and increasing");
  const auto dirs = directions(n, sphere_order, 256, seed);
  std::vector<double> vm, vd, vr;
  MetricJet jet(n);
  CurvatureWorkspace ws(n);
  for (double r : radii) {
    double sm = 0.0, sd = 0.0, sr = 0.0;
    for (const Vec& d : dirs) {
      g.partials(r * d, 2, jet);
      const Mat dev = jet.metric() - Mat::Identity(n, n);
      sm = std::max(sm, dev.cwiseAbs().maxCoeff());
      sd = std::max(sd, jet.first_derivative_norm() * r);
      sr = std::max(sr, std::abs(scalar_curvature_from_jet(jet, ws)));
    }
    vm.push_back(sm);
    vd.push_back(sd);
    vr.push_back(sr);
  }
  DecayFitResult res;
  res.radii = radii;
  res.metric = fit_order(radii, vm, floor);
  res.derivative = fit_order(radii, vd, floor);
  res.curvature = fit_order(radii, vr, floor);
  res.metric_threshold = (n - 2) / 2.0;
  res.curvature_threshold = n;
  res.metric_ok = res.metric.at_floor() || *res.metric.order > res.metric_threshold;
  res.curvature_ok = res.curvature.at_floor() || *res.curvature.order > res.curvature_threshold;
  return res;
}

}  // namespace lipmass::geometry
