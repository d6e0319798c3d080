#include "mass/flux.hpp"

#include "common/fit.hpp"
#include "common/quadrature.hpp"

#include <cmath>

namespace lipmass::mass {

FluxValue sphere_flux(const geometry::MetricField& g, double rho, const FluxOptions& options) {
  const int n = g.dim();
  require(rho > 0.0 && std::isfinite(rho), ErrorCode::kInvalidArgument, "flux radius must be positive");
  const SphereRule rule = n == 3 ? sphere_product_rule(options.sphere_order)
                                 : sphere_monte_carlo(n, options.mc_samples, options.seed);
  geometry::MetricJet jet(n);
  const double area = std::pow(rho, n - 1);
  std::vector<double> samples;
  samples.reserve(rule.normals.size());
  double total = 0.0;
  for (std::size_t q = 0; q < rule.normals.size(); ++q) {
    const Vec& nu = rule.normals[q];
    const Vec x = rho * nu;
    if (options.set)
      require(options.set->distance(x) >= options.exclusion, ErrorCode::kDomain,
              "flux sphere intersects the smoothing neighbourhood of the singular set");
    g.partials(x, 1, jet);
    double integrand = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) integrand += (jet.dg(i, j, i) - jet.dg(i, i, j)) * nu[j];
    samples.push_back(integrand);
    total += rule.weights[q] * integrand;
  }
  const double prefactor = 1.0 / (2.0 * (n - 1) * unit_sphere_area(n));
  FluxValue out;
  out.value = prefactor * area * total;
  if (rule.monte_carlo) {
    const double N = static_cast<double>(samples.size());
    double mean = 0.0, m2 = 0.0;
    for (double s : samples) mean += s / N;
    for (double s : samples) m2 += (s - mean) * (s - mean);
    out.std_error = prefactor * area * unit_sphere_area(n) * std::sqrt(m2 / (N - 1.0) / N);
  }
  return out;
}

ADMMassEstimate adm_mass(const geometry::MetricField& g, const std::vector<double>& radii,
                         const FluxOptions& options, double fit_tolerance) {
  require(radii.size() >= 3, ErrorCode::kInvalidArgument, "ADM extrapolation needs at least 3 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    require(radii[i] > radii[i - 1], ErrorCode::kInvalidArgument, "flux radii must be strictly increasing");
  ADMMassEstimate est;
  est.radii = radii;
  est.monte_carlo = g.dim() != 3;
  for (double r : radii) {
    const FluxValue f = sphere_flux(g, r, options);
    est.fluxes.push_back(f.value);
    est.std_errors.push_back(f.std_error);
  }
  const PowerLawFit fit = fit_power_law_limit(est.radii, est.fluxes);
  est.mass = fit.limit;
  est.order = fit.order;
  est.coefficient = fit.coefficient;
  est.residual = fit.residual;
  est.fit_tolerance = fit_tolerance;
  est.reliable = std::isfinite(fit.limit) && fit.residual <= fit_tolerance;
  return est;
}

}  // namespace lipmass::mass
