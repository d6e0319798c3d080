#pragma once

#include "geometry/metric.hpp"
#include "singular/singular_set.hpp"

#include <vector>

namespace lipmass::mass {

struct FluxOptions {
  int sphere_order = 32;     // n = 3 product rule
  int mc_samples = 20000;    // n > 3 Monte Carlo
  std::uint64_t seed = 1;
  /// When set, every quadrature point must satisfy dist(x, S) >= exclusion.
  const singular::SingularSet* set = nullptr;
  double exclusion = 0.0;
};

struct FluxValue {
  double value = 0.0;
  double std_error = 0.0;  // nonzero only for Monte Carlo rules
};

/// (1 / (2(n-1) omega_{n-1})) * integral over |x| = rho of
/// sum_{i,j} (d_i g_ij - d_j g_ii) nu_j with the Euclidean area element.
FluxValue sphere_flux(const geometry::MetricField& g, double rho, const FluxOptions& options = {});

struct ADMMassEstimate {
  std::vector<double> radii;
  std::vector<double> fluxes;
  std::vector<double> std_errors;
  double mass = 0.0;
  double order = 0.0;
  double coefficient = 0.0;
  double residual = 0.0;
  double fit_tolerance = 0.0;
  bool reliable = false;
  bool monte_carlo = false;
};

/// Fits flux(rho) = m + c rho^{-q} with q free over at least 3 increasing radii.
ADMMassEstimate adm_mass(const geometry::MetricField& g, const std::vector<double>& radii,
                         const FluxOptions& options = {}, double fit_tolerance = 1e-3);

}  // namespace lipmass::mass
