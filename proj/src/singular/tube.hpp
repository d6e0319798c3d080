#pragma once

#include "geometry/metric.hpp"
#include "singular/singular_set.hpp"

#include <optional>
#include <vector>

namespace lipmass::singular {

struct TubeOptions {
  enum class Method { kGrid, kMonteCarlo } method = Method::kGrid;
  /// Finest cell edge as a fraction of eps (grid method). Must be <= 1/10.
  double cell_fraction = 1.0 / 16.0;
  /// Relative error bound above which tube_volume throws Error(kNumerical).
  double rel_tolerance = 0.05;
  std::int64_t samples = 200000;  // Monte Carlo
  std::uint64_t seed = 1;
};

struct TubeVolume {
  double volume = 0.0;
  double error = 0.0;  // grid: change from the next-coarser level; MC: standard error
  std::int64_t evaluations = 0;
};

/// Volume of S_eps = {dist < eps} in dx, or in sqrt(det g) dx when `metric` is set.
/// The grid method classifies coarse cells as fully inside/outside with the
/// 1-Lipschitz distance bound and subdivides only cells straddling the boundary.
TubeVolume tube_volume(const SingularSet& s, double eps, const geometry::MetricField* metric = nullptr,
                       const TubeOptions& options = {});

struct MinkowskiStudy {
  double m = 0.0;
  double normalizer = 0.0;  // alpha_{n-m}
  std::vector<double> eps;
  std::vector<TubeVolume> volumes;
  std::vector<double> ratios;
  std::vector<double> running_min;
  double liminf_estimate = 0.0;
};

/// Ratios L^n(S_eps) / (alpha_{n-m} eps^{n-m}) along a strictly decreasing sequence.
MinkowskiStudy minkowski_content(const SingularSet& s, double m, const std::vector<double>& eps_seq,
                                 const TubeOptions& options = {});

}  // namespace lipmass::singular
