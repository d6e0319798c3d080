#pragma once

#include "geometry/metric.hpp"

#include <optional>
#include <vector>

namespace lipmass::geometry {

/// Sampling domain for hypothesis checks: an axis box or a centered annulus.
struct SampleDomain {
  enum class Kind { kBox, kAnnulus } kind = Kind::kAnnulus;
  Vec lower, upper;                    // box
  double inner = 1.0, outer = 2.0;     // annulus radii
  int resolution = 12;                 // per-axis points (box) or radial shells (annulus)
  int sphere_order = 12;               // angular resolution for n = 3 shells
  int sphere_samples = 512;            // directions per shell for n > 3
  std::uint64_t seed = 1;

  static SampleDomain box(Vec lower, Vec upper, int resolution = 12);
  static SampleDomain annulus(double inner, double outer, int resolution = 12);
};

/// Deterministic sample points of the domain.
std::vector<Vec> sample_points(const SampleDomain& domain, int n);

/// Smallest sampled C with C^{-1} delta <= g <= C delta.
double uniform_equivalence_constant(const MetricField& g, const SampleDomain& domain);

struct DecayOrderFit {
  std::optional<double> order;  // nullopt when the statistic sits at the floor
  std::vector<double> values;   // per radius
  bool at_floor() const { return !order.has_value(); }
};

struct DecayFitResult {
  std::vector<double> radii;
  DecayOrderFit metric;       // sup |g - delta|
  DecayOrderFit derivative;   // sup |dg| * |x|
  DecayOrderFit curvature;    // sup |R_g|
  double metric_threshold = 0.0;     // (n - 2) / 2
  double curvature_threshold = 0.0;  // n
  bool metric_ok = false;
  bool curvature_ok = false;
  bool thresholds_hold() const { return metric_ok && curvature_ok; }
};

/// Log-log slopes of the asymptotic statistics against |x| over coordinate spheres.
DecayFitResult decay_fit(const MetricField& g, const std::vector<double>& radii, int sphere_order = 16,
                         double floor = 1e-11, std::uint64_t seed = 1);

}  // namespace lipmass::geometry
