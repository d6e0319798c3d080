#pragma once

#include "mollifier/bounds.hpp"
#include "mollifier/mollified_metric.hpp"

namespace lipmass::mass {

enum class TubeRegion { kTube2Eps, kTubeEps, kAnnulus };

/// Nodal quadrature h^n * sum |R_{g_eps}|^q sqrt(det g_eps) over the region,
/// with R from the lattice stencil.
double curvature_lp_integral(const mollifier::MollifiedMetric& gm, TubeRegion region, double q);

/// Everything a decay-study row needs from one sweep over the nodes of S_{2 eps}.
struct TubeAnalysis {
  std::int64_t nodes = 0;
  double vol_tube = 0.0;         // h^n * #{dist < 2 eps}
  double int_tube2 = 0.0;        // over S_{2 eps}
  double int_tube1 = 0.0;        // over S_eps
  double int_annulus = 0.0;      // over S_{2 eps} \ S_eps
  double int_negative = 0.0;     // integral of (R^-)^{n/2} over S_{2 eps}
  double min_curvature = 0.0;    // min R over the tube nodes
  mollifier::SmoothnessBounds bounds;
};

TubeAnalysis analyze_tube(const mollifier::MollifiedMetric& gm, double q, const mollifier::SmoothnessMode& mode);

}  // namespace lipmass::mass
