#include "mass/curvature_integrals.hpp"

#include "geometry/curvature.hpp"

#include <cmath>
#include <limits>

namespace lipmass::mass {

TubeAnalysis analyze_tube(const mollifier::MollifiedMetric& gm, double q, const mollifier::SmoothnessMode& mode) {
  require(q > 0.0, ErrorCode::kInvalidArgument, "curvature exponent must be positive");
  const int n = gm.dim();
  const double eps = gm.epsilon();
  TubeAnalysis out;
  mollifier::SmoothnessAccumulator acc(n, eps, gm.spacing(), mode);
  if (!gm.has_lattice()) {
    out.bounds = acc.result();
    return out;
  }
  const double cell = std::pow(gm.spacing(), n);
  geometry::MetricJet jet(n);
  geometry::CurvatureWorkspace ws(n);
  double min_r = std::numeric_limits<double>::infinity();
  for (const auto& t : gm.tube_nodes()) {
    gm.node_partials(gm.lattice().multi(t.node), 2, jet);
    const double r = geometry::scalar_curvature_from_jet(jet, ws);
    const Mat g = jet.metric();
    const double vol = std::sqrt(g.determinant()) * cell;
    const double term = std::pow(std::abs(r), q) * vol;
    out.int_tube2 += term;
    if (t.dist < eps)
      out.int_tube1 += term;
    else
      out.int_annulus += term;
    if (r < 0.0) out.int_negative += std::pow(-r, 0.5 * n) * vol;
    min_r = std::min(min_r, r);
    acc.add(t.dist, jet);
    ++out.nodes;
  }
  out.vol_tube = cell * static_cast<double>(out.nodes);
  out.min_curvature = out.nodes ? min_r : 0.0;
  out.bounds = acc.result();
  return out;
}

double curvature_lp_integral(const mollifier::MollifiedMetric& gm, TubeRegion region, double q) {
  const TubeAnalysis a = analyze_tube(gm, q, {});
  switch (region) {
    case TubeRegion::kTube2Eps:
      return a.int_tube2;
    case TubeRegion::kTubeEps:
      return a.int_tube1;
    case TubeRegion::kAnnulus:
      return a.int_annulus;
  }
  return 0.0;
}

}  // namespace lipmass::mass
