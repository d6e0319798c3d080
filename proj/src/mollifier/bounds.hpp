#pragma once

#include "mollifier/mollified_metric.hpp"

#include <string>

namespace lipmass::mollifier {

struct WidthBounds {
  double sup_d1 = 0.0;      // max |d sigma_w|
  double eps_sup_d2 = 0.0;  // eps * max |dd sigma_w| (Frobenius)
  double h = 0.0;
  std::int64_t nodes = 0;
  /// Nodes with dist < eps (dist >= 2 eps) where sigma_w differs from eps (from 0).
  std::int64_t plateau_violations = 0;
  std::int64_t zero_violations = 0;
  std::int64_t plateau_nodes = 0, zero_nodes = 0;
};

/// Finite-difference suprema of sigma_w on a lattice of spacing h (h <= eps/20)
/// covering S_{2 eps}.
WidthBounds width_bound_report(const WidthFunction& width, double h);

struct SmoothnessMode {
  enum class Type { kLipschitz, kW1p } type = Type::kLipschitz;
  double p = 0.0;
  std::string name() const { return type == Type::kLipschitz ? "lipschitz" : "w1p"; }
};

struct SmoothnessBounds {
  /// Lipschitz: sup over S_{2 eps} of |d g_eps|. W^{1,p}: ||d g_eps||_{L^p(S_eps)}.
  double sup_d1 = 0.0;
  /// Lipschitz: eps * sup over S_{2 eps} of |dd g_eps|.
  /// W^{1,p}: eps^{1 + n/p} * sup over S_eps of |dd g_eps|.
  double eps_sup_d2 = 0.0;
};

/// Accumulates the smoothness statistics node by node; shared with the
/// curvature sweep so one pass over the tube serves both.
class SmoothnessAccumulator {
 public:
  SmoothnessAccumulator(int n, double eps, double h, const SmoothnessMode& mode);
  void add(double dist, const geometry::MetricJet& jet);
  SmoothnessBounds result() const;

 private:
  int n_;
  double eps_, h_;
  SmoothnessMode mode_;
  double sup_d1_ = 0.0, sup_d2_ = 0.0, lp_sum_ = 0.0;
};

/// Lattice-stencil statistics of g_eps; p <= n is rejected in W^{1,p} mode.
SmoothnessBounds smoothness_bound_report(const MollifiedMetric& gm, const SmoothnessMode& mode);

}  // namespace lipmass::mollifier
