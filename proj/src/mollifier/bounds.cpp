#include "mollifier/bounds.hpp"

#include <cmath>

namespace lipmass::mollifier {

WidthBounds width_bound_report(const WidthFunction& width, double h) {
  const double eps = width.epsilon();
  require(h > 0.0 && h <= eps / 20.0 * (1.0 + 1e-12), ErrorCode::kInvalidArgument,
          "width bound report needs h <= eps/20");
  WidthBounds out;
  out.h = h;
  const auto& set = width.set();
  if (set.empty()) return out;
  const int n = set.dim();
  Vec lo, hi;
  set.bounds(lo, hi);
  const double pad = 2.0 * eps + 2.0 * h;
  const geometry::Lattice lat = geometry::Lattice::covering(lo.array() - pad, hi.array() + pad, h);
  std::vector<double> sigma(lat.size());
  Index idx{};
  for (std::int64_t lin = 0; lin < lat.size(); ++lin) {
    const Vec x = lat.position(idx);
    const double d = set.distance(x);
    sigma[lin] = width.value_at(x, d);
    if (d < eps) {
      ++out.plateau_nodes;
      if (sigma[lin] != eps) ++out.plateau_violations;
    } else if (d >= 2.0 * eps) {
      ++out.zero_nodes;
      if (sigma[lin] != 0.0) ++out.zero_violations;
    }
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < lat.extent(k)) break;
      idx[k] = 0;
    }
  }
  out.nodes = lat.size();
  double d1 = 0.0, d2 = 0.0;
  for (std::int64_t lin = 0; lin < lat.size(); ++lin) {
    const Index c = lat.multi(lin);
    if (!lat.interior(c, 1)) continue;
    const double s0 = sigma[lin];
    double g2 = 0.0, hess2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double p = sigma[lin + lat.stride(k)], m = sigma[lin - lat.stride(k)];
      const double gk = (p - m) / (2.0 * h);
      const double hkk = (p - 2.0 * s0 + m) / (h * h);
      g2 += gk * gk;
      hess2 += hkk * hkk;
      for (int l = k + 1; l < n; ++l) {
        const std::int64_t sk = lat.stride(k), sl = lat.stride(l);
        const double hkl =
            (sigma[lin + sk + sl] - sigma[lin + sk - sl] - sigma[lin - sk + sl] + sigma[lin - sk - sl]) / (4.0 * h * h);
        hess2 += 2.0 * hkl * hkl;
      }
    }
    d1 = std::max(d1, std::sqrt(g2));
    d2 = std::max(d2, std::sqrt(hess2));
  }
  out.sup_d1 = d1;
  out.eps_sup_d2 = eps * d2;
  return out;
}

SmoothnessAccumulator::SmoothnessAccumulator(int n, double eps, double h, const SmoothnessMode& mode)
    : n_(n), eps_(eps), h_(h), mode_(mode) {
  if (mode.type == SmoothnessMode::Type::kW1p)
    require(mode.p > n, ErrorCode::kInvalidArgument, "W^{1,p} mode requires p > n");
}

void SmoothnessAccumulator::add(double dist, const geometry::MetricJet& jet) {
  if (mode_.type == SmoothnessMode::Type::kLipschitz) {
    if (dist >= 2.0 * eps_) return;
    sup_d1_ = std::max(sup_d1_, jet.first_derivative_norm());
    sup_d2_ = std::max(sup_d2_, jet.second_derivative_norm());
    return;
  }
  if (dist >= eps_) return;
  lp_sum_ += std::pow(jet.first_derivative_norm(), mode_.p) * std::pow(h_, n_);
  sup_d2_ = std::max(sup_d2_, jet.second_derivative_norm());
}

SmoothnessBounds SmoothnessAccumulator::result() const {
  SmoothnessBounds b;
  if (mode_.type == SmoothnessMode::Type::kLipschitz) {
    b.sup_d1 = sup_d1_;
    b.eps_sup_d2 = eps_ * sup_d2_;
  } else {
    b.sup_d1 = std::pow(lp_sum_, 1.0 / mode_.p);
    b.eps_sup_d2 = std::pow(eps_, 1.0 + n_ / mode_.p) * sup_d2_;
  }
  return b;
}

SmoothnessBounds smoothness_bound_report(const MollifiedMetric& gm, const SmoothnessMode& mode) {
  SmoothnessAccumulator acc(gm.dim(), gm.epsilon(), gm.spacing(), mode);
  if (!gm.has_lattice()) return acc.result();
  geometry::MetricJet jet(gm.dim());
  for (const auto& t : gm.tube_nodes()) {
    gm.node_partials(gm.lattice().multi(t.node), 2, jet);
    acc.add(t.dist, jet);
  }
  return acc.result();
}

}  // namespace lipmass::mollifier
