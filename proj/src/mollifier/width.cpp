#include "mollifier/width.hpp"

#include <algorithm>
#include <cmath>

namespace lipmass::mollifier {

double plateau_profile(double d, double eps) { return std::clamp(5.0 * eps - 3.0 * d, 0.0, eps); }

PlateauFunction::PlateauFunction(SingularSetPtr set, double eps) : set_(std::move(set)), eps_(eps) {
  require(set_ != nullptr, ErrorCode::kInvalidArgument, "plateau needs a singular set");
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::kInvalidArgument, "eps must be positive");
}

std::shared_ptr<PlateauFunction> build_plateau(SingularSetPtr set, double eps) {
  return std::make_shared<PlateauFunction>(std::move(set), eps);
}

WidthFunction::WidthFunction(SingularSetPtr set, double eps, const BumpKernel& unit, int order)
    : set_(std::move(set)), eps_(eps) {
  require(set_ != nullptr, ErrorCode::kInvalidArgument, "width function needs a singular set");
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::kInvalidArgument, "eps must be positive");
  require(unit.dim() == set_->dim(), ErrorCode::kInvalidArgument, "kernel dimension mismatch");
  rule_ = ball_quadrature(unit, order);
  // Scale the unit-ball nodes to the support of phi_{eps/6}.
  for (Vec& y : rule_.nodes) y *= eps / 6.0;
}

WidthFunction::Region WidthFunction::region(double dist) const {
  if (dist <= plateau_radius()) return Region::kPlateau;
  if (dist >= zero_radius()) return Region::kZero;
  return Region::kBand;
}

double WidthFunction::value_at(const Vec& x, double dist) const {
  switch (region(dist)) {
    case Region::kPlateau:
      return eps_;
    case Region::kZero:
      return 0.0;
    case Region::kBand:
      break;
  }
  double s = 0.0;
  Vec z(x.size());
  for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
    z = x - rule_.nodes[i];
    s += rule_.weights[i] * plateau_profile(set_->distance(z), eps_);
  }
  return std::clamp(s, 0.0, eps_);
}

std::shared_ptr<WidthFunction> build_width(SingularSetPtr set, double eps, const BumpKernel& unit, int order) {
  auto w = std::make_shared<WidthFunction>(std::move(set), eps, unit, order);
  require(w->resolution() <= eps / 60.0 * (1.0 + 1e-12), ErrorCode::kNumerical,
          "width quadrature coarser than eps/60; raise kernel.width_order to at least 20");
  return w;
}

}  // namespace lipmass::mollifier
