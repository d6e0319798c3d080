#pragma once

#include "geometry/scalar_field.hpp"
#include "mollifier/kernel.hpp"
#include "singular/singular_set.hpp"

#include <memory>

namespace lipmass::mollifier {

using SingularSetPtr = std::shared_ptr<const singular::SingularSet>;

/// s(d) = eps for d <= 4eps/3, 5eps - 3d in between, 0 for d >= 5eps/3.
double plateau_profile(double d, double eps);

/// x -> plateau_profile(dist(x, S), eps). Continuous and 3-Lipschitz.
class PlateauFunction final : public geometry::ScalarField {
 public:
  PlateauFunction(SingularSetPtr set, double eps);
  int dim() const override { return set_->dim(); }
  double value(const Vec& x) const override { return plateau_profile(set_->distance(x), eps_); }
  double epsilon() const { return eps_; }

 private:
  SingularSetPtr set_;
  double eps_;
};

std::shared_ptr<PlateauFunction> build_plateau(SingularSetPtr set, double eps);

/// sigma_w = s * phi_{eps/6}. Exact values are used where the distance certifies
/// the plateau (d <= 7eps/6) or the zero region (d >= 11eps/6); the band in
/// between is integrated with a masked tensor Gauss-Legendre rule.
class WidthFunction final : public geometry::ScalarField {
 public:
  enum class Region { kPlateau, kBand, kZero };

  WidthFunction(SingularSetPtr set, double eps, const BumpKernel& unit, int order);
  int dim() const override { return set_->dim(); }
  double value(const Vec& x) const override { return value_at(x, set_->distance(x)); }
  /// Same as value() with dist(x, S) already known.
  double value_at(const Vec& x, double dist) const;
  Region region(double dist) const;

  double epsilon() const { return eps_; }
  double plateau_radius() const { return 7.0 * eps_ / 6.0; }
  double zero_radius() const { return 11.0 * eps_ / 6.0; }
  int order() const { return rule_.order; }
  /// Average node spacing of the band rule across the kernel support.
  double resolution() const { return eps_ / (3.0 * rule_.order); }
  const singular::SingularSet& set() const { return *set_; }
  SingularSetPtr set_ptr() const { return set_; }

 private:
  SingularSetPtr set_;
  double eps_;
  BallQuadrature rule_;
};

/// Throws Error(kNumerical) when the band rule is coarser than eps/60.
std::shared_ptr<WidthFunction> build_width(SingularSetPtr set, double eps, const BumpKernel& unit, int order = 20);

}  // namespace lipmass::mollifier
