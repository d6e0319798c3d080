#pragma once

#include "common/types.hpp"

#include <string>
#include <vector>

namespace lipmass::mollifier {

/// phi_delta(x) = delta^{-n} c exp(-1/(1 - |x/delta|^2)) on |x| < delta.
class BumpKernel {
 public:
  /// Normalizes by a radial Gauss-Legendre rule and cross-checks the constant
  /// with an independent composite Simpson rule; throws when they differ by
  /// more than 1e-8 relative.
  explicit BumpKernel(int n, double delta = 1.0);

  int dim() const { return n_; }
  double delta() const { return delta_; }
  double support_radius() const { return delta_; }
  /// c, the constant making the unit-width kernel integrate to one.
  double normalization() const { return c_; }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// Unnormalized radial profile exp(-1/(1 - r^2)) for r < 1, else 0.
  static double profile(double r);
  /// Integral of phi_delta over R^n by the radial rule (1 up to rounding).
  double integral() const;
  static std::string id() { return "radial-exp-bump"; }

 private:
  int n_;
  double delta_;
  double c_;
};

/// phi_delta from a kernel of any width.
BumpKernel rescale_kernel(const BumpKernel& phi, double delta);

/// Tensor Gauss-Legendre nodes of [-1,1]^n masked to |y| < 1, weighted by the
/// unit kernel and renormalized to sum to one. The rule is symmetric under
/// y -> -y, so constants are reproduced exactly and affine functions up to rounding.
struct BallQuadrature {
  int dim = 3;
  int order = 8;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  /// Raw kernel mass seen by the masked rule before renormalization.
  double raw_mass = 0.0;
};

BallQuadrature ball_quadrature(const BumpKernel& unit, int order);

}  // namespace lipmass::mollifier
