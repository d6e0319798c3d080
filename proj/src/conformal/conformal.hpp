#pragma once

#include "geometry/metric.hpp"
#include "mass/flux.hpp"
#include "mollifier/mollified_metric.hpp"

#include <json.hpp>

#include <vector>

namespace lipmass::conformal {

/// max(-R(x), 0) of a wrapped field.
class NegativePart final : public geometry::ScalarField {
 public:
  explicit NegativePart(geometry::ScalarFieldPtr r) : r_(std::move(r)) {}
  int dim() const override { return r_->dim(); }
  double value(const Vec& x) const override { return std::max(-r_->value(x), 0.0); }

 private:
  geometry::ScalarFieldPtr r_;
};

std::shared_ptr<NegativePart> negative_part_field(geometry::ScalarFieldPtr r);

/// x -> R_g(x) through MetricField::partials.
class ScalarCurvatureField final : public geometry::ScalarField {
 public:
  explicit ScalarCurvatureField(geometry::MetricFieldPtr g) : g_(std::move(g)) {}
  int dim() const override { return g_->dim(); }
  double value(const Vec& x) const override;

 private:
  geometry::MetricFieldPtr g_;
};

/// Separable grid with per-axis increasing coordinates; row-major node order.
class TensorGrid {
 public:
  explicit TensorGrid(std::vector<std::vector<double>> axes);
  int dim() const { return static_cast<int>(axes_.size()); }
  std::int64_t size() const { return size_; }
  std::int64_t extent(int k) const { return static_cast<std::int64_t>(axes_[k].size()); }
  std::int64_t stride(int k) const { return strides_[k]; }
  const std::vector<double>& axis(int k) const { return axes_[k]; }
  Index multi(std::int64_t lin) const;
  std::int64_t linear(const Index& idx) const;
  Vec position(const Index& idx) const;
  /// Cell containing x and local coordinates in [0,1]; false outside the grid.
  bool locate(const Vec& x, Index& cell, Vec& t) const;

 private:
  std::vector<std::vector<double>> axes_;
  std::array<std::int64_t, kMaxDim> strides_{};
  std::int64_t size_ = 1;
};

struct ConformalOptions {
  double rho = 16.0;
  double tol = 1e-8;       // relative CG residual
  double growth = 1.3;     // geometric spacing ratio outside the fine core
  /// Coarse spacing cap as a fraction of rho.
  double max_spacing_fraction = 1.0 / 16.0;
  int max_iterations = 20000;
};

/// Discrete solution u = 1 + v of Delta_g u + c_n R^- u = 0 on B_rho, u = 1 on the boundary.
/// As a scalar field: multilinear interpolation of nodal values (u = 1 outside
/// B_rho); derivatives interpolate nodal finite differences.
class ConformalSolve final : public geometry::ScalarField {
 public:
  int dim() const override { return grid_.dim(); }
  double value(const Vec& x) const override;
  bool has_derivatives() const override { return true; }
  void gradient(const Vec& x, Vec& out) const override;
  void hessian(const Vec& x, Mat& out) const override;

  const TensorGrid& grid() const { return grid_; }
  double node_value(std::int64_t lin) const { return u_[lin]; }
  double rho() const { return rho_; }
  double amplitude() const { return a_; }  // A in u ~ 1 + A |x|^{2-n} + B
  double offset() const { return b_; }
  double fit_residual() const { return fit_residual_; }
  double residual() const { return residual_; }            // relative CG residual
  double pointwise_residual() const { return pointwise_; } // max |Delta_g u + c_n R^- u|
  double min_u() const { return min_u_; }
  int iterations() const { return iterations_; }
  std::int64_t unknowns() const { return unknowns_; }
  double exponent() const { return 4.0 / (dim() - 2.0); }
  /// Offsets mapping the mollification lattice into this grid (core nodes coincide).
  bool has_core() const { return has_core_; }
  const Index& core_offset() const { return core_offset_; }

 private:
  friend std::shared_ptr<ConformalSolve> solve_conformal_factor(const mollifier::MollifiedMetric&,
                                                               const geometry::ScalarField&,
                                                               const ConformalOptions&);
  ConformalSolve(TensorGrid grid) : grid_(std::move(grid)) {}
  void interpolate(const Vec& x, const std::vector<double>& field, int stride, int offset, double outside,
                   double& out) const;
  void nodal_derivatives();

  TensorGrid grid_;
  std::vector<double> u_;
  std::vector<double> du_;   // n per node
  std::vector<double> ddu_;  // n*n per node
  double rho_ = 0.0, a_ = 0.0, b_ = 0.0, fit_residual_ = 0.0;
  double residual_ = 0.0, pointwise_ = 0.0, min_u_ = 1.0;
  int iterations_ = 0;
  std::int64_t unknowns_ = 0;
  bool has_core_ = false;
  Index core_offset_{};
};

/// Requires rho >= bounding radius of S + 4 eps and a diagonal inverse metric.
std::shared_ptr<ConformalSolve> solve_conformal_factor(const mollifier::MollifiedMetric& gm,
                                                       const geometry::ScalarField& rneg,
                                                       const ConformalOptions& options);

struct MassShift {
  std::shared_ptr<geometry::ConformallyScaledMetric> metric;  // u^{4/(n-2)} g_eps
  double dm = 0.0;              // 2A
  double flux_shift = 0.0;      // adm_mass(g_hat) - adm_mass(g_eps) on the fitting annulus
  double cross_check_error = 0.0;  // |dm - flux_shift| / max(|dm|, 1e-6)
  std::vector<double> annulus_radii;
  double worst_corrected_curvature = 0.0;  // min R_ghat over nodes with R_{g_eps} < 0
  Vec worst_node;
  std::int64_t negative_nodes = 0;
  double final_mass = 0.0;  // adm_mass(g_eps) + dm
  nlohmann::json summary() const;
};

/// Builds g_hat, recomputes R_ghat with the lattice stencil at nodes where
/// R_{g_eps} < 0, and cross-checks 2A against flux-based masses.
MassShift corrected_metric_and_mass_shift(std::shared_ptr<const mollifier::MollifiedMetric> gm,
                                          std::shared_ptr<const ConformalSolve> cs, double base_mass,
                                          const mass::FluxOptions& flux = {});

/// adm_mass(u^{4/(n-2)} g) - adm_mass(g) for a closed-form factor u.
double conformal_mass_shift(geometry::MetricFieldPtr g, geometry::ScalarFieldPtr u, const std::vector<double>& radii,
                            const mass::FluxOptions& flux = {});

}  // namespace lipmass::conformal
