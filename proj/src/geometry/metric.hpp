#pragma once

#include "common/types.hpp"
#include "geometry/scalar_field.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace lipmass::geometry {

/// Asymptotic-flatness decay orders: g - delta = O(|x|^-decay_order) and
/// R = O(|x|^-curvature_decay_order). Validated against (n-2)/2 and n.
class DecayProfile {
 public:
  DecayProfile() = default;
  DecayProfile(int n, double decay_order, double curvature_decay_order);
  /// Profile for metrics that are exactly flat outside a compact set.
  static DecayProfile compact(int n);

  double decay_order() const { return decay_order_; }
  double curvature_decay_order() const { return curvature_decay_order_; }

 private:
  double decay_order_ = 0.0;
  double curvature_decay_order_ = 0.0;
};

/// Metric components with first and second coordinate partials at one point.
/// Index convention: dg(i, j, k) = d_k g_ij, ddg(i, j, k, l) = d_k d_l g_ij.
class MetricJet {
 public:
  explicit MetricJet(int n = 3);
  int dim() const { return n_; }
  int order = 0;

  double& g(int i, int j) { return g_[i * n_ + j]; }
  double g(int i, int j) const { return g_[i * n_ + j]; }
  double& dg(int i, int j, int k) { return dg_[(i * n_ + j) * n_ + k]; }
  double dg(int i, int j, int k) const { return dg_[(i * n_ + j) * n_ + k]; }
  double& ddg(int i, int j, int k, int l) { return ddg_[((i * n_ + j) * n_ + k) * n_ + l]; }
  double ddg(int i, int j, int k, int l) const { return ddg_[((i * n_ + j) * n_ + k) * n_ + l]; }

  Mat metric() const;
  void set_metric(const Mat& g);
  void zero_derivatives();
  /// Euclidean norm over all (i,j,k) of d_k g_ij.
  double first_derivative_norm() const;
  /// Euclidean norm over all (i,j,k,l) of d_k d_l g_ij.
  double second_derivative_norm() const;

 private:
  int n_;
  std::vector<double> g_, dg_, ddg_;
};

/// A Riemannian metric on a coordinate chart of R^n.
class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual int dim() const = 0;

  /// g_ij(x); throws Error(kDomain) outside the field's domain.
  virtual void metric_at(const Vec& x, Mat& out) const = 0;
  Mat metric_at(const Vec& x) const {
    Mat m;
    metric_at(x, m);
    return m;
  }

  /// Fills the jet up to `order` (1 or 2). The default uses centered finite
  /// differences of metric_at with `fd_step()`.
  virtual void partials(const Vec& x, int order, MetricJet& jet) const;
  virtual bool has_analytic_partials() const { return false; }
  virtual double fd_step() const { return 1e-4; }

  /// Conformally flat fast path: when isotropic(), g = factor(x) * delta.
  virtual bool isotropic() const { return false; }
  virtual double isotropic_factor(const Vec& x) const;

  const DecayProfile& decay() const { return decay_; }
  void set_decay(const DecayProfile& d) { decay_ = d; }
  /// Sup of componentwise difference quotients; nullopt when not Lipschitz.
  std::optional<double> lipschitz_constant() const { return lipschitz_; }
  void set_lipschitz_constant(std::optional<double> c) { lipschitz_ = c; }

 protected:
  DecayProfile decay_;
  std::optional<double> lipschitz_;
};

using MetricFieldPtr = std::shared_ptr<const MetricField>;

/// Checks symmetry and positive definiteness; throws Error(kNumerical) otherwise.
void validate_form(const Mat& g, const char* where);

/// Centered finite-difference jet of an arbitrary metric callable.
void fd_partials(const std::function<void(const Vec&, Mat&)>& metric, const Vec& x, int order,
                 double step, MetricJet& jet);

/// g = F(x) delta with F a positive scalar field.
class IsotropicMetric final : public MetricField {
 public:
  explicit IsotropicMetric(ScalarFieldPtr factor);
  int dim() const override { return factor_->dim(); }
  using MetricField::metric_at;
  void metric_at(const Vec& x, Mat& out) const override;
  void partials(const Vec& x, int order, MetricJet& jet) const override;
  bool has_analytic_partials() const override { return factor_->has_derivatives(); }
  bool isotropic() const override { return true; }
  double isotropic_factor(const Vec& x) const override;
  const ScalarField& factor() const { return *factor_; }

 private:
  ScalarFieldPtr factor_;
};

/// g = w^{4/(n-2)} delta.
std::shared_ptr<IsotropicMetric> conformally_flat(ScalarFieldPtr w);

/// Flat metric delta_ij.
std::shared_ptr<IsotropicMetric> flat_metric(int n);

/// Closed form given by callables; analytic partial callables are optional.
class FunctionMetric final : public MetricField {
 public:
  using MetricFn = std::function<void(const Vec&, Mat&)>;
  using JetFn = std::function<void(const Vec&, int, MetricJet&)>;
  FunctionMetric(int n, MetricFn metric, JetFn analytic_partials = {});
  int dim() const override { return n_; }
  using MetricField::metric_at;
  void metric_at(const Vec& x, Mat& out) const override;
  void partials(const Vec& x, int order, MetricJet& jet) const override;
  bool has_analytic_partials() const override { return static_cast<bool>(jet_); }

 private:
  int n_;
  MetricFn metric_;
  JetFn jet_;
};

/// g_hat = u^{power} * base, with u a positive scalar field. Used for conformal
/// corrections; partials use the product rule when both inputs provide them.
class ConformallyScaledMetric final : public MetricField {
 public:
  ConformallyScaledMetric(MetricFieldPtr base, ScalarFieldPtr u, double power);
  int dim() const override { return base_->dim(); }
  using MetricField::metric_at;
  void metric_at(const Vec& x, Mat& out) const override;
  void partials(const Vec& x, int order, MetricJet& jet) const override;
  bool has_analytic_partials() const override { return true; }
  bool isotropic() const override { return base_->isotropic(); }
  double isotropic_factor(const Vec& x) const override;

 private:
  MetricFieldPtr base_;
  ScalarFieldPtr u_;
  double power_;
};

}  // namespace lipmass::geometry
