#include "geometry/metric.hpp"

#include <cmath>
#include <limits>

namespace lipmass::geometry {

DecayProfile::DecayProfile(int n, double decay_order, double curvature_decay_order)
    : decay_order_(decay_order), curvature_decay_order_(curvature_decay_order) {
  check_dimension(n);
  require(decay_order > 0.5 * (n - 2), ErrorCode::kValidation,
          "decay order must exceed (n-2)/2 = " + std::to_string(0.5 * (n - 2)));
  require(curvature_decay_order > n, ErrorCode::kValidation,
          "curvature decay order must exceed n = " + std::to_string(n));
}

DecayProfile DecayProfile::compact(int n) {
  const double inf = std::numeric_limits<double>::infinity();
  return DecayProfile(n, inf, inf);
}

MetricJet::MetricJet(int n)
    : n_(n), g_(n * n, 0.0), dg_(n * n * n, 0.0), ddg_(n * n * n * n, 0.0) {}

Mat MetricJet::metric() const {
  Mat m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = g(i, j);
  return m;
}

void MetricJet::set_metric(const Mat& m) {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g(i, j) = m(i, j);
}

void MetricJet::zero_derivatives() {
  std::fill(dg_.begin(), dg_.end(), 0.0);
  std::fill(ddg_.begin(), ddg_.end(), 0.0);
}

double MetricJet::first_derivative_norm() const {
  double s = 0.0;
  for (double v : dg_) s += v * v;
  return std::sqrt(s);
}

double MetricJet::second_derivative_norm() const {
  double s = 0.0;
  for (double v : ddg_) s += v * v;
  return std::sqrt(s);
}

double MetricField::isotropic_factor(const Vec&) const {
  throw Error(ErrorCode::kUnsupported, "metric is not isotropic");
}

void MetricField::partials(const Vec& x, int order, MetricJet& jet) const {
  fd_partials([this](const Vec& y, Mat& out) { metric_at(y, out); }, x, order, fd_step(), jet);
}

void validate_form(const Mat& g, const char* where) {
  const int n = static_cast<int>(g.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      require(std::isfinite(g(i, j)), ErrorCode::kNumerical,
              std::string(where) + ": non-finite metric entry");
  require((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()),
          ErrorCode::kNumerical, std::string(where) + ": metric is not symmetric");
  Eigen::LLT<Mat> llt(g);
  require(llt.info() == Eigen::Success, ErrorCode::kNumerical,
          std::string(where) + ": metric is not positive definite");
}

void fd_partials(const std::function<void(const Vec&, Mat&)>& metric, const Vec& x, int order,
                 double step, MetricJet& jet) {
  require(order == 1 || order == 2, ErrorCode::kInvalidArgument, "partials order must be 1 or 2");
  const int n = jet.dim();
  Mat g0, gp, gm;
  metric(x, g0);
  jet.set_metric(g0);
  jet.zero_derivatives();
  jet.order = order;
  Vec y = x;
  for (int k = 0; k < n; ++k) {
    y[k] = x[k] + step;
    metric(y, gp);
    y[k] = x[k] - step;
    metric(y, gm);
    y[k] = x[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        jet.dg(i, j, k) = (gp(i, j) - gm(i, j)) / (2.0 * step);
        if (order == 2) jet.ddg(i, j, k, k) = (gp(i, j) - 2.0 * g0(i, j) + gm(i, j)) / (step * step);
      }
  }
  if (order < 2) return;
  Mat g1;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      Mat acc = Mat::Zero(n, n);
      for (int sk : {1, -1})
        for (int sl : {1, -1}) {
          y[k] = x[k] + sk * step;
          y[l] = x[l] + sl * step;
          metric(y, g1);
          acc += (sk * sl) * g1;
        }
      y[k] = x[k];
      y[l] = x[l];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          jet.ddg(i, j, k, l) = jet.ddg(i, j, l, k) = acc(i, j) / (4.0 * step * step);
    }
}

IsotropicMetric::IsotropicMetric(ScalarFieldPtr factor) : factor_(std::move(factor)) {
  require(factor_ != nullptr, ErrorCode::kInvalidArgument, "isotropic metric needs a factor");
  check_dimension(factor_->dim());
}

double IsotropicMetric::isotropic_factor(const Vec& x) const {
  const double f = factor_->value(x);
  require(std::isfinite(f), ErrorCode::kNumerical, "metric factor is not finite");
  require(f > 0.0, ErrorCode::kNumerical, "metric factor is not positive");
  return f;
}

void IsotropicMetric::metric_at(const Vec& x, Mat& out) const {
  const int n = dim();
  out = Mat::Identity(n, n) * isotropic_factor(x);
}

void IsotropicMetric::partials(const Vec& x, int order, MetricJet& jet) const {
  if (!factor_->has_derivatives()) {
    MetricField::partials(x, order, jet);
    return;
  }
  require(order == 1 || order == 2, ErrorCode::kInvalidArgument, "partials order must be 1 or 2");
  const int n = dim();
  const double f = isotropic_factor(x);
  Vec grad;
  factor_->gradient(x, grad);
  Mat hess;
  if (order == 2) factor_->hessian(x, hess);
  jet.zero_derivatives();
  jet.order = order;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jet.g(i, j) = (i == j) ? f : 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      jet.dg(i, i, k) = grad[k];
      if (order == 2)
        for (int l = 0; l < n; ++l) jet.ddg(i, i, k, l) = hess(k, l);
    }
}

std::shared_ptr<IsotropicMetric> conformally_flat(ScalarFieldPtr w) {
  const int n = w->dim();
  check_dimension(n);
  return std::make_shared<IsotropicMetric>(std::make_shared<PowerField>(std::move(w), 4.0 / (n - 2)));
}

std::shared_ptr<IsotropicMetric> flat_metric(int n) {
  auto g = std::make_shared<IsotropicMetric>(std::make_shared<ConstantField>(n, 1.0));
  g->set_decay(DecayProfile::compact(n));
  g->set_lipschitz_constant(0.0);
  return g;
}

FunctionMetric::FunctionMetric(int n, MetricFn metric, JetFn analytic_partials)
    : n_(n), metric_(std::move(metric)), jet_(std::move(analytic_partials)) {
  check_dimension(n);
}

void FunctionMetric::metric_at(const Vec& x, Mat& out) const {
  metric_(x, out);
  require(out.rows() == n_ && out.cols() == n_, ErrorCode::kInvalidArgument,
          "metric callable returned wrong shape");
}

void FunctionMetric::partials(const Vec& x, int order, MetricJet& jet) const {
  if (!jet_) {
    MetricField::partials(x, order, jet);
    return;
  }
  jet.zero_derivatives();
  jet_(x, order, jet);
  jet.order = order;
}

ConformallyScaledMetric::ConformallyScaledMetric(MetricFieldPtr base, ScalarFieldPtr u, double power)
    : base_(std::move(base)), u_(std::move(u)), power_(power) {
  require(base_ && u_, ErrorCode::kInvalidArgument, "conformal scaling needs base metric and factor");
  require(u_->has_derivatives(), ErrorCode::kInvalidArgument, "conformal factor needs derivatives");
}

double ConformallyScaledMetric::isotropic_factor(const Vec& x) const {
  return std::pow(u_->value(x), power_) * base_->isotropic_factor(x);
}

void ConformallyScaledMetric::metric_at(const Vec& x, Mat& out) const {
  const double u = u_->value(x);
  require(u > 0.0, ErrorCode::kNumerical, "conformal factor must be positive");
  base_->metric_at(x, out);
  out *= std::pow(u, power_);
}

void ConformallyScaledMetric::partials(const Vec& x, int order, MetricJet& jet) const {
  const int n = dim();
  MetricJet base(n);
  base_->partials(x, order, base);
  const double u = u_->value(x);
  require(u > 0.0, ErrorCode::kNumerical, "conformal factor must be positive");
  Vec du;
  u_->gradient(x, du);
  Mat ddu;
  if (order == 2) u_->hessian(x, ddu);
  // s = u^p, ds = p u^{p-1} du, dds = p u^{p-1} ddu + p(p-1) u^{p-2} du du
  const double s = std::pow(u, power_);
  const Vec ds = power_ * std::pow(u, power_ - 1.0) * du;
  Mat dds;
  if (order == 2)
    dds = power_ * std::pow(u, power_ - 1.0) * ddu +
          power_ * (power_ - 1.0) * std::pow(u, power_ - 2.0) * (du * du.transpose());
  jet.zero_derivatives();
  jet.order = order;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double g = base.g(i, j);
      jet.g(i, j) = s * g;
      for (int k = 0; k < n; ++k) {
        jet.dg(i, j, k) = ds[k] * g + s * base.dg(i, j, k);
        if (order == 2)
          for (int l = 0; l < n; ++l)
            jet.ddg(i, j, k, l) = dds(k, l) * g + ds[k] * base.dg(i, j, l) + ds[l] * base.dg(i, j, k) +
                                  s * base.ddg(i, j, k, l);
      }
    }
}

}  // namespace lipmass::geometry
