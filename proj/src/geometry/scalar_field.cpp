#include "geometry/scalar_field.hpp"

#include <cmath>

namespace lipmass::geometry {

void ScalarField::gradient(const Vec&, Vec&) const {
  throw Error(ErrorCode::kUnsupported, "scalar field has no analytic gradient");
}

void ScalarField::hessian(const Vec&, Mat&) const {
  throw Error(ErrorCode::kUnsupported, "scalar field has no analytic Hessian");
}

RadialField::RadialField(int n, Vec center, Profile profile)
    : n_(n), center_(std::move(center)), profile_(std::move(profile)) {
  check_dimension(n);
  require(center_.size() == n, ErrorCode::kInvalidArgument, "radial field center has wrong dimension");
}

double RadialField::value(const Vec& x) const { return profile_((x - center_).norm()).f; }

void RadialField::gradient(const Vec& x, Vec& out) const {
  const Vec d = x - center_;
  const double r = d.norm();
  if (r == 0.0) {
    out = Vec::Zero(n_);
    return;
  }
  out = (profile_(r).df / r) * d;
}

void RadialField::hessian(const Vec& x, Mat& out) const {
  const Vec d = x - center_;
  const double r = d.norm();
  out = Mat::Zero(n_, n_);
  if (r == 0.0) return;
  const RadialJet j = profile_(r);
  const Vec u = d / r;
  out = (j.d2f - j.df / r) * (u * u.transpose());
  out.diagonal().array() += j.df / r;
}

PowerField::PowerField(ScalarFieldPtr base, double power) : base_(std::move(base)), power_(power) {
  require(base_ != nullptr, ErrorCode::kInvalidArgument, "power field needs a base field");
}

double PowerField::value(const Vec& x) const { return std::pow(base_->value(x), power_); }

void PowerField::gradient(const Vec& x, Vec& out) const {
  const double w = base_->value(x);
  base_->gradient(x, out);
  out *= power_ * std::pow(w, power_ - 1.0);
}

void PowerField::hessian(const Vec& x, Mat& out) const {
  const double w = base_->value(x);
  Vec g;
  base_->gradient(x, g);
  base_->hessian(x, out);
  out *= power_ * std::pow(w, power_ - 1.0);
  out += power_ * (power_ - 1.0) * std::pow(w, power_ - 2.0) * (g * g.transpose());
}

FunctionField::FunctionField(int n, ValueFn value, GradFn grad, HessFn hess)
    : n_(n), value_(std::move(value)), grad_(std::move(grad)), hess_(std::move(hess)) {}

void FunctionField::gradient(const Vec& x, Vec& out) const {
  if (!grad_) ScalarField::gradient(x, out);
  grad_(x, out);
}

void FunctionField::hessian(const Vec& x, Mat& out) const {
  if (!hess_) ScalarField::hessian(x, out);
  hess_(x, out);
}

void fd_gradient(const ScalarField& f, const Vec& x, double step, Vec& out) {
  const int n = static_cast<int>(x.size());
  out.resize(n);
  Vec y = x;
  for (int k = 0; k < n; ++k) {
    y[k] = x[k] + step;
    const double fp = f.value(y);
    y[k] = x[k] - step;
    const double fm = f.value(y);
    y[k] = x[k];
    out[k] = (fp - fm) / (2.0 * step);
  }
}

void fd_hessian(const ScalarField& f, const Vec& x, double step, Mat& out) {
  const int n = static_cast<int>(x.size());
  out.resize(n, n);
  const double f0 = f.value(x);
  Vec y = x;
  for (int k = 0; k < n; ++k) {
    y[k] = x[k] + step;
    const double fp = f.value(y);
    y[k] = x[k] - step;
    const double fm = f.value(y);
    y[k] = x[k];
    out(k, k) = (fp - 2.0 * f0 + fm) / (step * step);
    for (int l = k + 1; l < n; ++l) {
      double acc = 0.0;
      for (int sk : {1, -1})
        for (int sl : {1, -1}) {
          y[k] = x[k] + sk * step;
          y[l] = x[l] + sl * step;
          acc += sk * sl * f.value(y);
        }
      y[k] = x[k];
      y[l] = x[l];
      out(k, l) = out(l, k) = acc / (4.0 * step * step);
    }
  }
}

}  // namespace lipmass::geometry
