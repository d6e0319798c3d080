#pragma once

#include "common/types.hpp"

#include <functional>
#include <memory>

namespace lipmass::geometry {

/// A real-valued field on a chart of R^n with optional analytic derivatives.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual bool has_derivatives() const { return false; }
  /// Only valid when has_derivatives().
  virtual void gradient(const Vec& x, Vec& out) const;
  virtual void hessian(const Vec& x, Mat& out) const;
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

class ConstantField final : public ScalarField {
 public:
  ConstantField(int n, double c) : n_(n), c_(c) {}
  int dim() const override { return n_; }
  double value(const Vec&) const override { return c_; }
  bool has_derivatives() const override { return true; }
  void gradient(const Vec&, Vec& out) const override { out = Vec::Zero(n_); }
  void hessian(const Vec&, Mat& out) const override { out = Mat::Zero(n_, n_); }

 private:
  int n_;
  double c_;
};

/// Value and first two radial derivatives of a profile f(r).
struct RadialJet {
  double f = 0.0, df = 0.0, d2f = 0.0;
};

/// f(|x - center|) built from a radial profile. Gradient and Hessian follow from
/// f' x^ and f'' x^x^T + (f'/r)(I - x^x^T); at the center they are set to zero.
class RadialField final : public ScalarField {
 public:
  using Profile = std::function<RadialJet(double r)>;
  RadialField(int n, Vec center, Profile profile);
  int dim() const override { return n_; }
  double value(const Vec& x) const override;
  bool has_derivatives() const override { return true; }
  void gradient(const Vec& x, Vec& out) const override;
  void hessian(const Vec& x, Mat& out) const override;
  RadialJet jet(double r) const { return profile_(r); }

 private:
  int n_;
  Vec center_;
  Profile profile_;
};

/// base^power, with the chain rule applied when the base has derivatives.
class PowerField final : public ScalarField {
 public:
  PowerField(ScalarFieldPtr base, double power);
  int dim() const override { return base_->dim(); }
  double value(const Vec& x) const override;
  bool has_derivatives() const override { return base_->has_derivatives(); }
  void gradient(const Vec& x, Vec& out) const override;
  void hessian(const Vec& x, Mat& out) const override;

 private:
  ScalarFieldPtr base_;
  double power_;
};

/// Wraps an arbitrary callable; optional analytic gradient/Hessian callables.
class FunctionField final : public ScalarField {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<void(const Vec&, Vec&)>;
  using HessFn = std::function<void(const Vec&, Mat&)>;
  FunctionField(int n, ValueFn value, GradFn grad = {}, HessFn hess = {});
  int dim() const override { return n_; }
  double value(const Vec& x) const override { return value_(x); }
  bool has_derivatives() const override { return static_cast<bool>(grad_) && static_cast<bool>(hess_); }
  void gradient(const Vec& x, Vec& out) const override;
  void hessian(const Vec& x, Mat& out) const override;

 private:
  int n_;
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
};

/// Centered finite-difference gradient/Hessian of a scalar field.
void fd_gradient(const ScalarField& f, const Vec& x, double step, Vec& out);
void fd_hessian(const ScalarField& f, const Vec& x, double step, Mat& out);

}  // namespace lipmass::geometry
