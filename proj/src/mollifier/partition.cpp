#include "mollifier/partition.hpp"

#include <cmath>

namespace lipmass::mollifier {
namespace {

double rise(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = rise(t), b = rise(1.0 - t);
  return a / (a + b);
}

PartitionOfUnity::PartitionOfUnity(std::vector<Chart> charts) : charts_(std::move(charts)) {
  require(!charts_.empty(), ErrorCode::kInvalidArgument, "partition needs at least one chart");
  n_ = static_cast<int>(charts_.front().lower.size());
  check_dimension(n_);
  for (const Chart& c : charts_) {
    require(c.lower.size() == n_ && c.upper.size() == n_, ErrorCode::kInvalidArgument, "chart dimension mismatch");
    require((c.upper - c.lower).minCoeff() > 2.0 * c.transition && c.transition > 0.0,
            ErrorCode::kInvalidArgument, "chart box must be wider than twice its transition");
  }
}

PartitionOfUnity::PartitionOfUnity(int n, std::vector<geometry::ScalarFieldPtr> weights)
    : n_(n), weights_(std::move(weights)) {
  check_dimension(n);
  require(!weights_.empty(), ErrorCode::kInvalidArgument, "partition needs at least one weight");
  for (const auto& w : weights_)
    require(w && w->dim() == n, ErrorCode::kInvalidArgument, "partition weight dimension mismatch");
}

double PartitionOfUnity::raw(std::size_t k, const Vec& x) const {
  const Chart& c = charts_[k];
  double b = 1.0;
  for (int i = 0; i < n_ && b > 0.0; ++i)
    b *= smooth_step((x[i] - c.lower[i]) / c.transition) * smooth_step((c.upper[i] - x[i]) / c.transition);
  return b;
}

void PartitionOfUnity::weights(const Vec& x, std::vector<double>& psi) const {
  psi.assign(size(), 0.0);
  if (!weights_.empty()) {
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      psi[k] = weights_[k]->value(x);
      require(psi[k] >= 0.0, ErrorCode::kNumerical, "negative partition weight");
    }
    return;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < charts_.size(); ++k) sum += psi[k] = raw(k, x);
  require(sum > 0.0, ErrorCode::kDomain, "point lies outside every chart of the partition");
  for (double& p : psi) p /= sum;
}

double PartitionOfUnity::sum_deviation(const Vec& x) const {
  std::vector<double> psi;
  weights(x, psi);
  double s = 0.0;
  for (double p : psi) s += p;
  return std::abs(s - 1.0);
}

BlendedMetric::BlendedMetric(PartitionOfUnity partition, std::vector<geometry::MetricFieldPtr> parts)
    : partition_(std::move(partition)), parts_(std::move(parts)) {
  require(parts_.size() == partition_.size(), ErrorCode::kInvalidArgument,
          "one metric per chart is required for blending");
  for (const auto& p : parts_)
    require(p && p->dim() == partition_.dim(), ErrorCode::kInvalidArgument, "blended metric dimension mismatch");
}

void BlendedMetric::metric_at(const Vec& x, Mat& out) const {
  std::vector<double> psi;
  partition_.weights(x, psi);
  double sum = 0.0;
  for (double p : psi) sum += p;
  require(std::abs(sum - 1.0) <= 1e-6, ErrorCode::kNumerical, "partition of unity sum deviates from 1 beyond 1e-6");
  const int n = dim();
  if (psi.size() == 1) {
    parts_[0]->metric_at(x, out);
    if (psi[0] != 1.0) out *= psi[0];
    return;
  }
  out = Mat::Zero(n, n);
  Mat g;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (psi[k] == 0.0) continue;
    parts_[k]->metric_at(x, g);
    out += psi[k] * g;
  }
}

std::shared_ptr<BlendedMetric> blend_patches(PartitionOfUnity partition, std::vector<geometry::MetricFieldPtr> parts) {
  return std::make_shared<BlendedMetric>(std::move(partition), std::move(parts));
}

}  // namespace lipmass::mollifier
