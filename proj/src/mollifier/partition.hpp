#pragma once

#include "geometry/metric.hpp"

#include <vector>

namespace lipmass::mollifier {

/// Axis box U_k with the width of the smooth rise of its raw bump.
struct Chart {
  Vec lower, upper;
  double transition = 0.1;
};

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);

/// psi_k = b_k / sum_j b_j, where b_k is a product of smooth steps rising
/// over `transition` from each face of U_k. Alternatively psi_k can be given
/// directly, in which case their sum is only checked, not enforced.
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(std::vector<Chart> charts);
  PartitionOfUnity(int n, std::vector<geometry::ScalarFieldPtr> weights);

  int dim() const { return n_; }
  std::size_t size() const { return charts_.empty() ? weights_.size() : charts_.size(); }
  /// Fills psi (one entry per chart); throws Error(kDomain) where no chart covers x.
  void weights(const Vec& x, std::vector<double>& psi) const;
  /// |sum_k psi_k(x) - 1|.
  double sum_deviation(const Vec& x) const;

 private:
  double raw(std::size_t k, const Vec& x) const;

  int n_ = 0;
  std::vector<Chart> charts_;
  std::vector<geometry::ScalarFieldPtr> weights_;
};

/// g = sum_k psi_k g_k. Positive definite as a convex combination.
class BlendedMetric final : public geometry::MetricField {
 public:
  BlendedMetric(PartitionOfUnity partition, std::vector<geometry::MetricFieldPtr> parts);
  int dim() const override { return partition_.dim(); }
  using MetricField::metric_at;
  void metric_at(const Vec& x, Mat& out) const override;

 private:
  PartitionOfUnity partition_;
  std::vector<geometry::MetricFieldPtr> parts_;
};

/// Throws Error(kNumerical) at evaluation where the partition sum deviates from 1 by more than 1e-6.
std::shared_ptr<BlendedMetric> blend_patches(PartitionOfUnity partition, std::vector<geometry::MetricFieldPtr> parts);

}  // namespace lipmass::mollifier
