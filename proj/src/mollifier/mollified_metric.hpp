#pragma once

#include "geometry/lattice.hpp"
#include "geometry/lattice_io.hpp"
#include "geometry/metric.hpp"
#include "mollifier/width.hpp"

#include <json.hpp>

#include <optional>

namespace lipmass::mollifier {

using WidthPtr = std::shared_ptr<const WidthFunction>;

/// f_eps(x) = sum_i w_i f(x - sigma_w(x) y_i); f itself where sigma_w(x) = 0.
class MollifiedScalar final : public geometry::ScalarField {
 public:
  MollifiedScalar(geometry::ScalarFieldPtr f, WidthPtr width, const BumpKernel& unit, int order);
  int dim() const override { return f_->dim(); }
  double value(const Vec& x) const override;

 private:
  geometry::ScalarFieldPtr f_;
  WidthPtr width_;
  BallQuadrature rule_;
};

std::shared_ptr<MollifiedScalar> mollify_scalar(geometry::ScalarFieldPtr f, WidthPtr width, const BumpKernel& unit,
                                                int order = 8);

struct MollifyOptions {
  int quadrature_order = 8;
  /// Lattice spacing h = eps / h_over_eps unless `spacing` is set.
  double h_over_eps = 8.0;
  std::optional<double> spacing;
  /// Extra nodes beyond the bounding box of S_{2 eps} on every side.
  int margin_nodes = 3;
};

/// Componentwise variable-width mollification of a metric, cached on a lattice
/// aligned to integer multiples of h that covers S_{2 eps}. Nodes with
/// sigma_w > 0 store the mollified value; every other point returns the source
/// exactly. Off-lattice points inside the smoothing region evaluate the
/// mollification sum directly.
class MollifiedMetric final : public geometry::MetricField {
 public:
  struct TubeNode {
    std::int64_t node;
    double dist;
  };

  MollifiedMetric(geometry::MetricFieldPtr source, WidthPtr width, const BumpKernel& unit,
                  const MollifyOptions& options = {});

  int dim() const override { return source_->dim(); }
  using MetricField::metric_at;
  void metric_at(const Vec& x, Mat& out) const override;
  void partials(const Vec& x, int order, geometry::MetricJet& jet) const override;
  bool isotropic() const override { return source_->isotropic(); }
  double isotropic_factor(const Vec& x) const override;
  double fd_step() const override { return h_; }

  const geometry::MetricField& source() const { return *source_; }
  geometry::MetricFieldPtr source_ptr() const { return source_; }
  const WidthFunction& width() const { return *width_; }
  WidthPtr width_ptr() const { return width_; }
  double epsilon() const { return width_->epsilon(); }
  double spacing() const { return h_; }
  int quadrature_order() const { return rule_.order; }
  bool has_lattice() const { return has_lattice_; }
  const geometry::Lattice& lattice() const { return lattice_; }

  /// Distance to S and smoothing state of a lattice node.
  double node_distance(std::int64_t node) const { return dist_[node]; }
  bool node_active(std::int64_t node) const { return slot_[node] >= 0; }
  double node_width(std::int64_t node) const { return slot_[node] >= 0 ? width_values_[slot_[node]] : 0.0; }
  std::int64_t active_nodes() const { return static_cast<std::int64_t>(width_values_.size()); }
  void node_metric(const Index& idx, Mat& out) const;
  /// Lattice-stencil jet at an interior node.
  void node_partials(const Index& idx, int order, geometry::MetricJet& jet) const;
  /// Nodes with dist < 2 eps, in lattice order.
  const std::vector<TubeNode>& tube_nodes() const { return tube_; }

  /// g_eps at an arbitrary point from the mollification sum (no lattice cache).
  void direct_value(const Vec& x, Mat& out) const;
  /// Largest |g_eps - g| component over lattice nodes with 2eps < dist < 2eps + 4h,
  /// with g_eps recomputed from the mollification sum.
  double locality_deviation() const;
  /// Smallest eigenvalue of g_eps over the active nodes.
  double min_active_eigenvalue() const;

  nlohmann::json metadata() const;
  /// Lattice file of g_eps over the whole box plus `<path>.json` metadata.
  void dump(const std::string& path, geometry::LatticeFormat format) const;

 private:
  double direct_factor(const Vec& x, double sigma) const;
  void direct_metric(const Vec& x, double sigma, Mat& out) const;

  geometry::MetricFieldPtr source_;
  WidthPtr width_;
  BallQuadrature rule_;
  double h_ = 0.0;
  bool has_lattice_ = false;
  geometry::Lattice lattice_;
  int components_ = 1;
  std::vector<std::int32_t> slot_;
  std::vector<double> dist_;
  std::vector<double> values_;
  std::vector<double> width_values_;
  std::vector<TubeNode> tube_;
};

std::shared_ptr<MollifiedMetric> mollify_metric(geometry::MetricFieldPtr g, WidthPtr width, const BumpKernel& unit,
                                                const MollifyOptions& options = {});

}  // namespace lipmass::mollifier
