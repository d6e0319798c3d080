#pragma once

#include "geometry/curvature.hpp"
#include "geometry/metric.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace lipmass::geometry {

/// Uniform lattice lower + h * i, i_k in [0, dims_k). Node order is row-major
/// (the last axis varies fastest).
class Lattice {
 public:
  Lattice() = default;
  Lattice(Vec lower, double h, const std::vector<std::int64_t>& dims);
  /// Smallest lattice with nodes at integer multiples of h covering [lo, hi].
  static Lattice covering(const Vec& lo, const Vec& hi, double h);
  /// Lattice from box corners; (upper - lower)/h must be integral.
  static Lattice from_box(const Vec& lower, const Vec& upper, double h);

  int dim() const { return n_; }
  double spacing() const { return h_; }
  const Vec& lower() const { return lower_; }
  Vec upper() const;
  std::int64_t extent(int k) const { return dims_[k]; }
  std::int64_t size() const { return size_; }

  std::int64_t linear(const Index& idx) const {
    std::int64_t lin = 0;
    for (int k = 0; k < n_; ++k) lin += idx[k] * strides_[k];
    return lin;
  }
  Index multi(std::int64_t lin) const {
    Index idx{};
    for (int k = 0; k < n_; ++k) {
      idx[k] = lin / strides_[k];
      lin -= idx[k] * strides_[k];
    }
    return idx;
  }
  std::int64_t stride(int k) const { return strides_[k]; }
  Vec position(const Index& idx) const {
    Vec x(n_);
    for (int k = 0; k < n_; ++k) x[k] = lower_[k] + h_ * static_cast<double>(idx[k]);
    return x;
  }
  bool contains(const Index& idx) const {
    for (int k = 0; k < n_; ++k)
      if (idx[k] < 0 || idx[k] >= dims_[k]) return false;
    return true;
  }
  /// True when every node of the stencil of radius `r` around idx exists.
  bool interior(const Index& idx, int r = 1) const {
    for (int k = 0; k < n_; ++k)
      if (idx[k] < r || idx[k] >= dims_[k] - r) return false;
    return true;
  }
  bool covers(const Vec& x) const;
  /// Cell containing x (lower corner index) and local coordinates in [0,1].
  void locate(const Vec& x, Index& cell, Vec& t) const;
  /// Exact lattice node at x, if x coincides (within 1e-9 h) with one.
  bool node_at(const Vec& x, Index& idx) const;

 private:
  int n_ = 0;
  Vec lower_;
  double h_ = 0.0;
  std::array<std::int64_t, kMaxDim> dims_{};
  std::array<std::int64_t, kMaxDim> strides_{};
  std::int64_t size_ = 0;
};

/// Second-order centered lattice stencil for the metric jet at node idx.
/// node(idx, out) must fill the metric at any node within distance 1 (including
/// diagonal neighbours used by the mixed partials).
template <class NodeFn>
void lattice_jet(const Lattice& lat, const Index& idx, int order, NodeFn&& node, MetricJet& jet) {
  const int n = lat.dim();
  const double h = lat.spacing();
  require(lat.interior(idx, 1), ErrorCode::kDomain, "lattice stencil exits the lattice");
  Mat g0, gp, gm, g1;
  node(idx, g0);
  jet.set_metric(g0);
  jet.zero_derivatives();
  jet.order = order;
  Index nb = idx;
  for (int k = 0; k < n; ++k) {
    nb[k] = idx[k] + 1;
    node(nb, gp);
    nb[k] = idx[k] - 1;
    node(nb, gm);
    nb[k] = idx[k];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        jet.dg(i, j, k) = jet.dg(j, i, k) = (gp(i, j) - gm(i, j)) / (2.0 * h);
        if (order >= 2)
          jet.ddg(i, j, k, k) = jet.ddg(j, i, k, k) = (gp(i, j) - 2.0 * g0(i, j) + gm(i, j)) / (h * h);
      }
  }
  if (order < 2) return;
  Mat acc;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      acc = Mat::Zero(n, n);
      for (int sk : {1, -1})
        for (int sl : {1, -1}) {
          nb[k] = idx[k] + sk;
          nb[l] = idx[l] + sl;
          node(nb, g1);
          acc += static_cast<double>(sk * sl) * g1;
        }
      nb[k] = idx[k];
      nb[l] = idx[l];
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const double v = acc(i, j) / (4.0 * h * h);
          jet.ddg(i, j, k, l) = jet.ddg(i, j, l, k) = jet.ddg(j, i, k, l) = jet.ddg(j, i, l, k) = v;
        }
    }
}

/// Multilinear interpolation weights of the 2^n corners of the cell at `cell`.
/// Calls fn(corner_index, weight) for each corner with nonzero weight.
template <class Fn>
void for_each_corner(const Lattice& lat, const Index& cell, const Vec& t, Fn&& fn) {
  const int n = lat.dim();
  for (int mask = 0; mask < (1 << n); ++mask) {
    double w = 1.0;
    Index c = cell;
    for (int k = 0; k < n; ++k) {
      const bool up = (mask >> k) & 1;
      w *= up ? t[k] : 1.0 - t[k];
      c[k] += up ? 1 : 0;
    }
    if (w != 0.0) fn(c, w);
  }
}

/// Grid-sampled metric on a uniform lattice. Values between nodes are
/// multilinear; partials come from the lattice stencil at nodes (then
/// interpolated), never from differentiating the interpolant.
class LatticeMetric final : public MetricField {
 public:
  /// `components` holds n*n entries per node, row-major nodes, g_11, g_12, ..., g_nn.
  LatticeMetric(Lattice lattice, std::vector<double> components);
  /// Samples `source` at every node of `lattice`.
  static std::shared_ptr<LatticeMetric> sample(const MetricField& source, const Lattice& lattice);

  int dim() const override { return lattice_.dim(); }
  const Lattice& lattice() const { return lattice_; }
  const std::vector<double>& components() const { return data_; }
  void node_metric(const Index& idx, Mat& out) const;
  using MetricField::metric_at;
  void metric_at(const Vec& x, Mat& out) const override;
  void partials(const Vec& x, int order, MetricJet& jet) const override;
  void node_partials(const Index& idx, int order, MetricJet& jet) const;

 private:
  Lattice lattice_;
  std::vector<double> data_;
};

}  // namespace lipmass::geometry
