#include "geometry/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace lipmass::geometry {

Lattice::Lattice(Vec lower, double h, const std::vector<std::int64_t>& dims)
    : n_(static_cast<int>(lower.size())), lower_(std::move(lower)), h_(h) {
  check_dimension(n_);
  require(static_cast<int>(dims.size()) == n_, ErrorCode::kInvalidArgument, "lattice dims mismatch");
  require(h > 0.0 && std::isfinite(h), ErrorCode::kInvalidArgument, "lattice spacing must be positive");
  size_ = 1;
  for (int k = n_ - 1; k >= 0; --k) {
    require(dims[k] >= 1, ErrorCode::kInvalidArgument, "lattice extent must be >= 1");
    dims_[k] = dims[k];
    strides_[k] = size_;
    size_ *= dims[k];
  }
}

Lattice Lattice::covering(const Vec& lo, const Vec& hi, double h) {
  const int n = static_cast<int>(lo.size());
  Vec lower(n);
  std::vector<std::int64_t> dims(n);
  for (int k = 0; k < n; ++k) {
    const auto i0 = static_cast<std::int64_t>(std::floor(lo[k] / h));
    const auto i1 = static_cast<std::int64_t>(std::ceil(hi[k] / h));
    lower[k] = static_cast<double>(i0) * h;
    dims[k] = i1 - i0 + 1;
  }
  return Lattice(lower, h, dims);
}

Lattice Lattice::from_box(const Vec& lower, const Vec& upper, double h) {
  const int n = static_cast<int>(lower.size());
  require(upper.size() == n, ErrorCode::kInvalidArgument, "box corners differ in dimension");
  std::vector<std::int64_t> dims(n);
  for (int k = 0; k < n; ++k) {
    const double cells = (upper[k] - lower[k]) / h;
    const double rounded = std::round(cells);
    require(cells >= 0.0 && std::abs(cells - rounded) <= 1e-6 * std::max(1.0, rounded),
            ErrorCode::kInvalidArgument, "box extent is not an integral multiple of the spacing");
    dims[k] = static_cast<std::int64_t>(rounded) + 1;
  }
  return Lattice(lower, h, dims);
}

Vec Lattice::upper() const {
  Vec u(n_);
  for (int k = 0; k < n_; ++k) u[k] = lower_[k] + h_ * static_cast<double>(dims_[k] - 1);
  return u;
}

bool Lattice::covers(const Vec& x) const {
  for (int k = 0; k < n_; ++k) {
    const double t = (x[k] - lower_[k]) / h_;
    if (t < 0.0 || t > static_cast<double>(dims_[k] - 1)) return false;
  }
  return true;
}

void Lattice::locate(const Vec& x, Index& cell, Vec& t) const {
  require(covers(x), ErrorCode::kDomain, "point lies outside the lattice box");
  t.resize(n_);
  for (int k = 0; k < n_; ++k) {
    const double s = (x[k] - lower_[k]) / h_;
    std::int64_t i = static_cast<std::int64_t>(std::floor(s));
    i = std::clamp<std::int64_t>(i, 0, std::max<std::int64_t>(dims_[k] - 2, 0));
    cell[k] = i;
    t[k] = dims_[k] == 1 ? 0.0 : s - static_cast<double>(i);
  }
}

bool Lattice::node_at(const Vec& x, Index& idx) const {
  for (int k = 0; k < n_; ++k) {
    const double s = (x[k] - lower_[k]) / h_;
    const double r = std::round(s);
    if (std::abs(s - r) > 1e-9 || r < 0 || r > static_cast<double>(dims_[k] - 1)) return false;
    idx[k] = static_cast<std::int64_t>(r);
  }
  return true;
}

LatticeMetric::LatticeMetric(Lattice lattice, std::vector<double> components)
    : lattice_(std::move(lattice)), data_(std::move(components)) {
  const int n = lattice_.dim();
  require(data_.size() == static_cast<std::size_t>(lattice_.size() * n * n), ErrorCode::kInvalidArgument,
          "lattice metric component count does not match the lattice");
  for (std::int64_t node = 0; node < lattice_.size(); ++node) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = data_[node * n * n + i * n + j];
    validate_form(g, "lattice metric node");
  }
}

std::shared_ptr<LatticeMetric> LatticeMetric::sample(const MetricField& source, const Lattice& lattice) {
  const int n = lattice.dim();
  require(source.dim() == n, ErrorCode::kInvalidArgument, "source metric dimension mismatch");
  std::vector<double> data(static_cast<std::size_t>(lattice.size() * n * n));
  Mat g;
  for (std::int64_t node = 0; node < lattice.size(); ++node) {
    source.metric_at(lattice.position(lattice.multi(node)), g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) data[node * n * n + i * n + j] = g(i, j);
  }
  return std::make_shared<LatticeMetric>(lattice, std::move(data));
}

void LatticeMetric::node_metric(const Index& idx, Mat& out) const {
  require(lattice_.contains(idx), ErrorCode::kDomain, "lattice node outside the lattice");
  const int n = dim();
  const std::int64_t base = lattice_.linear(idx) * n * n;
  out.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = data_[base + i * n + j];
}

void LatticeMetric::metric_at(const Vec& x, Mat& out) const {
  const int n = dim();
  Index cell{};
  Vec t;
  lattice_.locate(x, cell, t);
  out = Mat::Zero(n, n);
  Mat g;
  for_each_corner(lattice_, cell, t, [&](const Index& c, double w) {
    node_metric(c, g);
    out += w * g;
  });
}

void LatticeMetric::node_partials(const Index& idx, int order, MetricJet& jet) const {
  lattice_jet(lattice_, idx, order, [this](const Index& i, Mat& out) { node_metric(i, out); }, jet);
}

void LatticeMetric::partials(const Vec& x, int order, MetricJet& jet) const {
  const int n = dim();
  Index cell{};
  Vec t;
  lattice_.locate(x, cell, t);
  MetricJet corner(n);
  jet.zero_derivatives();
  jet.order = order;
  Mat g = Mat::Zero(n, n);
  std::vector<double> dg(n * n * n, 0.0), ddg(n * n * n * n, 0.0);
  for_each_corner(lattice_, cell, t, [&](const Index& c, double w) {
    require(lattice_.interior(c, 1), ErrorCode::kDomain, "stencil exits the lattice near this point");
    node_partials(c, order, corner);
    g += w * corner.metric();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          dg[(i * n + j) * n + k] += w * corner.dg(i, j, k);
          if (order >= 2)
            for (int l = 0; l < n; ++l) ddg[((i * n + j) * n + k) * n + l] += w * corner.ddg(i, j, k, l);
        }
  });
  jet.set_metric(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        jet.dg(i, j, k) = dg[(i * n + j) * n + k];
        if (order >= 2)
          for (int l = 0; l < n; ++l) jet.ddg(i, j, k, l) = ddg[((i * n + j) * n + k) * n + l];
      }
}

}  // namespace lipmass::geometry
