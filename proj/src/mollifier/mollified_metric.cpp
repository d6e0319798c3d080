#include "mollifier/mollified_metric.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <limits>

namespace lipmass::mollifier {

using geometry::Lattice;
using geometry::MetricJet;

MollifiedScalar::MollifiedScalar(geometry::ScalarFieldPtr f, WidthPtr width, const BumpKernel& unit, int order)
    : f_(std::move(f)), width_(std::move(width)), rule_(ball_quadrature(unit, order)) {
  require(f_ && width_ && f_->dim() == width_->dim(), ErrorCode::kInvalidArgument,
          "mollify_scalar inputs disagree in dimension");
}

double MollifiedScalar::value(const Vec& x) const {
  const double sigma = width_->value(x);
  if (sigma == 0.0) return f_->value(x);
  double s = 0.0;
  Vec z(x.size());
  for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
    z = x - sigma * rule_.nodes[i];
    s += rule_.weights[i] * f_->value(z);
  }
  return s;
}

std::shared_ptr<MollifiedScalar> mollify_scalar(geometry::ScalarFieldPtr f, WidthPtr width, const BumpKernel& unit,
                                                int order) {
  return std::make_shared<MollifiedScalar>(std::move(f), std::move(width), unit, order);
}

MollifiedMetric::MollifiedMetric(geometry::MetricFieldPtr source, WidthPtr width, const BumpKernel& unit,
                                 const MollifyOptions& options)
    : source_(std::move(source)), width_(std::move(width)) {
  require(source_ && width_, ErrorCode::kInvalidArgument, "mollify_metric needs a source and a width function");
  const int n = source_->dim();
  require(width_->dim() == n && unit.dim() == n, ErrorCode::kInvalidArgument,
          "mollify_metric inputs disagree in dimension");
  rule_ = ball_quadrature(unit, options.quadrature_order);
  const double eps = width_->epsilon();
  h_ = options.spacing ? *options.spacing : eps / options.h_over_eps;
  require(h_ > 0.0 && std::isfinite(h_), ErrorCode::kInvalidArgument, "lattice spacing must be positive");
  require(h_ <= eps / 8.0 * (1.0 + 1e-12), ErrorCode::kInvalidArgument,
          "lattice spacing must satisfy h <= eps/8 to resolve the smoothing scale");
  require(options.margin_nodes >= 1, ErrorCode::kInvalidArgument, "margin_nodes must be >= 1");
  set_decay(source_->decay());
  set_lipschitz_constant(source_->lipschitz_constant());
  components_ = source_->isotropic() ? 1 : n * (n + 1) / 2;
  const auto& set = width_->set();
  if (set.empty()) return;

  Vec lo, hi;
  set.bounds(lo, hi);
  const double pad = 2.0 * eps + options.margin_nodes * h_;
  lattice_ = Lattice::covering(lo.array() - pad, hi.array() + pad, h_);
  has_lattice_ = true;
  const std::int64_t size = lattice_.size();
  require(size < std::numeric_limits<std::int32_t>::max(), ErrorCode::kInvalidArgument,
          "mollification lattice too large; increase h or shrink the singular set");
  slot_.assign(size, -1);
  dist_.resize(size);

  Index idx{};
  Mat g;
  for (std::int64_t lin = 0; lin < size; ++lin) {
    const Vec x = lattice_.position(idx);
    const double d = set.distance(x);
    dist_[lin] = d;
    if (d < 2.0 * eps) tube_.push_back({lin, d});
    if (d < width_->zero_radius()) {
      const double sigma = width_->value_at(x, d);
      if (sigma > 0.0) {
        slot_[lin] = static_cast<std::int32_t>(width_values_.size());
        width_values_.push_back(sigma);
        if (components_ == 1) {
          const double f = direct_factor(x, sigma);
          require(f > 0.0 && std::isfinite(f), ErrorCode::kNumerical, "mollified metric lost positivity");
          values_.push_back(f);
        } else {
          direct_metric(x, sigma, g);
          geometry::validate_form(g, "mollified metric node");
          for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) values_.push_back(g(i, j));
        }
      }
    }
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < lattice_.extent(k)) break;
      idx[k] = 0;
    }
  }
}

double MollifiedMetric::direct_factor(const Vec& x, double sigma) const {
  double s = 0.0;
  Vec z(x.size());
  for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
    z = x - sigma * rule_.nodes[i];
    s += rule_.weights[i] * source_->isotropic_factor(z);
  }
  return s;
}

void MollifiedMetric::direct_metric(const Vec& x, double sigma, Mat& out) const {
  const int n = dim();
  out = Mat::Zero(n, n);
  Mat g;
  Vec z(n);
  for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
    z = x - sigma * rule_.nodes[i];
    source_->metric_at(z, g);
    out += rule_.weights[i] * g;
  }
}

void MollifiedMetric::direct_value(const Vec& x, Mat& out) const {
  const double sigma = width_->value(x);
  if (sigma == 0.0) {
    source_->metric_at(x, out);
    return;
  }
  if (components_ == 1) {
    out = direct_factor(x, sigma) * Mat::Identity(dim(), dim());
  } else {
    direct_metric(x, sigma, out);
  }
}

void MollifiedMetric::node_metric(const Index& idx, Mat& out) const {
  const int n = dim();
  const std::int32_t s = slot_[lattice_.linear(idx)];
  if (s < 0) {
    source_->metric_at(lattice_.position(idx), out);
    return;
  }
  if (components_ == 1) {
    out = values_[s] * Mat::Identity(n, n);
    return;
  }
  out.resize(n, n);
  const double* v = &values_[static_cast<std::size_t>(s) * components_];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out(i, j) = out(j, i) = *v++;
}

void MollifiedMetric::node_partials(const Index& idx, int order, MetricJet& jet) const {
  geometry::lattice_jet(lattice_, idx, order, [this](const Index& i, Mat& out) { node_metric(i, out); }, jet);
}

void MollifiedMetric::metric_at(const Vec& x, Mat& out) const {
  if (!has_lattice_) {
    source_->metric_at(x, out);
    return;
  }
  Index idx{};
  if (lattice_.node_at(x, idx)) {
    node_metric(idx, out);
    return;
  }
  if (width_->set().distance(x) >= width_->zero_radius()) {
    source_->metric_at(x, out);
    return;
  }
  direct_value(x, out);
}

double MollifiedMetric::isotropic_factor(const Vec& x) const {
  require(isotropic(), ErrorCode::kUnsupported, "metric is not isotropic");
  Mat g;
  metric_at(x, g);
  return g(0, 0);
}

void MollifiedMetric::partials(const Vec& x, int order, MetricJet& jet) const {
  if (!has_lattice_) {
    source_->partials(x, order, jet);
    return;
  }
  Index idx{};
  if (lattice_.node_at(x, idx) && lattice_.interior(idx, 1)) {
    node_partials(idx, order, jet);
    return;
  }
  // A finite-difference stencil of step h reaches at most sqrt(2) h from x.
  if (width_->set().distance(x) - 2.0 * h_ >= width_->zero_radius()) {
    source_->partials(x, order, jet);
    return;
  }
  geometry::fd_partials([this](const Vec& y, Mat& out) { metric_at(y, out); }, x, order, h_, jet);
}

double MollifiedMetric::locality_deviation() const {
  if (!has_lattice_) return 0.0;
  const double eps = epsilon();
  double worst = 0.0;
  Mat a, b;
  for (std::int64_t lin = 0; lin < lattice_.size(); ++lin) {
    const double d = dist_[lin];
    if (d <= 2.0 * eps || d >= 2.0 * eps + 4.0 * h_) continue;
    const Vec x = lattice_.position(lattice_.multi(lin));
    node_metric(lattice_.multi(lin), a);
    source_->metric_at(x, b);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    // Recompute through the mollification sum with the certified width.
    const double sigma = width_->value_at(x, d);
    Mat c = Mat::Zero(dim(), dim());
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      source_->metric_at(x - sigma * rule_.nodes[i], a);
      c += rule_.weights[i] * a;
    }
    worst = std::max(worst, (c - b).cwiseAbs().maxCoeff());
  }
  return worst;
}

double MollifiedMetric::min_active_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  if (!has_lattice_) return lo;
  Mat g;
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (std::int64_t lin = 0; lin < lattice_.size(); ++lin) {
    if (slot_[lin] < 0) continue;
    node_metric(lattice_.multi(lin), g);
    if (components_ == 1) {
      lo = std::min(lo, g(0, 0));
    } else {
      eig.compute(g, Eigen::EigenvaluesOnly);
      lo = std::min(lo, eig.eigenvalues()[0]);
    }
  }
  return lo;
}

nlohmann::json MollifiedMetric::metadata() const {
  nlohmann::json j = {{"eps", epsilon()},
                      {"kernel", BumpKernel::id()},
                      {"quadrature_order", rule_.order},
                      {"width_order", width_->order()},
                      {"h", h_},
                      {"singular_set", width_->set().describe()},
                      {"active_nodes", active_nodes()},
                      {"tube_nodes", tube_.size()}};
  if (has_lattice_) {
    nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
    const Vec up = lattice_.upper();
    for (int k = 0; k < dim(); ++k) {
      lo.push_back(lattice_.lower()[k]);
      hi.push_back(up[k]);
    }
    j["box"] = {{"lower", lo}, {"upper", hi}};
  }
  return j;
}

void MollifiedMetric::dump(const std::string& path, geometry::LatticeFormat format) const {
  require(has_lattice_, ErrorCode::kInvalidArgument, "no lattice to dump: the singular set is empty");
  const int n = dim();
  std::vector<double> data(static_cast<std::size_t>(lattice_.size() * n * n));
  Mat g;
  for (std::int64_t lin = 0; lin < lattice_.size(); ++lin) {
    node_metric(lattice_.multi(lin), g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) data[lin * n * n + i * n + j] = g(i, j);
  }
  geometry::write_lattice_file(path, geometry::LatticeMetric(lattice_, std::move(data)), format);
  std::ofstream meta(path + ".json");
  require(static_cast<bool>(meta), ErrorCode::kIo, "cannot write " + path + ".json");
  meta << metadata().dump(2) << "\n";
}

std::shared_ptr<MollifiedMetric> mollify_metric(geometry::MetricFieldPtr g, WidthPtr width, const BumpKernel& unit,
                                                const MollifyOptions& options) {
  return std::make_shared<MollifiedMetric>(std::move(g), std::move(width), unit, options);
}

}  // namespace lipmass::mollifier
