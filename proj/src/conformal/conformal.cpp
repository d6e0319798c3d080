#include "conformal/conformal.hpp"

#include "geometry/curvature.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>

namespace lipmass::conformal {
namespace {

// Outward coordinates from `start` with spacing h * growth^k capped at `cap`,
// stopping at the first coordinate with |x| >= rho.
std::vector<double> extend(double start, double h, double growth, double cap, double rho, double dir) {
  std::vector<double> out;
  double x = start, s = h;
  while (dir * x < rho) {
    s = std::min(s * growth, cap);
    x += dir * s;
    out.push_back(x);
  }
  return out;
}

std::vector<double> build_axis(const std::vector<double>& core, double h, const ConformalOptions& o) {
  const double cap = std::max(h, o.rho * o.max_spacing_fraction);
  std::vector<double> left = extend(core.front(), h, o.growth, cap, o.rho, -1.0);
  std::vector<double> right = extend(core.back(), h, o.growth, cap, o.rho, 1.0);
  std::vector<double> axis(left.rbegin(), left.rend());
  axis.insert(axis.end(), core.begin(), core.end());
  axis.insert(axis.end(), right.begin(), right.end());
  return axis;
}

// Second-order first and second differences on a nonuniform three-point stencil.
void nonuniform_diff(double fm, double f0, double fp, double hm, double hp, double& d1, double& d2) {
  const double denom = hm * hp * (hm + hp);
  d1 = (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) / denom;
  d2 = 2.0 * (hm * fp - (hm + hp) * f0 + hp * fm) / denom;
}

}  // namespace

std::shared_ptr<NegativePart> negative_part_field(geometry::ScalarFieldPtr r) {
  require(r != nullptr, ErrorCode::kInvalidArgument, "negative part needs a field");
  return std::make_shared<NegativePart>(std::move(r));
}

double ScalarCurvatureField::value(const Vec& x) const { return geometry::scalar_curvature(*g_, x); }

TensorGrid::TensorGrid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
  check_dimension(dim());
  for (int k = dim() - 1; k >= 0; --k) {
    require(axes_[k].size() >= 2, ErrorCode::kInvalidArgument, "tensor grid axis needs at least 2 nodes");
    for (std::size_t i = 1; i < axes_[k].size(); ++i)
      require(axes_[k][i] > axes_[k][i - 1], ErrorCode::kInvalidArgument, "tensor grid axis must increase");
    strides_[k] = size_;
    size_ *= extent(k);
  }
}

Index TensorGrid::multi(std::int64_t lin) const {
  Index idx{};
  for (int k = 0; k < dim(); ++k) {
    idx[k] = lin / strides_[k];
    lin -= idx[k] * strides_[k];
  }
  return idx;
}

std::int64_t TensorGrid::linear(const Index& idx) const {
  std::int64_t lin = 0;
  for (int k = 0; k < dim(); ++k) lin += idx[k] * strides_[k];
  return lin;
}

Vec TensorGrid::position(const Index& idx) const {
  Vec x(dim());
  for (int k = 0; k < dim(); ++k) x[k] = axes_[k][idx[k]];
  return x;
}

bool TensorGrid::locate(const Vec& x, Index& cell, Vec& t) const {
  t.resize(dim());
  for (int k = 0; k < dim(); ++k) {
    const auto& a = axes_[k];
    if (x[k] < a.front() || x[k] > a.back()) return false;
    auto it = std::upper_bound(a.begin(), a.end(), x[k]);
    std::int64_t i = std::clamp<std::int64_t>(it - a.begin() - 1, 0, extent(k) - 2);
    cell[k] = i;
    t[k] = (x[k] - a[i]) / (a[i + 1] - a[i]);
  }
  return true;
}

void ConformalSolve::interpolate(const Vec& x, const std::vector<double>& field, int stride, int offset,
                                 double outside, double& out) const {
  const int n = dim();
  Index cell{};
  Vec t;
  if (x.norm() >= rho_ || !grid_.locate(x, cell, t)) {
    out = outside;
    return;
  }
  out = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double w = 1.0;
    Index c = cell;
    for (int k = 0; k < n; ++k) {
      const bool up = (mask >> k) & 1;
      w *= up ? t[k] : 1.0 - t[k];
      c[k] += up;
    }
    if (w != 0.0) out += w * field[grid_.linear(c) * stride + offset];
  }
}

double ConformalSolve::value(const Vec& x) const {
  double v;
  interpolate(x, u_, 1, 0, 1.0, v);
  return v;
}

void ConformalSolve::gradient(const Vec& x, Vec& out) const {
  const int n = dim();
  out.resize(n);
  for (int k = 0; k < n; ++k) interpolate(x, du_, n, k, 0.0, out[k]);
}

void ConformalSolve::hessian(const Vec& x, Mat& out) const {
  const int n = dim();
  out.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) interpolate(x, ddu_, n * n, k * n + l, 0.0, out(k, l));
}

void ConformalSolve::nodal_derivatives() {
  const int n = dim();
  du_.assign(static_cast<std::size_t>(grid_.size() * n), 0.0);
  ddu_.assign(static_cast<std::size_t>(grid_.size() * n * n), 0.0);
  std::vector<double> first(n);
  for (std::int64_t lin = 0; lin < grid_.size(); ++lin) {
    const Index idx = grid_.multi(lin);
    bool interior = true;
    for (int k = 0; k < n; ++k) interior = interior && idx[k] > 0 && idx[k] + 1 < grid_.extent(k);
    if (!interior) continue;
    for (int k = 0; k < n; ++k) {
      const auto& a = grid_.axis(k);
      const double hm = a[idx[k]] - a[idx[k] - 1], hp = a[idx[k] + 1] - a[idx[k]];
      double d1, d2;
      nonuniform_diff(u_[lin - grid_.stride(k)], u_[lin], u_[lin + grid_.stride(k)], hm, hp, d1, d2);
      du_[lin * n + k] = d1;
      ddu_[(lin * n + k) * n + k] = d2;
    }
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        const auto& ak = grid_.axis(k);
        const auto& al = grid_.axis(l);
        const double dk = ak[idx[k] + 1] - ak[idx[k] - 1], dl = al[idx[l] + 1] - al[idx[l] - 1];
        const std::int64_t sk = grid_.stride(k), sl = grid_.stride(l);
        const double v =
            (u_[lin + sk + sl] - u_[lin + sk - sl] - u_[lin - sk + sl] + u_[lin - sk - sl]) / (dk * dl);
        ddu_[(lin * n + k) * n + l] = ddu_[(lin * n + l) * n + k] = v;
      }
  }
}

std::shared_ptr<ConformalSolve> solve_conformal_factor(const mollifier::MollifiedMetric& gm,
                                                       const geometry::ScalarField& rneg,
                                                       const ConformalOptions& options) {
  const int n = gm.dim();
  const double rho = options.rho;
  const double eps = gm.epsilon();
  const auto& set = gm.width().set();
  require(rho >= set.bounding_radius() + 4.0 * eps, ErrorCode::kInvalidArgument,
          "conformal ball radius must exceed the singular set's bounding radius by 4 eps");
  require(options.growth >= 1.0 && options.growth <= 2.0, ErrorCode::kInvalidArgument,
          "grid growth ratio must lie in [1, 2]");
  require(options.tol > 0.0, ErrorCode::kInvalidArgument, "solver tolerance must be positive");

  // Fine core: the mollification lattice itself, so core nodes coincide exactly.
  std::vector<std::vector<double>> axes(n);
  Index core_offset{};
  double h;
  if (gm.has_lattice()) {
    const auto& lat = gm.lattice();
    h = lat.spacing();
    for (int k = 0; k < n; ++k) {
      std::vector<double> core(lat.extent(k));
      for (std::int64_t i = 0; i < lat.extent(k); ++i) {
        Index idx{};
        idx[k] = i;
        core[i] = lat.position(idx)[k];
      }
      axes[k] = build_axis(core, h, options);
      core_offset[k] = static_cast<std::int64_t>(std::find(axes[k].begin(), axes[k].end(), core.front()) -
                                                 axes[k].begin());
    }
  } else {
    h = rho / 32.0;
    std::vector<double> core;
    for (int i = -4; i <= 4; ++i) core.push_back(i * h);
    for (int k = 0; k < n; ++k) axes[k] = build_axis(core, h, options);
  }
  auto cs = std::shared_ptr<ConformalSolve>(new ConformalSolve(TensorGrid(std::move(axes))));
  cs->rho_ = rho;
  cs->has_core_ = gm.has_lattice();
  cs->core_offset_ = core_offset;
  const TensorGrid& grid = cs->grid_;
  const std::int64_t size = grid.size();
  const double cn = (n - 2.0) / (4.0 * (n - 1.0));

  // Nodal coefficients sqrt(g) g^{kk}, volume factor sqrt(g) and R^-.
  std::vector<double> coef(static_cast<std::size_t>(size * n)), vol(size), rn(size, 0.0);
  std::vector<std::int64_t> unknown(size, -1);
  std::int64_t count = 0;
  Mat g;
  for (std::int64_t lin = 0; lin < size; ++lin) {
    const Index idx = grid.multi(lin);
    const Vec x = grid.position(idx);
    gm.metric_at(x, g);
    const double sq = std::sqrt(g.determinant());
    require(std::isfinite(sq) && sq > 0.0, ErrorCode::kNumerical, "degenerate metric on the conformal grid");
    const Mat ginv = g.inverse();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j)
          require(std::abs(ginv(i, j)) <= 1e-12 * std::abs(ginv(i, i)), ErrorCode::kUnsupported,
                  "the (2n+1)-point conformal stencil requires a diagonal inverse metric");
    for (int k = 0; k < n; ++k) coef[lin * n + k] = sq * ginv(k, k);
    vol[lin] = sq;
    bool interior = x.norm() < rho;
    for (int k = 0; k < n && interior; ++k) interior = idx[k] > 0 && idx[k] + 1 < grid.extent(k);
    if (interior) {
      unknown[lin] = count++;
      rn[lin] = rneg.value(x);
      require(rn[lin] >= 0.0 && std::isfinite(rn[lin]), ErrorCode::kNumerical, "invalid negative-part value");
    }
  }
  cs->unknowns_ = count;

  // Finite-volume assembly of -div(sqrt(g) g^{kk} d_k v) - c_n R^- sqrt(g) v = c_n R^- sqrt(g).
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(count * (2 * n + 1)));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
  std::vector<double> cellvol(count);
  bool any_source = false;
  for (std::int64_t lin = 0; lin < size; ++lin) {
    const std::int64_t row = unknown[lin];
    if (row < 0) continue;
    const Index idx = grid.multi(lin);
    double width[kMaxDim];
    for (int k = 0; k < n; ++k) {
      const auto& a = grid.axis(k);
      width[k] = 0.5 * (a[idx[k] + 1] - a[idx[k] - 1]);
    }
    double volume = 1.0;
    for (int k = 0; k < n; ++k) volume *= width[k];
    cellvol[row] = volume * vol[lin];
    double diag = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto& a = grid.axis(k);
      const double area = volume / width[k];
      for (int side : {-1, 1}) {
        const std::int64_t nb = lin + side * grid.stride(k);
        const double dx = std::abs(a[idx[k] + side] - a[idx[k]]);
        const double t = 0.5 * (coef[lin * n + k] + coef[nb * n + k]) * area / dx;
        diag += t;
        if (unknown[nb] >= 0) trip.emplace_back(row, unknown[nb], -t);
      }
    }
    const double k_term = cn * rn[lin] * vol[lin] * volume;
    if (k_term > 0.0) any_source = true;
    trip.emplace_back(row, row, diag - k_term);
    rhs[row] = k_term;
  }

  Eigen::VectorXd v = Eigen::VectorXd::Zero(count);
  if (any_source) {
    Eigen::SparseMatrix<double> A(count, count);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::NaturalOrdering<int>>>
        cg;
    cg.setTolerance(options.tol);
    cg.setMaxIterations(options.max_iterations);
    cg.compute(A);
    require(cg.info() == Eigen::Success, ErrorCode::kNumerical, "incomplete Cholesky factorization failed");
    v = cg.solve(rhs);
    require(cg.info() == Eigen::Success, ErrorCode::kNumerical, "conformal linear solve did not converge");
    cs->iterations_ = static_cast<int>(cg.iterations());
    const Eigen::VectorXd r = A * v - rhs;
    cs->residual_ = rhs.norm() > 0.0 ? r.norm() / rhs.norm() : r.norm();
    double pw = 0.0;
    for (std::int64_t i = 0; i < count; ++i) pw = std::max(pw, std::abs(r[i]) / cellvol[i]);
    cs->pointwise_ = pw;
  }

  cs->u_.assign(size, 1.0);
  double min_u = std::numeric_limits<double>::infinity();
  for (std::int64_t lin = 0; lin < size; ++lin) {
    if (unknown[lin] >= 0) cs->u_[lin] = 1.0 + v[unknown[lin]];
    min_u = std::min(min_u, cs->u_[lin]);
  }
  cs->min_u_ = min_u;
  require(min_u > 0.0, ErrorCode::kNumerical, "conformal factor is not positive; R^- is too large");

  // Least squares v = A r^{2-n} + B over the annulus rho/4 <= r <= rho/2.
  double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
  std::int64_t m = 0;
  for (std::int64_t lin = 0; lin < size; ++lin) {
    if (unknown[lin] < 0) continue;
    const double r = grid.position(grid.multi(lin)).norm();
    if (r < 0.25 * rho || r > 0.5 * rho) continue;
    const double phi = std::pow(r, 2.0 - n);
    const double val = cs->u_[lin] - 1.0;
    s11 += phi * phi;
    s12 += phi;
    s22 += 1.0;
    t1 += phi * val;
    t2 += val;
    ++m;
  }
  require(m >= 2, ErrorCode::kNumerical, "too few grid nodes in the fitting annulus");
  const double det = s11 * s22 - s12 * s12;
  cs->a_ = det != 0.0 ? (t1 * s22 - s12 * t2) / det : 0.0;
  cs->b_ = det != 0.0 ? (s11 * t2 - s12 * t1) / det : 0.0;
  double sse = 0.0;
  for (std::int64_t lin = 0; lin < size; ++lin) {
    if (unknown[lin] < 0) continue;
    const double r = grid.position(grid.multi(lin)).norm();
    if (r < 0.25 * rho || r > 0.5 * rho) continue;
    const double e = cs->u_[lin] - 1.0 - cs->a_ * std::pow(r, 2.0 - n) - cs->b_;
    sse += e * e;
  }
  cs->fit_residual_ = std::sqrt(sse / m);
  cs->nodal_derivatives();
  return cs;
}

nlohmann::json MassShift::summary() const {
  nlohmann::json worst = nlohmann::json::array();
  for (int k = 0; k < worst_node.size(); ++k) worst.push_back(worst_node[k]);
  return {{"dm", dm},
          {"flux_shift", flux_shift},
          {"cross_check_error", cross_check_error},
          {"annulus_radii", annulus_radii},
          {"worst_corrected_curvature", worst_corrected_curvature},
          {"worst_node", worst},
          {"negative_nodes", negative_nodes},
          {"final_mass", final_mass}};
}

MassShift corrected_metric_and_mass_shift(std::shared_ptr<const mollifier::MollifiedMetric> gm,
                                          std::shared_ptr<const ConformalSolve> cs, double base_mass,
                                          const mass::FluxOptions& flux) {
  require(gm && cs, ErrorCode::kInvalidArgument, "mass shift needs a mollified metric and a conformal solve");
  const int n = gm->dim();
  const double p = cs->exponent();
  MassShift out;
  out.metric = std::make_shared<geometry::ConformallyScaledMetric>(gm, cs, p);
  out.dm = 2.0 * cs->amplitude();

  // R_ghat at lattice nodes where R_{g_eps} < 0; ghat node values use the
  // coincident grid nodes of u.
  out.worst_corrected_curvature = std::numeric_limits<double>::infinity();
  if (gm->has_lattice() && cs->has_core()) {
    const auto& lat = gm->lattice();
    const auto& grid = cs->grid();
    const Index& off = cs->core_offset();
    auto u_at = [&](const Index& idx) {
      Index gi{};
      for (int k = 0; k < n; ++k) gi[k] = idx[k] + off[k];
      return cs->node_value(grid.linear(gi));
    };
    geometry::MetricJet jet(n), hat(n);
    geometry::CurvatureWorkspace ws(n);
    Index idx{};
    for (std::int64_t lin = 0; lin < lat.size(); ++lin) {
      if (lat.interior(idx, 1)) {
        gm->node_partials(idx, 2, jet);
        if (geometry::scalar_curvature_from_jet(jet, ws) < 0.0) {
          geometry::lattice_jet(
              lat, idx, 2,
              [&](const Index& i, Mat& m) {
                gm->node_metric(i, m);
                m *= std::pow(u_at(i), p);
              },
              hat);
          const double rh = geometry::scalar_curvature_from_jet(hat, ws);
          ++out.negative_nodes;
          if (rh < out.worst_corrected_curvature) {
            out.worst_corrected_curvature = rh;
            out.worst_node = lat.position(idx);
          }
        }
      }
      for (int k = n - 1; k >= 0; --k) {
        if (++idx[k] < lat.extent(k)) break;
        idx[k] = 0;
      }
    }
  }
  if (out.negative_nodes == 0) out.worst_corrected_curvature = 0.0;

  const double rho = cs->rho();
  for (int i = 0; i < 4; ++i) out.annulus_radii.push_back(0.25 * rho * std::pow(2.0, i / 3.0));
  const auto hat_mass = mass::adm_mass(*out.metric, out.annulus_radii, flux);
  const auto base = mass::adm_mass(*gm, out.annulus_radii, flux);
  out.flux_shift = hat_mass.mass - base.mass;
  out.cross_check_error = std::abs(out.dm - out.flux_shift) / std::max(std::abs(out.dm), 1e-6);
  out.final_mass = base_mass + out.dm;
  return out;
}

double conformal_mass_shift(geometry::MetricFieldPtr g, geometry::ScalarFieldPtr u, const std::vector<double>& radii,
                            const mass::FluxOptions& flux) {
  const double p = 4.0 / (g->dim() - 2.0);
  geometry::ConformallyScaledMetric hat(g, std::move(u), p);
  return mass::adm_mass(hat, radii, flux).mass - mass::adm_mass(*g, radii, flux).mass;
}

}  // namespace lipmass::conformal
