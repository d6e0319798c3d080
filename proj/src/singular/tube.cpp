#include "singular/tube.hpp"

#include <cmath>
#include <limits>

namespace lipmass::singular {
namespace {

struct Counter {
  const SingularSet& set;
  const geometry::MetricField* metric;
  double eps;
  int n;
  int levels;        // number of subdivisions below the coarse level
  double fine = 0.0;
  double coarse = 0.0;
  std::int64_t evals = 0;

  double weight(const Vec& c) const {
    if (!metric) return 1.0;
    return std::sqrt(metric->metric_at(c).determinant());
  }

  // Integrates the weight over a cell known to lie inside S_eps. Under a
  // metric measure the cell is refined to the finest level for the midpoint rule.
  double full_cell(const Vec& c, double size, int level) {
    if (!metric || level == levels) return weight(c) * std::pow(size, n);
    double sum = 0.0;
    for_children(c, size, [&](const Vec& cc) { sum += full_cell(cc, size / 2, level + 1); });
    return sum;
  }

  template <class Fn>
  void for_children(const Vec& c, double size, Fn&& fn) const {
    Vec cc(n);
    for (int mask = 0; mask < (1 << n); ++mask) {
      for (int k = 0; k < n; ++k) cc[k] = c[k] + ((mask >> k & 1) ? 0.25 : -0.25) * size;
      fn(cc);
    }
  }

  // Returns this cell's contribution at the finest level; adds the one-level
  // coarser estimate to `coarse` when the cell sits at level levels - 1.
  double visit(const Vec& c, double size, int level) {
    const double d = set.distance(c);
    ++evals;
    const double half_diag = 0.5 * size * std::sqrt(static_cast<double>(n));
    if (d + half_diag < eps) return full_cell(c, size, level);
    if (d - half_diag >= eps) return 0.0;
    if (level == levels) return d < eps ? weight(c) * std::pow(size, n) : 0.0;
    double sum = 0.0;
    for_children(c, size, [&](const Vec& cc) { sum += visit(cc, size / 2, level + 1); });
    if (level == levels - 1) coarse += (d < eps ? weight(c) * std::pow(size, n) : 0.0) - sum;
    return sum;
  }
};

}  // namespace

TubeVolume tube_volume(const SingularSet& s, double eps, const geometry::MetricField* metric,
                       const TubeOptions& options) {
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::kInvalidArgument, "tube radius must be positive");
  const int n = s.dim();
  if (metric) require(metric->dim() == n, ErrorCode::kInvalidArgument, "metric dimension mismatch");
  TubeVolume out;
  if (s.empty()) return out;
  Vec lo, hi;
  s.bounds(lo, hi);
  lo.array() -= eps;
  hi.array() += eps;

  if (options.method == TubeOptions::Method::kMonteCarlo) {
    require(options.samples > 1, ErrorCode::kInvalidArgument, "Monte Carlo tube volume needs samples > 1");
    Rng rng(options.seed);
    const double box = (hi - lo).prod();
    double sum = 0.0, sum2 = 0.0;
    Vec x(n);
    for (std::int64_t i = 0; i < options.samples; ++i) {
      for (int k = 0; k < n; ++k) x[k] = rng.uniform(lo[k], hi[k]);
      double w = 0.0;
      if (s.distance(x) < eps) w = metric ? std::sqrt(metric->metric_at(x).determinant()) : 1.0;
      sum += w;
      sum2 += w * w;
    }
    const double N = static_cast<double>(options.samples);
    const double mean = sum / N;
    out.volume = box * mean;
    out.error = box * std::sqrt(std::max(0.0, sum2 / N - mean * mean) / (N - 1.0));
    out.evaluations = options.samples;
  } else {
    require(options.cell_fraction > 0.0 && options.cell_fraction <= 0.1, ErrorCode::kInvalidArgument,
            "tube cell fraction must lie in (0, 1/10]");
    // Coarse cells of about eps/2, refined by halving until the edge is at most
    // cell_fraction * eps.
    const double coarse = 0.5 * eps;
    int levels = 0;
    while (coarse / std::pow(2.0, levels) > options.cell_fraction * eps * (1 + 1e-12)) ++levels;
    levels = std::max(levels, 1);
    std::vector<std::int64_t> cells(n);
    Vec c0(n);
    for (int k = 0; k < n; ++k) {
      cells[k] = static_cast<std::int64_t>(std::ceil((hi[k] - lo[k]) / coarse));
      // Center the coarse grid on the padded bounding box.
      c0[k] = 0.5 * (lo[k] + hi[k]) - 0.5 * coarse * static_cast<double>(cells[k] - 1);
    }
    Counter counter{s, metric, eps, n, levels};
    std::vector<std::int64_t> idx(n, 0);
    Vec c(n);
    while (true) {
      for (int k = 0; k < n; ++k) c[k] = c0[k] + coarse * static_cast<double>(idx[k]);
      counter.fine += counter.visit(c, coarse, 0);
      int k = n - 1;
      while (k >= 0 && ++idx[k] == cells[k]) idx[k--] = 0;
      if (k < 0) break;
    }
    out.volume = counter.fine;
    out.error = std::abs(counter.coarse);
    out.evaluations = counter.evals;
  }
  require(out.error <= options.rel_tolerance * std::max(out.volume, 1e-300), ErrorCode::kNumerical,
          "tube volume error bound exceeds the requested tolerance");
  return out;
}

MinkowskiStudy minkowski_content(const SingularSet& s, double m, const std::vector<double>& eps_seq,
                                 const TubeOptions& options) {
  const int n = s.dim();
  require(m >= 0.0 && m < n, ErrorCode::kInvalidArgument, "content dimension must satisfy 0 <= m < n");
  require(!eps_seq.empty(), ErrorCode::kInvalidArgument, "content study needs at least one eps");
  for (std::size_t i = 1; i < eps_seq.size(); ++i)
    require(eps_seq[i] < eps_seq[i - 1], ErrorCode::kInvalidArgument, "eps sequence must be strictly decreasing");
  MinkowskiStudy st;
  st.m = m;
  st.normalizer = unit_ball_volume(n - m);
  st.eps = eps_seq;
  double running = std::numeric_limits<double>::infinity();
  for (double eps : eps_seq) {
    TubeVolume v = tube_volume(s, eps, nullptr, options);
    const double ratio = v.volume / (st.normalizer * std::pow(eps, n - m));
    running = std::min(running, ratio);
    st.volumes.push_back(v);
    st.ratios.push_back(ratio);
    st.running_min.push_back(running);
  }
  st.liminf_estimate = running;
  return st;
}

}  // namespace lipmass::singular
