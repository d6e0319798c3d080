#include "common/fit.hpp"

#include "common/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lipmass {

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y,
                                   double floor) {
  require(x.size() == y.size(), ErrorCode::kInvalidArgument, "loglog_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > floor) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::nullopt;
  const double denom = count * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) return std::nullopt;
  return (count * sxy - sx * sy) / denom;
}

namespace {

struct LinearSolve {
  double limit, coefficient, sse;
};

LinearSolve solve_for_order(std::span<const double> x, std::span<const double> y, double q) {
  // y = a + b t with t = x^{-q}
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::pow(x[i], -q);
    st += t;
    sy += y[i];
    stt += t * t;
    sty += t * y[i];
  }
  const double denom = m * stt - st * st;
  LinearSolve out{sy / m, 0.0, 0.0};
  if (std::abs(denom) > 1e-300 * std::max(1.0, m * stt)) {
    out.coefficient = (m * sty - st * sy) / denom;
    out.limit = (sy - out.coefficient * st) / m;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - out.limit - out.coefficient * std::pow(x[i], -q);
    out.sse += r * r;
  }
  return out;
}

}  // namespace

PowerLawFit fit_power_law_limit(std::span<const double> x, std::span<const double> y,
                                double q_min, double q_max) {
  require(x.size() == y.size(), ErrorCode::kInvalidArgument, "power-law fit: size mismatch");
  require(x.size() >= 3, ErrorCode::kInvalidArgument, "power-law fit needs at least 3 points");
  for (std::size_t i = 1; i < x.size(); ++i)
    require(x[i] > x[i - 1] && x[0] > 0.0, ErrorCode::kInvalidArgument,
            "power-law fit abscissae must be positive and strictly increasing");

  const double scale = std::max(1.0, *std::max_element(y.begin(), y.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  }));
  constexpr int kScan = 160;
  double best_q = q_min;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double q = q_min + (q_max - q_min) * i / kScan;
    const double sse = solve_for_order(x, y, q).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_q = q;
    }
  }
  const double step = (q_max - q_min) / kScan;
  double lo = std::max(q_min, best_q - step), hi = std::min(q_max, best_q + step);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - golden * (hi - lo), d = lo + golden * (hi - lo);
  double fc = solve_for_order(x, y, c).sse, fd = solve_for_order(x, y, d).sse;
  for (int iter = 0; iter < 80 && hi - lo > 1e-12; ++iter) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - golden * (hi - lo);
      fc = solve_for_order(x, y, c).sse;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + golden * (hi - lo);
      fd = solve_for_order(x, y, d).sse;
    }
  }
  double q = 0.5 * (lo + hi);
  LinearSolve sol = solve_for_order(x, y, q);
  if (best_sse < sol.sse) {
    q = best_q;
    sol = solve_for_order(x, y, q);
  }
  PowerLawFit fit;
  fit.limit = sol.limit;
  fit.coefficient = sol.coefficient;
  fit.order = q;
  fit.residual = std::sqrt(sol.sse / static_cast<double>(x.size())) / scale;
  return fit;
}

double relative_variation(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (*mx == 0.0 && *mn == 0.0) return 0.0;
  if (*mn <= 0.0) return std::numeric_limits<double>::infinity();
  return (*mx - *mn) / *mn;
}

}  // namespace lipmass
