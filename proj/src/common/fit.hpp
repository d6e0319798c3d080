#pragma once

#include <optional>
#include <span>

namespace lipmass {

/// Least-squares slope of log(y) against log(x). Entries with y <= floor are
/// skipped; returns nullopt when fewer than two usable points remain.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y,
                                   double floor = 0.0);

struct PowerLawFit {
  double limit = 0.0;     // m_inf
  double coefficient = 0.0;
  double order = 0.0;     // q in m_inf + c * x^{-q}
  double residual = 0.0;  // RMS residual of the fit
};

/// Fits y(x) = limit + c * x^{-q} with q free in [q_min, q_max].
/// For each trial q the (limit, c) pair is solved by linear least squares;
/// q minimises the residual (coarse scan, then golden-section refinement).
PowerLawFit fit_power_law_limit(std::span<const double> x, std::span<const double> y,
                                double q_min = 0.05, double q_max = 8.0);

/// Relative spread (max - min) / min across a sequence of positive statistics.
/// All-zero input returns 0; a zero minimum with a positive maximum is infinite.
double relative_variation(std::span<const double> values);

}  // namespace lipmass
