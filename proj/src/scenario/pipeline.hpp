#pragma once

#include "geometry/diagnostics.hpp"
#include "mass/decay.hpp"
#include "scenario/config.hpp"

#include <map>

namespace lipmass::scenario {

/// Sampled check of R_g >= 0 off the singular set.
struct HypothesisCheck {
  int samples = 0;
  int skipped = 0;  // too close to S
  int negative = 0;
  double min_curvature = 0.0;
  Vec worst;
  double half_width = 0.0;
  double tolerance = 0.0;
  bool holds = true;
};

struct WidthRow {
  double eps = 0.0;
  bool ok = true;
  std::string error;
  mollifier::WidthBounds bounds;
};

struct ConformalRow {
  double eps = 0.0;
  bool ok = true;
  std::string error;
  double rho = 0.0;
  double amplitude = 0.0;
  double dm = 0.0;
  double flux_shift = 0.0;
  double cross_check_error = 0.0;
  double min_u = 1.0;
  double residual = 0.0;
  double pointwise_residual = 0.0;
  int iterations = 0;
  std::int64_t unknowns = 0;
  double worst_corrected_curvature = 0.0;
  Vec worst_node;
  std::int64_t negative_nodes = 0;
  double final_mass = 0.0;
};

/// Per-row uniform-convergence check: max over active nodes of |g_eps - g|.
struct ConvergenceRow {
  double eps = 0.0;
  double max_node_deviation = 0.0;
  std::optional<double> lipschitz_bound;  // L * eps when the source declares L
};

struct Verdicts {
  mass::Verdict goal;
  mass::Verdict annulus;
  double sup_d1_variation = 0.0;
  double eps_sup_d2_variation = 0.0;
  std::optional<double> width_d2_variation;
  std::optional<double> width_sup_d1;
  std::int64_t width_certificate_violations = 0;
  double max_locality_deviation = 0.0;
  double max_dmass = 0.0;
  std::optional<double> conformal_dm_ratio;  // |dm| last / first
  std::optional<double> conformal_min_u;
  std::optional<double> conformal_worst_curvature;
  std::optional<double> conformal_min_final_mass;
  std::optional<double> conformal_max_cross_check;
};

struct Report {
  ScenarioSpec spec;
  std::string label;
  int singular_dimension = -1;
  HypothesisCheck hypothesis;
  geometry::DecayFitResult decay;
  double equivalence_constant = 1.0;
  mass::ADMMassEstimate source_mass;
  mass::DecayTable table;
  std::vector<WidthRow> width;
  std::vector<ConformalRow> conformal;
  std::vector<ConvergenceRow> convergence;
  Verdicts verdicts;
  /// Wall-clock seconds per stage; excluded from the deterministic outputs.
  std::map<std::string, double> timings;

  bool row_failures() const;
};

Report run_pipeline(const ScenarioSpec& spec);

/// Samples the box [-b, b]^n, skipping points within h.exclusion of S or inside
/// the ball of radius `inner` about the origin.
HypothesisCheck check_nonnegative_curvature(const geometry::MetricField& g, const singular::SingularSet& s,
                                            const HypothesisSpec& h, std::uint64_t seed, double inner = 0.0);

/// "out-of-theorem contrast" when dim S >= n/2.
std::string theorem_label(const singular::SingularSet& s);

struct ContentReport {
  ScenarioSpec spec;
  singular::MinkowskiStudy study;
};

/// Lower Minkowski content study of the spec's singular set.
ContentReport run_content(const ScenarioSpec& spec);

}  // namespace lipmass::scenario
