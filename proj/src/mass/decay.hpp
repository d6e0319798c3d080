#pragma once

#include "mass/curvature_integrals.hpp"
#include "mass/flux.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lipmass::mass {

/// CSV column order of a decay table.
inline const std::vector<std::string>& decay_columns() {
  static const std::vector<std::string> cols = {"eps",         "vol_tube", "int_goal",
                                                "int_newgoal_core", "int_newgoal_annulus", "sup_d1",
                                                "eps_sup_d2",  "mass",     "dmass"};
  return cols;
}

struct DecayRow {
  double eps = 0.0;
  double vol_tube = 0.0;
  double int_goal = 0.0;             // over S_{2 eps}
  double int_newgoal_core = 0.0;     // over S_eps
  double int_newgoal_annulus = 0.0;  // over S_{2 eps} \ S_eps
  double sup_d1 = 0.0;
  double eps_sup_d2 = 0.0;
  double mass = 0.0;
  double dmass = 0.0;
  bool ok = true;
  std::string error;
  TubeAnalysis tube;
  double locality_deviation = 0.0;
  double min_eigenvalue = 0.0;
  std::int64_t active_nodes = 0;
  ADMMassEstimate mass_estimate;
};

struct Verdict {
  double ratio = 0.0;  // last / first
  bool decaying = false;
  double threshold = 0.5;
  std::optional<double> rate;  // log-log slope against eps
};

/// Integrals and statistics at or below this level are round-off, not signal.
inline constexpr double kDiscretizationFloor = 1e-10;

/// Decaying iff last/first < threshold; a column entirely at or below `floor`
/// decays vacuously.
Verdict decay_verdict(const std::vector<double>& eps, const std::vector<double>& values, double threshold = 0.5,
                      double floor = kDiscretizationFloor);

struct DecayTable {
  std::vector<DecayRow> rows;
  Verdict goal;     // on int_goal
  Verdict annulus;  // on int_newgoal_annulus
  std::vector<double> column(const std::string& name) const;
};

/// Inputs of one decay study; the singular set and source are shared across rows.
struct DecayStudyInputs {
  geometry::MetricFieldPtr source;
  mollifier::SingularSetPtr set;
  int n = 3;
  std::vector<double> eps;
  mollifier::MollifyOptions mollify;
  int width_order = 20;
  mollifier::SmoothnessMode mode;
  double curvature_exponent = 1.5;
  std::vector<double> flux_radii;
  FluxOptions flux;
  double fit_tolerance = 1e-3;
  /// Called with each finished row and its mollified metric (e.g. for conformal correction).
  std::function<void(DecayRow&, const std::shared_ptr<const mollifier::MollifiedMetric>&)> row_hook;
};

/// |adm_mass(source) - adm_mass(gm)|.
double mass_stability(const geometry::MetricField& source, const geometry::MetricField& gm,
                      const std::vector<double>& radii, const FluxOptions& options = {});

/// Runs width -> mollify -> tube sweep -> masses for each eps. A failing row
/// is recorded with its error and the study continues.
DecayTable decay_study(const DecayStudyInputs& in);

}  // namespace lipmass::mass
