#pragma once

#include "geometry/metric.hpp"
#include "singular/singular_set.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lipmass::scenario {

/// Metric parameters; numbers or strings, keyed by name.
using Params = nlohmann::json;

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::string label;  // "in-theorem" or "out-of-theorem contrast"
  Params defaults;
  nlohmann::json default_set;  // primitive list
  std::vector<double> default_eps;
  std::string default_mode = "lipschitz";
  double default_p = 0.0;
  std::vector<double> default_radii;
  bool conformal_default = false;
  bool width_report_default = true;
  /// Only n = 3 is supported when true.
  bool three_dimensional_only = false;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);
nlohmann::json catalog_json();

/// Rejects unknown parameters and out-of-range values; fills defaults.
Params validate_params(const CatalogEntry& entry, int n, const Params& given, const std::string& mode, double p);

/// Closed-form source metric of a scenario with decay metadata and Lipschitz constant set.
geometry::MetricFieldPtr build_metric(const std::string& name, int n, const Params& params);

/// Points where the scenario's metric fails to be smooth; the declared
/// singular set must contain them.
std::vector<Vec> singular_locus(const std::string& name, int n, const Params& params);

/// Radius of a ball about the origin outside the scenario's end (the
/// Schwarzschild horizon m/2); 0 when the whole chart belongs to the end.
double excluded_radius(const std::string& name, const Params& params);

/// Profile w(r) = 1 + A (1 - e^{-r^2})/r + A sqrt(pi) erfc(r) in n = 3 and its
/// analogue in higher n; superharmonic away from the origin with a cone point there.
geometry::RadialJet superharmonic_profile(int n, double amplitude, double r);

}  // namespace lipmass::scenario
