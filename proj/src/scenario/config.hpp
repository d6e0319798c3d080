#pragma once

#include "mollifier/bounds.hpp"
#include "scenario/catalog.hpp"
#include "singular/singular_set.hpp"
#include "singular/tube.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lipmass::scenario {

struct GridSpec {
  double h_over_eps = 8.0;
  std::optional<double> h;  // absolute spacing; overrides h_over_eps
  int margin_nodes = 3;
};

struct FluxSpec {
  std::vector<double> radii;
  int sphere_order = 32;
  int mc_samples = 20000;
  double fit_tolerance = 1e-3;
};

struct KernelSpec {
  int quadrature_order = 8;
  int width_order = 20;
};

struct ConformalSpec {
  bool enabled = false;
  std::optional<double> rho;  // default max(8 R_S, R_S + 4 max eps, 16)
  double tol = 1e-8;
  double growth = 1.3;
  double max_spacing_fraction = 1.0 / 16.0;
  int max_iterations = 20000;
};

struct WidthReportSpec {
  bool enabled = false;
  double h_over_eps = 20.0;
};

struct HypothesisSpec {
  int samples = 2000;
  std::optional<double> half_width;  // sampling box [-b, b]^n; default max(2, R_S + 1)
  double exclusion = 1e-3;           // skip samples this close to S
  double tolerance = 1e-8;           // R >= -tolerance counts as nonnegative
};

struct ContentSpec {
  std::optional<double> m;          // default: manifold dimension of S
  std::vector<double> eps;          // default: 4 halvings from max(eps)
  singular::TubeOptions tube;
};

struct OutputSpec {
  std::string json;
  std::string csv;
  std::string lattice;  // optional mollified-lattice dump of the last row
  std::string lattice_format = "text";
};

/// Fully validated run description with defaults filled in.
struct ScenarioSpec {
  std::string scenario;
  int n = 3;
  Params params;
  nlohmann::json singular_set;  // primitive list as given or defaulted
  std::vector<double> eps;
  GridSpec grid;
  mollifier::SmoothnessMode mode;
  double curvature_exponent = 1.5;
  FluxSpec flux;
  KernelSpec kernel;
  ConformalSpec conformal;
  WidthReportSpec width_report;
  HypothesisSpec hypothesis;
  ContentSpec content;
  OutputSpec output;
  std::uint64_t seed = 1;

  double conformal_rho() const;
  nlohmann::json to_json() const;
};

/// Parses and validates; unknown keys and out-of-range values raise
/// Error(kValidation).
ScenarioSpec parse_scenario(const nlohmann::json& config);
ScenarioSpec parse_scenario_text(const std::string& text);
ScenarioSpec load_scenario(const std::string& path);

/// Primitive list -> singular set; relative point-cloud paths resolve against `base_dir`.
std::shared_ptr<singular::SingularSet> build_singular_set(const nlohmann::json& primitives, int n,
                                                          const std::string& base_dir = {});

/// Default primitive list of a scenario for the given parameters.
nlohmann::json default_singular_set(const std::string& scenario, int n, const Params& params);

}  // namespace lipmass::scenario
