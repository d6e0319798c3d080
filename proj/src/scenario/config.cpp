#include "scenario/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace lipmass::scenario {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::kValidation, msg); }

// Object reader that remembers which keys were consumed so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(where_ + " must be an object");
  }

  bool has(const char* key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const char* key) {
    used_.insert(key);
    return j_.at(key);
  }

  double number(const char* key, double dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(path(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path(key) + " must be finite");
    return x;
  }

  std::optional<double> optional_number(const char* key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  int integer(const char* key, int dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key) + " must be an integer");
    return v.get<int>();
  }

  bool boolean(const char* key, bool dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(path(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const char* key, const std::string& dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(path(key) + " must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key, const std::vector<double>& dflt) {
    if (!has(key)) return dflt;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(path(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) fail(path(key) + " must be an array of numbers");
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) fail(path(key) + " entries must be finite");
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail("unknown key '" + path(it.key().c_str()) + "'");
  }

  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

Vec to_vec(const json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) fail(what + " must be an array of " + std::to_string(n) + " numbers");
  Vec v(n);
  for (int k = 0; k < n; ++k) {
    if (!j[k].is_number()) fail(what + " must contain numbers");
    v[k] = j[k].get<double>();
    if (!std::isfinite(v[k])) fail(what + " must be finite");
  }
  return v;
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

singular::PrimitivePtr parse_primitive(const json& j, int n, const std::string& base_dir, const std::string& where) {
  Section s(j, where);
  const std::string type = s.string("type", "");
  singular::PrimitivePtr out;
  if (type == "point") {
    out = std::make_shared<singular::PointPrimitive>(to_vec(s.raw("at"), n, where + ".at"));
  } else if (type == "segment") {
    out = std::make_shared<singular::SegmentPrimitive>(to_vec(s.raw("from"), n, where + ".from"),
                                                       to_vec(s.raw("to"), n, where + ".to"));
  } else if (type == "polyline") {
    const json& pts = s.raw("points");
    if (!pts.is_array() || pts.size() < 2) fail(where + ".points needs at least two vertices");
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < pts.size(); ++i) vs.push_back(to_vec(pts[i], n, where + ".points"));
    out = std::make_shared<singular::PolylinePrimitive>(std::move(vs));
  } else if (type == "circle") {
    const Vec c = s.has("center") ? to_vec(s.raw("center"), n, where + ".center") : Vec::Zero(n);
    const double r = s.number("radius", 1.0);
    if (!(r > 0.0)) fail(where + ".radius must be positive");
    if (s.has("normal")) {
      if (n != 3) fail(where + ".normal is only defined for n = 3; give axes u and v");
      out = singular::CirclePrimitive::with_normal(c, r, to_vec(s.raw("normal"), 3, where + ".normal"));
    } else if (s.has("u") || s.has("v")) {
      out = std::make_shared<singular::CirclePrimitive>(c, r, to_vec(s.raw("u"), n, where + ".u"),
                                                        to_vec(s.raw("v"), n, where + ".v"));
    } else {
      Vec u = Vec::Zero(n), v = Vec::Zero(n);
      u[0] = 1.0;
      v[1] = 1.0;
      out = std::make_shared<singular::CirclePrimitive>(c, r, u, v);
    }
  } else if (type == "sphere") {
    const Vec c = s.has("center") ? to_vec(s.raw("center"), n, where + ".center") : Vec::Zero(n);
    const double r = s.number("radius", 1.0);
    if (!(r > 0.0)) fail(where + ".radius must be positive");
    out = std::make_shared<singular::SpherePrimitive>(c, r);
  } else if (type == "point_cloud") {
    std::filesystem::path file = s.string("path", "");
    if (file.empty()) fail(where + ".path is required");
    if (file.is_relative() && !base_dir.empty()) file = std::filesystem::path(base_dir) / file;
    out = singular::PointCloudPrimitive::load(file.string(), n);
  } else {
    fail(where + ".type must be one of point, segment, polyline, circle, sphere, point_cloud");
  }
  s.finish();
  return out;
}

bool is_halving_sequence(const std::vector<double>& eps) {
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (std::abs(eps[i] - 0.5 * eps[i - 1]) > 1e-12 * eps[i - 1]) return false;
  return true;
}

std::vector<double> halvings(double first, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(first * std::ldexp(1.0, -i));
  return out;
}

}  // namespace

nlohmann::json default_singular_set(const std::string& scenario, int n, const Params& params) {
  const CatalogEntry& entry = catalog_entry(scenario);
  if (!entry.default_set.is_null()) return entry.default_set;
  const std::vector<double> origin(n, 0.0);
  if (scenario == "lipschitz-circle")
    return json::array({{{"type", "circle"},
                         {"center", origin},
                         {"radius", params.at("radius").get<double>()},
                         {"normal", {0.0, 0.0, 1.0}}}});
  if (scenario == "corner-sphere")
    return json::array({{{"type", "sphere"}, {"center", origin}, {"radius", params.at("r0").get<double>()}}});
  return json::array({{{"type", "point"}, {"at", origin}}});
}

std::shared_ptr<singular::SingularSet> build_singular_set(const nlohmann::json& primitives, int n,
                                                          const std::string& base_dir) {
  if (!primitives.is_array()) fail("singular_set must be an array of primitives");
  auto set = std::make_shared<singular::SingularSet>(n);
  for (std::size_t i = 0; i < primitives.size(); ++i)
    set->add(parse_primitive(primitives[i], n, base_dir, "singular_set[" + std::to_string(i) + "]"));
  return set;
}

double ScenarioSpec::conformal_rho() const {
  if (conformal.rho) return *conformal.rho;
  const double rs = build_singular_set(singular_set, n)->bounding_radius();
  double emax = 0.0;
  for (double e : eps) emax = std::max(emax, e);
  return std::max({8.0 * rs, rs + 4.0 * emax, 16.0});
}

nlohmann::json ScenarioSpec::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["n"] = n;
  j["params"] = params;
  j["singular_set"] = singular_set;
  j["eps"] = eps;
  j["grid"] = {{"h_over_eps", grid.h_over_eps}, {"margin_nodes", grid.margin_nodes}};
  if (grid.h) j["grid"]["h"] = *grid.h;
  j["mode"] = mode.type == mollifier::SmoothnessMode::Type::kW1p ? json{{"type", "w1p"}, {"p", mode.p}}
                                                                  : json{{"type", "lipschitz"}};
  j["curvature_exponent"] = curvature_exponent;
  j["flux"] = {{"radii", flux.radii},
               {"sphere_order", flux.sphere_order},
               {"mc_samples", flux.mc_samples},
               {"fit_tolerance", flux.fit_tolerance}};
  j["kernel"] = {{"quadrature_order", kernel.quadrature_order}, {"width_order", kernel.width_order}};
  j["conformal"] = {{"enabled", conformal.enabled},
                    {"tol", conformal.tol},
                    {"growth", conformal.growth},
                    {"max_spacing_fraction", conformal.max_spacing_fraction},
                    {"max_iterations", conformal.max_iterations}};
  if (conformal.enabled) j["conformal"]["rho"] = conformal_rho();
  else if (conformal.rho) j["conformal"]["rho"] = *conformal.rho;
  j["width_report"] = {{"enabled", width_report.enabled}, {"h_over_eps", width_report.h_over_eps}};
  j["hypothesis"] = {{"samples", hypothesis.samples},
                     {"exclusion", hypothesis.exclusion},
                     {"tolerance", hypothesis.tolerance}};
  if (hypothesis.half_width) j["hypothesis"]["half_width"] = *hypothesis.half_width;
  j["content"] = {{"eps", content.eps},
                  {"method", content.tube.method == singular::TubeOptions::Method::kGrid ? "grid" : "monte_carlo"},
                  {"cell_fraction", content.tube.cell_fraction},
                  {"rel_tolerance", content.tube.rel_tolerance},
                  {"samples", content.tube.samples}};
  if (content.m) j["content"]["m"] = *content.m;
  j["output"] = {{"json", output.json}, {"csv", output.csv}, {"lattice", output.lattice},
                 {"lattice_format", output.lattice_format}};
  j["seed"] = seed;
  return j;
}

ScenarioSpec parse_scenario(const nlohmann::json& config) {
  Section top(config, "");
  ScenarioSpec spec;
  spec.scenario = top.string("scenario", "");
  if (spec.scenario.empty()) fail("scenario is required");
  const CatalogEntry& entry = catalog_entry(spec.scenario);

  spec.n = top.integer("n", 3);
  if (spec.n < 3 || spec.n > 7) fail("n must satisfy 3 <= n <= 7");

  // Mode first: the parameter validators depend on p.
  std::string mode_type = entry.default_mode;
  double p = entry.default_p;
  if (top.has("mode")) {
    const json& m = top.raw("mode");
    if (m.is_string()) {
      mode_type = m.get<std::string>();
    } else {
      Section ms(m, "mode");
      mode_type = ms.string("type", entry.default_mode);
      p = ms.number("p", p);
      ms.finish();
    }
  }
  if (mode_type == "lipschitz") {
    spec.mode.type = mollifier::SmoothnessMode::Type::kLipschitz;
  } else if (mode_type == "w1p") {
    if (!(p > spec.n)) fail("w1p mode requires p > n");
    spec.mode.type = mollifier::SmoothnessMode::Type::kW1p;
    spec.mode.p = p;
  } else {
    fail("mode.type must be 'lipschitz' or 'w1p'");
  }

  spec.params = validate_params(entry, spec.n, top.has("params") ? top.raw("params") : json(), mode_type, p);
  spec.singular_set = top.has("singular_set") ? top.raw("singular_set")
                                              : default_singular_set(spec.scenario, spec.n, spec.params);

  spec.eps = top.numbers("eps", entry.default_eps);
  if (spec.eps.size() < 3) fail("eps needs at least three values");
  for (double e : spec.eps)
    if (!(e > 0.0)) fail("eps values must be positive");
  if (!is_halving_sequence(spec.eps)) fail("eps must be a halving sequence eps0, eps0/2, eps0/4, ...");
  const double eps_max = spec.eps.front(), eps_min = spec.eps.back();

  if (top.has("grid")) {
    Section g(top.raw("grid"), "grid");
    spec.grid.h_over_eps = g.number("h_over_eps", spec.grid.h_over_eps);
    spec.grid.h = g.optional_number("h");
    spec.grid.margin_nodes = g.integer("margin_nodes", spec.grid.margin_nodes);
    g.finish();
  }
  if (spec.grid.h) {
    if (!(*spec.grid.h > 0.0) || *spec.grid.h > eps_min / 8.0 * (1.0 + 1e-12))
      fail("grid.h must satisfy 0 < h <= min(eps)/8");
  } else if (spec.grid.h_over_eps < 8.0) {
    fail("grid.h_over_eps must be >= 8 (h <= eps/8)");
  }
  if (spec.grid.margin_nodes < 2 || spec.grid.margin_nodes > 64) fail("grid.margin_nodes must lie in [2, 64]");

  spec.curvature_exponent = top.number("curvature_exponent", 0.5 * spec.n);
  if (!(spec.curvature_exponent > 0.0)) fail("curvature_exponent must be positive");

  spec.flux.radii = entry.default_radii;
  if (top.has("flux")) {
    Section f(top.raw("flux"), "flux");
    spec.flux.radii = f.numbers("radii", spec.flux.radii);
    spec.flux.sphere_order = f.integer("sphere_order", spec.flux.sphere_order);
    spec.flux.mc_samples = f.integer("mc_samples", spec.flux.mc_samples);
    spec.flux.fit_tolerance = f.number("fit_tolerance", spec.flux.fit_tolerance);
    f.finish();
  }
  if (spec.flux.radii.size() < 3) fail("flux.radii needs at least three radii");
  for (std::size_t i = 1; i < spec.flux.radii.size(); ++i)
    if (!(spec.flux.radii[i] > spec.flux.radii[i - 1])) fail("flux.radii must be strictly increasing");
  if (spec.flux.sphere_order < 4 || spec.flux.sphere_order > 512) fail("flux.sphere_order must lie in [4, 512]");
  if (spec.flux.mc_samples < 100) fail("flux.mc_samples must be >= 100");
  if (!(spec.flux.fit_tolerance > 0.0)) fail("flux.fit_tolerance must be positive");

  if (top.has("kernel")) {
    Section k(top.raw("kernel"), "kernel");
    spec.kernel.quadrature_order = k.integer("quadrature_order", spec.kernel.quadrature_order);
    spec.kernel.width_order = k.integer("width_order", spec.kernel.width_order);
    k.finish();
  }
  if (spec.kernel.quadrature_order < 2 || spec.kernel.quadrature_order > 40 || spec.kernel.quadrature_order % 2)
    fail("kernel.quadrature_order must be even and lie in [2, 40]");
  if (spec.kernel.width_order < 20 || spec.kernel.width_order > 64)
    fail("kernel.width_order must lie in [20, 64]");

  spec.conformal.enabled = entry.conformal_default;
  if (top.has("conformal")) {
    Section c(top.raw("conformal"), "conformal");
    spec.conformal.enabled = c.boolean("enabled", spec.conformal.enabled);
    spec.conformal.rho = c.optional_number("rho");
    spec.conformal.tol = c.number("tol", spec.conformal.tol);
    spec.conformal.growth = c.number("growth", spec.conformal.growth);
    spec.conformal.max_spacing_fraction = c.number("max_spacing_fraction", spec.conformal.max_spacing_fraction);
    spec.conformal.max_iterations = c.integer("max_iterations", spec.conformal.max_iterations);
    c.finish();
  }
  if (!(spec.conformal.tol > 0.0 && spec.conformal.tol < 1.0)) fail("conformal.tol must lie in (0, 1)");
  if (!(spec.conformal.growth >= 1.0 && spec.conformal.growth <= 2.0)) fail("conformal.growth must lie in [1, 2]");
  if (!(spec.conformal.max_spacing_fraction > 0.0 && spec.conformal.max_spacing_fraction <= 0.25))
    fail("conformal.max_spacing_fraction must lie in (0, 1/4]");
  if (spec.conformal.max_iterations < 1) fail("conformal.max_iterations must be positive");

  spec.width_report.enabled = entry.width_report_default;
  if (top.has("width_report")) {
    Section w(top.raw("width_report"), "width_report");
    spec.width_report.enabled = w.boolean("enabled", spec.width_report.enabled);
    spec.width_report.h_over_eps = w.number("h_over_eps", spec.width_report.h_over_eps);
    w.finish();
  }
  if (spec.width_report.h_over_eps < 20.0) fail("width_report.h_over_eps must be >= 20 (h <= eps/20)");

  if (top.has("hypothesis")) {
    Section h(top.raw("hypothesis"), "hypothesis");
    spec.hypothesis.samples = h.integer("samples", spec.hypothesis.samples);
    spec.hypothesis.half_width = h.optional_number("half_width");
    spec.hypothesis.exclusion = h.number("exclusion", spec.hypothesis.exclusion);
    spec.hypothesis.tolerance = h.number("tolerance", spec.hypothesis.tolerance);
    h.finish();
  }
  if (spec.hypothesis.samples < 0) fail("hypothesis.samples must be nonnegative");
  if (spec.hypothesis.half_width && !(*spec.hypothesis.half_width > 0.0))
    fail("hypothesis.half_width must be positive");
  if (!(spec.hypothesis.exclusion >= 0.0)) fail("hypothesis.exclusion must be nonnegative");

  spec.content.eps = halvings(eps_max, 4);
  if (top.has("content")) {
    Section c(top.raw("content"), "content");
    spec.content.m = c.optional_number("m");
    spec.content.eps = c.numbers("eps", spec.content.eps);
    const std::string method = c.string("method", "grid");
    if (method == "grid") spec.content.tube.method = singular::TubeOptions::Method::kGrid;
    else if (method == "monte_carlo") spec.content.tube.method = singular::TubeOptions::Method::kMonteCarlo;
    else fail("content.method must be 'grid' or 'monte_carlo'");
    spec.content.tube.cell_fraction = c.number("cell_fraction", spec.content.tube.cell_fraction);
    spec.content.tube.rel_tolerance = c.number("rel_tolerance", spec.content.tube.rel_tolerance);
    spec.content.tube.samples = c.integer("samples", static_cast<int>(spec.content.tube.samples));
    c.finish();
  }
  if (spec.content.m && !(*spec.content.m >= 0.0 && *spec.content.m <= spec.n)) fail("content.m must lie in [0, n]");
  if (spec.content.eps.size() < 2) fail("content.eps needs at least two values");
  for (std::size_t i = 0; i < spec.content.eps.size(); ++i)
    if (!(spec.content.eps[i] > 0.0) || (i > 0 && !(spec.content.eps[i] < spec.content.eps[i - 1])))
      fail("content.eps must be positive and strictly decreasing");
  if (!(spec.content.tube.cell_fraction > 0.0 && spec.content.tube.cell_fraction <= 0.1))
    fail("content.cell_fraction must lie in (0, 1/10]");
  if (!(spec.content.tube.rel_tolerance > 0.0)) fail("content.rel_tolerance must be positive");
  if (spec.content.tube.samples < 1000) fail("content.samples must be >= 1000");

  if (top.has("output")) {
    Section o(top.raw("output"), "output");
    spec.output.json = o.string("json", "");
    spec.output.csv = o.string("csv", "");
    spec.output.lattice = o.string("lattice", "");
    spec.output.lattice_format = o.string("lattice_format", "text");
    o.finish();
  }
  if (spec.output.lattice_format != "text" && spec.output.lattice_format != "binary")
    fail("output.lattice_format must be 'text' or 'binary'");

  if (top.has("seed")) {
    const json& s = top.raw("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      fail("seed must be a nonnegative integer");
    spec.seed = s.get<std::uint64_t>();
  }
  spec.content.tube.seed = spec.seed;
  top.finish();

  // Geometric constraints.
  const auto set = build_singular_set(spec.singular_set, spec.n);
  for (const Vec& x : singular_locus(spec.scenario, spec.n, spec.params))
    if (set->distance(x) > 1e-9)
      fail("singular_set does not contain the scenario's non-smooth locus (e.g. near " +
           nlohmann::json(vec_json(x)).dump() + ")");
  const double rs = set->bounding_radius();
  if (!set->empty())
    for (double r : spec.flux.radii)
      if (!(r > rs + 2.0 * eps_max))
        fail("flux radius " + std::to_string(r) + " meets S_{2 eps} (needs r > " + std::to_string(rs + 2.0 * eps_max) +
             ")");
  if (spec.conformal.enabled) {
    const double rho = spec.conformal_rho();
    if (!(rho >= rs + 4.0 * eps_max)) fail("conformal.rho must exceed the bounding radius of S by 4 max(eps)");
  }
  return spec;
}

ScenarioSpec parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail("config " + path + " is not valid JSON: " + e.what());
  }
  // Relative point-cloud paths resolve against the config's directory.
  const std::string dir = std::filesystem::path(path).parent_path().string();
  if (j.is_object() && j.contains("singular_set") && j["singular_set"].is_array())
    for (auto& prim : j["singular_set"])
      if (prim.is_object() && prim.value("type", "") == "point_cloud" && prim.contains("path") &&
          prim["path"].is_string()) {
        std::filesystem::path file = prim["path"].get<std::string>();
        if (file.is_relative() && !dir.empty()) prim["path"] = (std::filesystem::path(dir) / file).string();
      }
  return parse_scenario(j);
}

}  // namespace lipmass::scenario
