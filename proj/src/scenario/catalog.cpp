#include "scenario/catalog.hpp"

#include "common/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace lipmass::scenario {
namespace {

using geometry::RadialJet;

const double kSqrtPi = std::sqrt(std::numbers::pi);

// G(r) = (1 - e^{-r^2}) / r^2 and G'(r), with series near the origin.
void g_and_dg(double r, double& g, double& dg) {
  if (r < 1e-2) {
    const double r2 = r * r;
    g = 1.0 - r2 / 2.0 + r2 * r2 / 6.0;
    dg = -r + 2.0 * r * r2 / 3.0 - r * r2 * r2 / 4.0;
    return;
  }
  g = -std::expm1(-r * r) / (r * r);
  dg = 2.0 / r * (std::exp(-r * r) - g);
}

// Integral of G(s)^{(n-1)/2} over [r, infinity) for n > 3.
double superharmonic_tail(int n, double r) {
  const double k = 0.5 * (n - 1);
  constexpr double kCut = 8.0;
  // Beyond the cut G = s^{-2} to double precision.
  double s = std::pow(std::max(r, kCut), 1.0 - 2.0 * k) / (2.0 * k - 1.0);
  if (r < kCut) {
    static const Rule1D rule = gauss_legendre(96, 0.0, 1.0);
    double part = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = r + (kCut - r) * rule.nodes[i];
      double g, dg;
      g_and_dg(x, g, dg);
      part += rule.weights[i] * std::pow(g, k);
    }
    s += part * (kCut - r);
  }
  return s;
}

double number(const Params& p, const char* key) { return p.at(key).get<double>(); }

std::shared_ptr<geometry::IsotropicMetric> radial_conformal(int n, geometry::RadialField::Profile profile) {
  return geometry::conformally_flat(std::make_shared<geometry::RadialField>(n, Vec::Zero(n), std::move(profile)));
}

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"flat", "Euclidean metric; baseline with a point singular set", "in-theorem", Params::object(),
               nlohmann::json(), {0.2, 0.1, 0.05}, "lipschitz", 0.0, {4.0, 8.0, 16.0, 32.0}, false, false, false});
  c.push_back({"schwarzschild", "isotropic Schwarzschild u^{4/(n-2)} delta, u = 1 + m/(2|x|^{n-2}); no singular set",
               "in-theorem", {{"m", 1.0}}, nlohmann::json::array(), {0.2, 0.1, 0.05}, "lipschitz", 0.0,
               {8.0, 16.0, 32.0, 64.0}, false, false, false});
  c.push_back({"lipschitz-point",
               "w^{4/(n-2)} delta with a cone point at the origin; profile 'superharmonic' (default, R >= 0 off S) "
               "or 'gaussian-cone' (w = 1 + a|x|e^{-|x|^2})",
               "in-theorem", {{"profile", "superharmonic"}, {"a", 0.1}}, nlohmann::json(), {0.1, 0.05, 0.025},
               "lipschitz", 0.0, {8.0, 16.0, 32.0, 64.0}, true, true, false});
  c.push_back({"lipschitz-circle", "w = 1 + a dist(x, C) e^{-|x|^2} with C a round circle in the plane z = 0",
               "in-theorem", {{"a", 0.5}, {"radius", 0.5}}, nlohmann::json(), {0.1, 0.05, 0.025, 0.0125}, "lipschitz",
               0.0, {8.0, 16.0, 32.0, 64.0}, false, false, true});
  c.push_back({"w1p-point", "w = 1 + a|x|^alpha e^{-|x|^2}, W^{1,p} but not Lipschitz at the origin", "in-theorem",
               {{"a", 0.1}, {"alpha", 0.6}}, nlohmann::json(), {0.1, 0.05, 0.025}, "w1p", 6.0,
               {8.0, 16.0, 32.0, 64.0}, false, true, false});
  c.push_back({"corner-sphere", "w = 1 + a(1 - |x|^2/r0^2)_+, Lipschitz-kinked across the sphere |x| = r0",
               "out-of-theorem contrast", {{"a", 0.5}, {"r0", 0.25}}, nlohmann::json(), {0.1, 0.05, 0.025},
               "lipschitz", 0.0, {8.0, 16.0, 32.0, 64.0}, false, false, false});
  return c;
}

}  // namespace

RadialJet superharmonic_profile(int n, double A, double r) {
  double g, dg;
  g_and_dg(r, g, dg);
  RadialJet j;
  if (n == 3) {
    j.f = 1.0 + A * (r * g + kSqrtPi * std::erfc(r));
    j.df = -A * g;
    j.d2f = -A * dg;
    return j;
  }
  const double k = 0.5 * (n - 1);
  j.f = 1.0 + A * superharmonic_tail(n, r);
  j.df = -A * std::pow(g, k);
  j.d2f = -A * k * std::pow(g, k - 1.0) * dg;
  return j;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = make_catalog();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw Error(ErrorCode::kValidation, "unknown scenario '" + name + "'");
}

nlohmann::json catalog_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : catalog()) {
    nlohmann::json set = e.default_set;
    if (set.is_null()) set = "derived from parameters";
    out.push_back({{"name", e.name},
                   {"summary", e.summary},
                   {"label", e.label},
                   {"params", e.defaults},
                   {"singular_set", set},
                   {"eps", e.default_eps},
                   {"mode", e.default_mode == "w1p" ? nlohmann::json{{"type", "w1p"}, {"p", e.default_p}}
                                                    : nlohmann::json{{"type", "lipschitz"}}},
                   {"flux_radii", e.default_radii},
                   {"conformal", e.conformal_default},
                   {"dimensions", e.three_dimensional_only ? nlohmann::json{3} : nlohmann::json{3, 4, 5, 6, 7}}});
  }
  return out;
}

Params validate_params(const CatalogEntry& entry, int n, const Params& given, const std::string& mode, double p) {
  require(given.is_null() || given.is_object(), ErrorCode::kValidation, "params must be an object");
  Params out = entry.defaults;
  if (given.is_object()) {
    for (auto it = given.begin(); it != given.end(); ++it) {
      require(entry.defaults.contains(it.key()), ErrorCode::kValidation,
              "unknown parameter '" + it.key() + "' for scenario " + entry.name);
      const auto& dflt = entry.defaults.at(it.key());
      require(dflt.is_string() ? it.value().is_string() : it.value().is_number(), ErrorCode::kValidation,
              "parameter '" + it.key() + "' has the wrong type");
      out[it.key()] = it.value();
    }
  }
  if (entry.three_dimensional_only) require(n == 3, ErrorCode::kValidation, entry.name + " is defined for n = 3 only");
  for (auto it = out.begin(); it != out.end(); ++it)
    if (it.value().is_number())
      require(std::isfinite(it.value().get<double>()), ErrorCode::kValidation, "parameter '" + it.key() + "' is not finite");
  const std::string& name = entry.name;
  if (name == "schwarzschild") {
    require(number(out, "m") >= 0.0, ErrorCode::kValidation, "schwarzschild mass must be nonnegative");
  } else if (name == "lipschitz-point") {
    const std::string prof = out.at("profile").get<std::string>();
    require(prof == "superharmonic" || prof == "gaussian-cone", ErrorCode::kValidation,
            "lipschitz-point profile must be 'superharmonic' or 'gaussian-cone'");
    require(number(out, "a") >= 0.0, ErrorCode::kValidation, "amplitude a must be nonnegative");
  } else if (name == "lipschitz-circle") {
    require(number(out, "a") >= 0.0, ErrorCode::kValidation, "amplitude a must be nonnegative");
    require(number(out, "radius") > 0.0, ErrorCode::kValidation, "circle radius must be positive");
  } else if (name == "w1p-point") {
    require(mode == "w1p", ErrorCode::kValidation, "w1p-point runs in w1p mode");
    require(p > n, ErrorCode::kValidation, "w1p mode requires p > n");
    const double alpha = number(out, "alpha");
    require(alpha > 1.0 - n / p && alpha < 1.0, ErrorCode::kValidation,
            "alpha must lie in the integrability window (1 - n/p, 1)");
    require(number(out, "a") >= 0.0, ErrorCode::kValidation, "amplitude a must be nonnegative");
  } else if (name == "corner-sphere") {
    require(number(out, "a") > -1.0, ErrorCode::kValidation, "corner amplitude must exceed -1");
    require(number(out, "r0") > 0.0, ErrorCode::kValidation, "corner radius r0 must be positive");
  }
  return out;
}

geometry::MetricFieldPtr build_metric(const std::string& name, int n, const Params& params) {
  const double k = 4.0 / (n - 2.0);
  if (name == "flat") return geometry::flat_metric(n);
  if (name == "schwarzschild") {
    const double m = number(params, "m");
    auto g = radial_conformal(n, [n, m](double r) {
      RadialJet j;
      j.f = 1.0 + m / (2.0 * std::pow(r, n - 2));
      j.df = -m * (n - 2) / (2.0 * std::pow(r, n - 1));
      j.d2f = m * (n - 2) * (n - 1) / (2.0 * std::pow(r, n));
      return j;
    });
    g->set_decay(geometry::DecayProfile(n, n - 2.0, std::numeric_limits<double>::infinity()));
    return g;
  }
  if (name == "lipschitz-point") {
    const double a = number(params, "a");
    if (params.at("profile").get<std::string>() == "superharmonic") {
      auto g = radial_conformal(n, [n, a](double r) { return superharmonic_profile(n, a, r); });
      const double w0 = superharmonic_profile(n, a, 0.0).f;
      g->set_decay(a > 0 ? geometry::DecayProfile(n, n - 2.0, std::numeric_limits<double>::infinity())
                         : geometry::DecayProfile::compact(n));
      g->set_lipschitz_constant(k * std::pow(w0, k - 1.0) * a);
      return g;
    }
    auto g = radial_conformal(n, [a](double r) {
      const double e = std::exp(-r * r);
      return RadialJet{1.0 + a * r * e, a * (1.0 - 2.0 * r * r) * e, a * (-6.0 * r + 4.0 * r * r * r) * e};
    });
    g->set_decay(geometry::DecayProfile::compact(n));
    g->set_lipschitz_constant(k * std::pow(1.0 + a * std::exp(-0.5) / std::sqrt(2.0), k - 1.0) * a);
    return g;
  }
  if (name == "lipschitz-circle") {
    const double a = number(params, "a"), radius = number(params, "radius");
    auto circle = singular::CirclePrimitive::with_normal(Vec::Zero(3), radius, Eigen::Vector3d::UnitZ());
    auto w = std::make_shared<geometry::FunctionField>(
        3, [a, circle](const Vec& x) { return 1.0 + a * circle->distance(x) * std::exp(-x.squaredNorm()); });
    auto g = geometry::conformally_flat(w);
    g->set_decay(geometry::DecayProfile::compact(3));
    // |d(dist e^{-r^2})| <= e^{-r^2}(1 + 2 r dist) and dist <= r + R; the bound
    // below maximizes that over r on a fine radial sample.
    double slope = 0.0, wmax = 1.0;
    for (int i = 0; i <= 4000; ++i) {
      const double r = 4.0 * i / 4000.0;
      const double e = std::exp(-r * r);
      slope = std::max(slope, e * (1.0 + 2.0 * r * (r + radius)));
      wmax = std::max(wmax, 1.0 + a * (r + radius) * e);
    }
    g->set_lipschitz_constant(k * std::pow(wmax, k - 1.0) * a * slope);
    return g;
  }
  if (name == "w1p-point") {
    const double a = number(params, "a"), alpha = number(params, "alpha");
    auto g = radial_conformal(n, [a, alpha](double r) {
      const double e = std::exp(-r * r);
      if (r == 0.0) return RadialJet{1.0, 0.0, 0.0};
      const double ra = std::pow(r, alpha);
      return RadialJet{1.0 + a * ra * e, a * e * (alpha * ra / r - 2.0 * ra * r),
                       a * e * (alpha * (alpha - 1.0) * ra / (r * r) - 2.0 * alpha * ra - 2.0 * (alpha + 1.0) * ra +
                                4.0 * ra * r * r)};
    });
    g->set_decay(geometry::DecayProfile::compact(n));
    g->set_lipschitz_constant(std::nullopt);
    return g;
  }
  if (name == "corner-sphere") {
    const double a = number(params, "a"), r0 = number(params, "r0");
    auto g = radial_conformal(n, [a, r0](double r) {
      if (r >= r0) return RadialJet{1.0, 0.0, 0.0};
      return RadialJet{1.0 + a * (1.0 - r * r / (r0 * r0)), -2.0 * a * r / (r0 * r0), -2.0 * a / (r0 * r0)};
    });
    g->set_decay(geometry::DecayProfile::compact(n));
    const double wmax = std::max(1.0, 1.0 + a);
    g->set_lipschitz_constant(k * std::pow(wmax, k - 1.0) * 2.0 * std::abs(a) / r0);
    return g;
  }
  throw Error(ErrorCode::kValidation, "unknown scenario '" + name + "'");
}

std::vector<Vec> singular_locus(const std::string& name, int n, const Params& params) {
  std::vector<Vec> pts;
  if (name == "lipschitz-point" || name == "w1p-point") {
    if (number(params, "a") != 0.0) pts.push_back(Vec::Zero(n));
  } else if (name == "lipschitz-circle") {
    const double radius = number(params, "radius");
    for (int i = 0; i < 64; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 64.0;
      Vec x = Vec::Zero(3);
      x[0] = radius * std::cos(t);
      x[1] = radius * std::sin(t);
      pts.push_back(x);
    }
  } else if (name == "corner-sphere") {
    const double r0 = number(params, "r0");
    for (int k = 0; k < n; ++k)
      for (double s : {-1.0, 1.0}) {
        Vec x = Vec::Zero(n);
        x[k] = s * r0;
        pts.push_back(x);
      }
  }
  return pts;
}

double excluded_radius(const std::string& name, const Params& params) {
  return name == "schwarzschild" ? 0.5 * number(params, "m") : 0.0;
}

// Default singular sets derived from parameters live in config.cpp next to
// the primitive parser; see default_singular_set there.

}  // namespace lipmass::scenario
