#include "mass/flux.hpp"
#include "scenario/catalog.hpp"
#include "scenario/config.hpp"
#include "scenario/pipeline.hpp"
#include "scenario/report.hpp"

#include <doctest.h>

#include <cmath>

using namespace lipmass;
using namespace lipmass::scenario;
using nlohmann::json;

namespace {

ErrorCode rejection(const json& config) {
  try {
    parse_scenario(config);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

json small_flat() {
  return {{"scenario", "flat"}, {"eps", {0.2, 0.1, 0.05}}, {"flux", {{"radii", {4.0, 8.0, 16.0}}}}};
}

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("catalog lists the six scenarios") {
  const std::vector<std::string> names = {"flat", "schwarzschild", "lipschitz-point", "lipschitz-circle", "w1p-point",
                                          "corner-sphere"};
  REQUIRE(catalog().size() == names.size());
  for (const auto& n : names) CHECK(catalog_entry(n).name == n);
  CHECK(catalog_entry("corner-sphere").label == "out-of-theorem contrast");
  CHECK(catalog_entry("lipschitz-point").label == "in-theorem");
  CHECK_THROWS_AS(catalog_entry("kerr"), Error);
  CHECK(catalog_json().size() == names.size());
}

TEST_CASE("superharmonic profile: derivatives, superharmonicity and mass") {
  for (int n : {3, 4, 6}) {
    const double A = 0.1, d = 1e-5;
    for (double r : {0.05, 0.5, 1.3, 3.0, 7.0}) {
      const auto j = superharmonic_profile(n, A, r);
      const auto jp = superharmonic_profile(n, A, r + d), jm = superharmonic_profile(n, A, r - d);
      CHECK(j.df == doctest::Approx((jp.f - jm.f) / (2 * d)).epsilon(1e-6));
      CHECK(j.d2f == doctest::Approx((jp.df - jm.df) / (2 * d)).epsilon(1e-6));
      CHECK(j.d2f + (n - 1.0) * j.df / r <= 1e-14);
    }
    // Lipschitz at the origin: slope -A
    CHECK(superharmonic_profile(n, A, 1e-8).df == doctest::Approx(-A).epsilon(1e-6));
    // w -> 1 + A / ((n-2) r^{n-2}) far out
    const double r = 40.0;
    CHECK((superharmonic_profile(n, A, r).f - 1.0) * (n - 2.0) * std::pow(r, n - 2) / A ==
          doctest::Approx(1.0).epsilon(1e-7));
  }
  auto g = build_metric("lipschitz-point", 3, {{"profile", "superharmonic"}, {"a", 0.1}});
  CHECK(mass::adm_mass(*g, {8.0, 16.0, 32.0, 64.0}).mass == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("zero amplitude degenerates to the flat metric") {
  for (const std::string name : {"lipschitz-point", "w1p-point", "corner-sphere"}) {
    const ScenarioSpec spec = parse_scenario({{"scenario", name}, {"params", {{"a", 0.0}}}});
    auto g = build_metric(name, 3, spec.params);
    for (const Vec& x : {v3(0.0, 0.0, 0.0), v3(0.3, -0.2, 0.1), v3(2.0, 1.0, 0.0)})
      CHECK((g->metric_at(x) - Mat::Identity(3, 3)).norm() == 0.0);
  }
}

TEST_CASE("defaults are filled from the catalog") {
  const ScenarioSpec s = parse_scenario({{"scenario", "schwarzschild"}});
  CHECK(s.n == 3);
  CHECK(s.params.at("m").get<double>() == 1.0);
  CHECK(s.flux.radii == std::vector<double>{8.0, 16.0, 32.0, 64.0});
  CHECK(s.flux.sphere_order >= 32);
  CHECK(s.eps.size() >= 3);
  CHECK(s.curvature_exponent == 1.5);

  const ScenarioSpec w = parse_scenario({{"scenario", "w1p-point"}});
  CHECK(w.mode.type == mollifier::SmoothnessMode::Type::kW1p);
  CHECK(w.mode.p == 6.0);
  const ScenarioSpec p = parse_scenario({{"scenario", "lipschitz-point"}, {"n", 5}});
  CHECK(p.curvature_exponent == 2.5);
  CHECK(p.conformal_rho() >= 16.0);
}

TEST_CASE("invalid configurations are rejected") {
  CHECK(rejection({{"scenario", "flat"}, {"n", 8}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "flat"}, {"n", 2}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "w1p-point"}, {"mode", {{"type", "w1p"}, {"p", 2.0}}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "w1p-point"}, {"params", {{"alpha", 0.3}}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "w1p-point"}, {"params", {{"alpha", 1.2}}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "flat"}, {"colour", "blue"}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "flat"}, {"grid", {{"h_over_eps", 4.0}}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "flat"}, {"eps", {0.2, 0.1, 0.04}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "flat"}, {"eps", {0.2, 0.1}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "flat"}, {"flux", {{"radii", {0.3, 8.0, 16.0}}}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "flat"}, {"flux", {{"radii", {16.0, 8.0, 32.0}}}}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "lipschitz-circle"}, {"n", 4}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "lipschitz-point"}, {"conformal", {{"enabled", true}, {"rho", 0.2}}}}) ==
        ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "lipschitz-point"}, {"singular_set", json::array()}}) == ErrorCode::kValidation);
  CHECK(rejection({{"scenario", "kerr"}}) == ErrorCode::kValidation);
  CHECK_THROWS_AS(parse_scenario_text("{not json"), Error);
  CHECK_THROWS_AS(load_scenario("/nonexistent/config.json"), Error);
}

TEST_CASE("spec JSON round-trips") {
  for (const auto& e : catalog()) {
    const ScenarioSpec s = parse_scenario({{"scenario", e.name}});
    const json once = s.to_json();
    CHECK(parse_scenario(once).to_json() == once);
  }
}

TEST_CASE("singular set primitives from JSON") {
  const json prims = json::array({
      {{"type", "point"}, {"at", {1.0, 0.0, 0.0}}},
      {{"type", "segment"}, {"from", {0.0, 0.0, 2.0}}, {"to", {0.0, 0.0, 3.0}}},
      {{"type", "polyline"}, {"points", {{0.0, 5.0, 0.0}, {1.0, 5.0, 0.0}, {1.0, 6.0, 0.0}}}},
      {{"type", "circle"}, {"center", {0.0, 0.0, -4.0}}, {"radius", 1.0}, {"normal", {0.0, 0.0, 1.0}}},
      {{"type", "sphere"}, {"center", {10.0, 0.0, 0.0}}, {"radius", 0.5}},
      {{"type", "point_cloud"}, {"path", "cloud3.txt"}},
  });
  auto s = build_singular_set(prims, 3, LIPMASS_TEST_DATA);
  CHECK(s->primitives().size() == 6);
  CHECK(s->distance(v3(1.0, 0.0, 0.0)) == 0.0);
  CHECK(s->distance(v3(0.0, 0.0, 2.5)) == doctest::Approx(0.0));
  CHECK(s->distance(v3(1.0, 0.0, -4.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s->manifold_dimension() == 2);
  CHECK_THROWS_AS(build_singular_set(json::array({{{"type", "torus"}}}), 3), Error);
  CHECK_THROWS_AS(build_singular_set(json::array({{{"type", "point"}, {"at", {1.0, 0.0}}}}), 3), Error);
}

TEST_CASE("theorem labels follow dim S against n / 2") {
  singular::SingularSet point(3), circle(3), sphere(3);
  point.add(std::make_shared<singular::PointPrimitive>(Vec::Zero(3)));
  circle.add(singular::CirclePrimitive::with_normal(Vec::Zero(3), 1.0, v3(0, 0, 1)));
  sphere.add(std::make_shared<singular::SpherePrimitive>(Vec::Zero(3), 1.0));
  CHECK(theorem_label(point) == "in-theorem");
  CHECK(theorem_label(circle) == "in-theorem");
  CHECK(theorem_label(sphere) == "out-of-theorem contrast");
  singular::SingularSet segment4(4);
  segment4.add(std::make_shared<singular::SegmentPrimitive>(Vec::Zero(4), Vec::Ones(4)));
  CHECK(theorem_label(segment4) == "in-theorem");
}

TEST_CASE("nonnegative curvature check") {
  singular::SingularSet none(3);
  HypothesisSpec h;
  h.samples = 500;
  auto schw = build_metric("schwarzschild", 3, {{"m", 1.0}});
  const HypothesisCheck ok = check_nonnegative_curvature(*schw, none, h, 1, 0.5);
  CHECK(ok.holds);
  CHECK(ok.samples + ok.skipped == 500);
  CHECK(ok.skipped > 0);
  // A metric with a positive Laplacian bump somewhere has R < 0 there.
  auto bump = std::make_shared<geometry::RadialField>(3, Vec::Zero(3), [](double r) {
    const double e = std::exp(-r * r);
    return geometry::RadialJet{1.0 - 0.2 * e, 0.4 * r * e, -0.2 * e * (4.0 * r * r - 2.0)};
  });
  const HypothesisCheck bad = check_nonnegative_curvature(*geometry::conformally_flat(bump), none, h, 1);
  CHECK_FALSE(bad.holds);
  CHECK(bad.min_curvature < 0.0);
}

TEST_CASE("flat pipeline report is deterministic") {
  const ScenarioSpec spec = parse_scenario(small_flat());
  const Report a = run_pipeline(spec), b = run_pipeline(spec);
  CHECK_FALSE(a.row_failures());
  CHECK(std::abs(a.source_mass.mass) <= 1e-6);
  const std::string ja = dump_json(report_json(a)), jb = dump_json(report_json(b));
  CHECK(ja == jb);
  CHECK(report_csv(a) == report_csv(b));
  const json j = json::parse(ja);
  CHECK(j["format"] == "lipmass-report");
  CHECK(j["decay_table"]["rows"].size() == 3);
  CHECK(j["decay_table"]["columns"][2] == "int_goal");
  CHECK_FALSE(j.contains("timings"));
  CHECK(report_csv(a).rfind("eps,vol_tube,int_goal,int_newgoal_core,int_newgoal_annulus,sup_d1,eps_sup_d2,mass,dmass\n", 0) == 0);
  CHECK(a.verdicts.max_locality_deviation <= 1e-10);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("content study of a segment") {
  const ScenarioSpec spec = parse_scenario(
      {{"scenario", "flat"},
       {"singular_set", json::array({{{"type", "segment"}, {"from", {-1.0, 0.0, 0.0}}, {"to", {1.0, 0.0, 0.0}}}})},
       {"content", {{"eps", {0.2, 0.1, 0.05, 0.025}}}}});
  const ContentReport r = run_content(spec);
  CHECK(r.study.m == 1.0);
  CHECK(r.study.liminf_estimate == doctest::Approx(2.0).epsilon(0.05));
  CHECK(content_csv(r).rfind("eps,volume,error,ratio,running_min\n", 0) == 0);
}

}
