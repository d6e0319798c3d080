#include "singular/singular_set.hpp"
#include "singular/tube.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lipmass;
using namespace lipmass::singular;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

SingularSet single(PrimitivePtr p) {
  SingularSet s(p->dim());
  s.add(std::move(p));
  return s;
}

}  // namespace

TEST_SUITE("singular") {

TEST_CASE("primitive distances") {
  SegmentPrimitive seg(v3(-1, 0, 0), v3(1, 0, 0));
  CHECK(seg.distance(v3(0, 3, 4)) == doctest::Approx(5.0));
  CHECK(seg.distance(v3(4, 4, 0)) == doctest::Approx(5.0));
  CHECK(seg.distance(v3(0.5, 0, 0)) == 0.0);

  auto circ = CirclePrimitive::with_normal(Vec::Zero(3), 2.0, v3(0, 0, 1));
  CHECK(circ->distance(Vec::Zero(3)) == doctest::Approx(2.0));
  CHECK(circ->distance(v3(3, 0, 0)) == doctest::Approx(1.0));
  CHECK(circ->distance(v3(0, 2, 1)) == doctest::Approx(1.0));
  CHECK(circ->distance(v3(0, 0, 1)) == doctest::Approx(std::sqrt(5.0)));
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * kPi * i / 64.0;
    CHECK(circ->distance(v3(2.0 * std::cos(t), 2.0 * std::sin(t), 0.0)) < 1e-14);
  }

  SpherePrimitive sph(v3(1, 0, 0), 0.5);
  CHECK(sph.distance(v3(1, 0, 0)) == doctest::Approx(0.5));
  CHECK(sph.distance(v3(3, 0, 0)) == doctest::Approx(1.5));
  CHECK(sph.manifold_dimension() == 2);

  PolylinePrimitive poly({v3(0, 0, 0), v3(1, 0, 0), v3(1, 1, 0)});
  CHECK(poly.distance(v3(2, 0.5, 0)) == doctest::Approx(1.0));
  CHECK(poly.distance(v3(0.5, -1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("point cloud k-d tree agrees with brute force") {
  Rng rng(5);
  std::vector<Vec> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(v3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)));
  PointCloudPrimitive cloud(pts);
  for (int t = 0; t < 200; ++t) {
    const Vec x = v3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    double best = INFINITY;
    for (const Vec& p : pts) best = std::min(best, (x - p).norm());
    CHECK(cloud.distance(x) == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("point cloud file loader") {
  auto cloud = PointCloudPrimitive::load(std::string(LIPMASS_TEST_DATA) + "/cloud3.txt", 3);
  CHECK(cloud->size() == 3);
  CHECK(cloud->distance(v3(0, 2, 0)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(PointCloudPrimitive::load(std::string(LIPMASS_TEST_DATA) + "/missing.txt", 3), Error);
}

TEST_CASE("set distance is the minimum over parts and is 1-Lipschitz") {
  SingularSet s(3);
  CHECK(s.empty());
  CHECK(std::isinf(s.distance(Vec::Zero(3))));
  CHECK(s.manifold_dimension() == -1);
  s.add(std::make_shared<PointPrimitive>(v3(2, 0, 0)));
  s.add(CirclePrimitive::with_normal(Vec::Zero(3), 0.5, v3(0, 0, 1)));
  CHECK(s.distance(v3(1.5, 0, 0)) == doctest::Approx(0.5));
  CHECK(s.manifold_dimension() == 1);
  CHECK(s.bounding_radius() == doctest::Approx(2.0));
  CHECK(s.in_tube(v3(0.65, 0, 0), 0.2));
  CHECK_FALSE(s.in_tube(v3(0.65, 0, 0), 0.1));
  Rng rng(3);
  CHECK(distance_lipschitz_ratio(s, Vec::Constant(3, -3), Vec::Constant(3, 3), 2000, rng) <= 1.0 + 1e-12);
}

TEST_CASE("tube volumes match closed forms") {
  const double eps = 0.1;
  SUBCASE("point: ball") {
    const TubeVolume t = tube_volume(single(std::make_shared<PointPrimitive>(Vec::Zero(3))), eps);
    CHECK(t.volume == doctest::Approx(4.0 / 3.0 * kPi * std::pow(eps, 3)).epsilon(5e-3));
  }
  SUBCASE("segment: capsule") {
    const TubeVolume t =
        tube_volume(single(std::make_shared<SegmentPrimitive>(v3(-1, 0, 0), v3(1, 0, 0))), eps);
    CHECK(t.volume == doctest::Approx(kPi * eps * eps * 2.0 + 4.0 / 3.0 * kPi * std::pow(eps, 3)).epsilon(5e-3));
  }
  SUBCASE("circle: solid torus") {
    const TubeVolume t = tube_volume(single(CirclePrimitive::with_normal(Vec::Zero(3), 1.0, v3(0, 0, 1))), eps);
    CHECK(t.volume == doctest::Approx(2.0 * kPi * kPi * eps * eps).epsilon(5e-3));
  }
  SUBCASE("sphere: shell") {
    const TubeVolume t = tube_volume(single(std::make_shared<SpherePrimitive>(Vec::Zero(3), 0.5)), eps);
    CHECK(t.volume == doctest::Approx(4.0 / 3.0 * kPi * (std::pow(0.6, 3) - std::pow(0.4, 3))).epsilon(5e-3));
  }
  SUBCASE("point in n = 5") {
    const TubeVolume t = tube_volume(single(std::make_shared<PointPrimitive>(Vec::Zero(5))), eps);
    CHECK(t.volume == doctest::Approx(unit_ball_volume(5) * std::pow(eps, 5)).epsilon(1e-2));
  }
}

TEST_CASE("Monte Carlo and grid tube volumes agree with the capsule volume") {
  const SingularSet s = single(std::make_shared<SegmentPrimitive>(v3(-1, 0, 0), v3(1, 0, 0)));
  const double exact = kPi * 0.04 * 2.0 + 4.0 / 3.0 * kPi * 0.008;
  TubeOptions mc;
  mc.method = TubeOptions::Method::kMonteCarlo;
  mc.samples = 400000;
  const TubeVolume a = tube_volume(s, 0.2, nullptr, mc), b = tube_volume(s, 0.2);
  CHECK(std::abs(a.volume - exact) < 4.0 * a.error);
  // The cylinder is invariant along its axis, so lattice-point error of the
  // cross-section does not average out: about 1% at 16 cells per radius.
  CHECK(b.volume == doctest::Approx(exact).epsilon(0.015));
  const TubeVolume again = tube_volume(s, 0.2, nullptr, mc);
  CHECK(again.volume == a.volume);
}

TEST_CASE("metric-weighted tube volume scales with sqrt(det g)") {
  const SingularSet s = single(std::make_shared<PointPrimitive>(Vec::Zero(3)));
  auto g = std::make_shared<geometry::FunctionMetric>(3, [](const Vec&, Mat& m) { m = 4.0 * Mat::Identity(3, 3); });
  const TubeVolume plain = tube_volume(s, 0.1), weighted = tube_volume(s, 0.1, g.get());
  CHECK(weighted.volume == doctest::Approx(8.0 * plain.volume).epsilon(1e-12));
}

TEST_CASE("tube options are validated") {
  const SingularSet s = single(std::make_shared<PointPrimitive>(Vec::Zero(3)));
  TubeOptions coarse;
  coarse.cell_fraction = 0.2;
  CHECK_THROWS_AS(tube_volume(s, 0.1, nullptr, coarse), Error);
  CHECK_THROWS_AS(tube_volume(s, -0.1), Error);
}

TEST_CASE("lower Minkowski content of model sets") {
  const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
  const MinkowskiStudy point = minkowski_content(single(std::make_shared<PointPrimitive>(Vec::Zero(3))), 0.0, eps);
  CHECK(point.liminf_estimate == doctest::Approx(1.0).epsilon(0.02));
  CHECK(point.normalizer == doctest::Approx(4.0 * kPi / 3.0));
  const MinkowskiStudy segment = minkowski_content(
      single(std::make_shared<SegmentPrimitive>(v3(-1, 0, 0), v3(1, 0, 0))), 1.0, eps);
  CHECK(segment.liminf_estimate == doctest::Approx(2.0).epsilon(0.05));
  const MinkowskiStudy circle = minkowski_content(
      single(CirclePrimitive::with_normal(Vec::Zero(3), 1.0, v3(0, 0, 1))), 1.0, eps);
  CHECK(circle.liminf_estimate == doctest::Approx(2.0 * kPi).epsilon(0.05));
  for (std::size_t i = 1; i < segment.running_min.size(); ++i)
    CHECK(segment.running_min[i] <= segment.running_min[i - 1]);
  const std::vector<double> bad = {0.1, 0.2};
  CHECK_THROWS_AS(minkowski_content(single(std::make_shared<PointPrimitive>(Vec::Zero(3))), 0.0, bad), Error);
}

}
