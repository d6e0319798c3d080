#include "geometry/curvature.hpp"
#include "geometry/lattice.hpp"
#include "geometry/lattice_io.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lipmass;
using namespace lipmass::geometry;

namespace {

// g = (1 + 0.3 e^{-|x|^2})^4 delta in n = 3.
std::shared_ptr<IsotropicMetric> bump_metric() {
  auto w = std::make_shared<RadialField>(3, Vec::Zero(3), [](double r) {
    const double e = std::exp(-r * r);
    return RadialJet{1.0 + 0.3 * e, -0.6 * r * e, 0.3 * e * (4.0 * r * r - 2.0)};
  });
  return conformally_flat(w);
}

double lattice_curvature_error(double h) {
  auto g = bump_metric();
  Vec lo = Vec::Constant(3, 0.2 - 2.0 * h), hi = Vec::Constant(3, 0.2 + 2.0 * h);
  const Lattice lat = Lattice::from_box(lo, hi, h);
  auto lm = LatticeMetric::sample(*g, lat);
  Index idx{};
  REQUIRE(lat.node_at(Vec::Constant(3, 0.2), idx));
  MetricJet jet(3);
  lm->node_partials(idx, 2, jet);
  CurvatureWorkspace ws(3);
  return std::abs(scalar_curvature_from_jet(jet, ws) - scalar_curvature(*g, Vec::Constant(3, 0.2)));
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("linear and multi indices round-trip") {
  const Lattice lat(Vec::Zero(4), 0.5, {3, 4, 5, 6});
  CHECK(lat.size() == 360);
  CHECK(lat.stride(3) == 1);
  CHECK(lat.stride(0) == 120);
  for (std::int64_t i = 0; i < lat.size(); i += 7) CHECK(lat.linear(lat.multi(i)) == i);
}

TEST_CASE("covering lattice contains the box and keeps nodes on multiples of h") {
  Vec lo(3), hi(3);
  lo << -0.33, 0.1, -1.0;
  hi << 0.41, 0.9, 1.0;
  const Lattice lat = Lattice::covering(lo, hi, 0.125);
  for (int k = 0; k < 3; ++k) {
    CHECK(lat.lower()[k] <= lo[k]);
    CHECK(lat.upper()[k] >= hi[k]);
    CHECK(std::abs(lat.lower()[k] / 0.125 - std::round(lat.lower()[k] / 0.125)) < 1e-12);
  }
  CHECK(lat.covers(Vec::Zero(3)));
}

TEST_CASE("from_box rejects non-integral extents") {
  CHECK_NOTHROW(Lattice::from_box(Vec::Zero(3), Vec::Constant(3, 1.0), 0.25));
  CHECK_THROWS_AS(Lattice::from_box(Vec::Zero(3), Vec::Constant(3, 1.0), 0.3), Error);
}

TEST_CASE("node lookup, location and stencil interior") {
  const Lattice lat(Vec::Constant(3, -1.0), 0.5, {5, 5, 5});
  Index idx{};
  CHECK(lat.node_at(Vec::Zero(3), idx));
  CHECK(idx[0] == 2);
  Vec off = Vec::Constant(3, 0.1);
  CHECK_FALSE(lat.node_at(off, idx));
  Index cell{};
  Vec t;
  lat.locate(off, cell, t);
  CHECK(cell[0] == 2);
  CHECK(t[0] == doctest::Approx(0.2));
  CHECK(lat.interior(Index{1, 1, 1}));
  CHECK_FALSE(lat.interior(Index{0, 1, 1}));
  CHECK_FALSE(lat.contains(Index{5, 0, 0}));
}

TEST_CASE("multilinear interpolation reproduces affine metrics exactly") {
  auto affine = std::make_shared<FunctionMetric>(3, [](const Vec& x, Mat& g) {
    g = Mat::Identity(3, 3) * (2.0 + 0.1 * x[0] - 0.2 * x[1] + 0.05 * x[2]);
    g(0, 1) = g(1, 0) = 0.01 * x[2];
  });
  const Lattice lat(Vec::Constant(3, -1.0), 0.25, {9, 9, 9});
  auto lm = LatticeMetric::sample(*affine, lat);
  Vec x(3);
  x << 0.13, -0.37, 0.61;
  CHECK((lm->metric_at(x) - affine->metric_at(x)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("lattice curvature converges at second order") {
  const double e1 = lattice_curvature_error(0.02), e2 = lattice_curvature_error(0.01);
  const double ratio = e1 / e2;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("lattice files round-trip in text and binary") {
  auto g = bump_metric();
  const Lattice lat(Vec::Constant(3, -0.3), 0.1, {4, 5, 6});
  auto lm = LatticeMetric::sample(*g, lat);
  for (auto fmt : {LatticeFormat::kText, LatticeFormat::kBinary}) {
    std::stringstream buf;
    write_lattice(buf, *lm, fmt);
    auto back = read_lattice(buf);
    CHECK(back->lattice().size() == lat.size());
    CHECK(back->lattice().spacing() == lat.spacing());
    CHECK(back->components() == lm->components());
  }
  std::stringstream junk("not a lattice");
  CHECK_THROWS_AS(read_lattice(junk), Error);
}

}
