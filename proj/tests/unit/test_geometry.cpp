#include "geometry/curvature.hpp"
#include "geometry/diagnostics.hpp"
#include "geometry/metric.hpp"

#include <doctest.h>

#include <cmath>

using namespace lipmass;
using namespace lipmass::geometry;

namespace {

Vec point3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// Stereographic round sphere of radius 1: g = 4 / (1 + |x|^2)^2 delta, R = n(n-1).
std::shared_ptr<FunctionMetric> round_sphere(int n, bool analytic) {
  auto metric = [n](const Vec& x, Mat& g) { g = Mat::Identity(n, n) * (4.0 / std::pow(1.0 + x.squaredNorm(), 2)); };
  FunctionMetric::JetFn jet;
  if (analytic)
    jet = [n](const Vec& x, int order, MetricJet& j) {
      const double s = 1.0 + x.squaredNorm();
      j.set_metric(Mat::Identity(n, n) * (4.0 / (s * s)));
      j.zero_derivatives();
      j.order = order;
      // F = 4 s^-2, dF = -16 s^-3 x, ddF = 96 s^-4 x x^T - 16 s^-3 I
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          j.dg(i, i, k) = -16.0 * x[k] / (s * s * s);
          if (order >= 2)
            for (int l = 0; l < n; ++l)
              j.ddg(i, i, k, l) = 96.0 * x[k] * x[l] / std::pow(s, 4) - (k == l ? 16.0 / (s * s * s) : 0.0);
        }
    };
  return std::make_shared<FunctionMetric>(n, metric, jet);
}

// Pullback of delta by x -> x + 0.1 (sin x_2, sin x_3, sin x_1): flat, not diagonal.
std::shared_ptr<FunctionMetric> sheared_flat() {
  return std::make_shared<FunctionMetric>(3, [](const Vec& x, Mat& g) {
    Mat j = Mat::Identity(3, 3);
    j(0, 1) = 0.1 * std::cos(x[1]);
    j(1, 2) = 0.1 * std::cos(x[2]);
    j(2, 0) = 0.1 * std::cos(x[0]);
    g = j.transpose() * j;
  });
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("flat metric has vanishing Christoffels and curvature") {
  for (int n = 3; n <= 7; ++n) {
    auto g = flat_metric(n);
    const Vec x = Vec::Constant(n, 0.3);
    CHECK(scalar_curvature(*g, x) == 0.0);
    const Christoffel c = christoffel(*g, x);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(c(k, i, j) == 0.0);
  }
}

TEST_CASE("round sphere chart has R = n(n-1)") {
  for (int n : {3, 4, 5}) {
    const Vec x = Vec::LinSpaced(n, -0.4, 0.5);
    CHECK(scalar_curvature(*round_sphere(n, true), x) == doctest::Approx(n * (n - 1.0)).epsilon(1e-12));
    CHECK(scalar_curvature(*round_sphere(n, false), x) == doctest::Approx(n * (n - 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("Christoffels of a conformally flat metric") {
  auto g = round_sphere(3, true);
  const Vec x = point3(0.2, -0.1, 0.4);
  const Christoffel c = christoffel(*g, x);
  // g = F delta: Gamma^k_ij = (delta_ki d_j F + delta_kj d_i F - delta_ij d_k F) / 2F
  const double s = 1.0 + x.squaredNorm();
  const double F = 4.0 / (s * s);
  const Vec dF = -16.0 / (s * s * s) * x;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expect = ((k == i) * dF[j] + (k == j) * dF[i] - (i == j) * dF[k]) / (2.0 * F);
        CHECK(c(k, i, j) == doctest::Approx(expect).epsilon(1e-12));
      }
}

TEST_CASE("a non-diagonal pullback of the flat metric is flat") {
  auto g = sheared_flat();
  for (const Vec& x : {point3(0.1, 0.2, 0.3), point3(-1.0, 0.5, 2.0)}) CHECK(std::abs(scalar_curvature(*g, x)) < 1e-5);
}

TEST_CASE("conformally flat curvature matches -4(n-1)/(n-2) w^{-(n+2)/(n-2)} Lap w") {
  for (int n : {3, 5}) {
    // w = 1 + 0.2 exp(-|x|^2); Lap w = 0.2 e^{-r^2} (4 r^2 - 2n)
    auto w = std::make_shared<RadialField>(n, Vec::Zero(n), [](double r) {
      const double e = std::exp(-r * r);
      return RadialJet{1.0 + 0.2 * e, -0.4 * r * e, 0.2 * e * (4.0 * r * r - 2.0)};
    });
    auto g = conformally_flat(w);
    const Vec x = Vec::LinSpaced(n, 0.1, 0.6);
    const double r2 = x.squaredNorm(), e = std::exp(-r2);
    const double lap = 0.2 * e * (4.0 * r2 - 2.0 * n);
    const double wv = 1.0 + 0.2 * e;
    const double expect = -4.0 * (n - 1.0) / (n - 2.0) * std::pow(wv, -(n + 2.0) / (n - 2.0)) * lap;
    CHECK(scalar_curvature(*g, x) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("Schwarzschild is scalar flat away from the horizon center") {
  auto w = std::make_shared<RadialField>(3, Vec::Zero(3), [](double r) {
    return RadialJet{1.0 + 0.5 / r, -0.5 / (r * r), 1.0 / (r * r * r)};
  });
  auto g = conformally_flat(w);
  for (double r : {0.7, 2.0, 9.0}) CHECK(std::abs(scalar_curvature(*g, point3(r, 0.0, 0.0))) < 1e-12);
}

TEST_CASE("conformal scaling composes with the product rule") {
  auto base = round_sphere(3, true);
  auto u = std::make_shared<RadialField>(3, Vec::Zero(3), [](double r) {
    return RadialJet{2.0 + r * r, 2.0 * r, 2.0};
  });
  ConformallyScaledMetric scaled(base, u, 4.0);
  auto composed = std::make_shared<FunctionMetric>(3, [&](const Vec& x, Mat& g) {
    base->metric_at(x, g);
    g *= std::pow(2.0 + x.squaredNorm(), 4.0);
  });
  const Vec x = point3(0.3, 0.1, -0.2);
  CHECK((scaled.metric_at(x) - composed->metric_at(x)).norm() < 1e-13);
  CHECK(scalar_curvature(scaled, x) == doctest::Approx(scalar_curvature(*composed, x)).epsilon(1e-6));
}

TEST_CASE("validate_form rejects asymmetric and indefinite forms") {
  Mat g = Mat::Identity(3, 3);
  CHECK_NOTHROW(validate_form(g, "test"));
  g(0, 1) = 0.5;
  CHECK_THROWS_AS(validate_form(g, "test"), Error);
  g = Mat::Identity(3, 3);
  g(2, 2) = -1.0;
  CHECK_THROWS_AS(validate_form(g, "test"), Error);
}

TEST_CASE("decay profile enforces the asymptotic-flatness thresholds") {
  CHECK_NOTHROW(DecayProfile(3, 1.0, 4.0));
  CHECK_THROWS_AS(DecayProfile(3, 0.5, 4.0), Error);
  CHECK_THROWS_AS(DecayProfile(3, 1.0, 3.0), Error);
  CHECK_THROWS_AS(DecayProfile(5, 1.5, 6.0), Error);
}

TEST_CASE("uniform equivalence constant") {
  CHECK(uniform_equivalence_constant(*flat_metric(4), SampleDomain::box(Vec::Constant(4, -1), Vec::Constant(4, 1), 5)) ==
        doctest::Approx(1.0));
  auto w = std::make_shared<RadialField>(3, Vec::Zero(3), [](double r) {
    return RadialJet{1.0 + 0.5 / r, -0.5 / (r * r), 1.0 / (r * r * r)};
  });
  // factor (1 + 1/(2r))^4 is largest on the inner shell r = 1
  CHECK(uniform_equivalence_constant(*conformally_flat(w), SampleDomain::annulus(1.0, 4.0, 8)) ==
        doctest::Approx(std::pow(1.5, 4)).epsilon(1e-12));
}

TEST_CASE("decay fit recovers Schwarzschild orders") {
  auto w = std::make_shared<RadialField>(3, Vec::Zero(3), [](double r) {
    return RadialJet{1.0 + 0.5 / r, -0.5 / (r * r), 1.0 / (r * r * r)};
  });
  const DecayFitResult fit = decay_fit(*conformally_flat(w), {8.0, 16.0, 32.0, 64.0});
  REQUIRE(fit.metric.order.has_value());
  CHECK(*fit.metric.order == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fit.metric_ok);
  CHECK(fit.curvature.at_floor());
  CHECK(fit.curvature_ok);
}

TEST_CASE("sample points are deterministic and inside the domain") {
  const auto a = sample_points(SampleDomain::annulus(1.0, 2.0, 4), 5);
  const auto b = sample_points(SampleDomain::annulus(1.0, 2.0, 4), 5);
  REQUIRE(a.size() == b.size());
  REQUIRE(!a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] - b[i]).norm() == 0.0);
    CHECK(a[i].norm() >= 1.0 - 1e-12);
    CHECK(a[i].norm() <= 2.0 + 1e-12);
  }
}

}
