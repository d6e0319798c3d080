#include "common/fit.hpp"
#include "common/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lipmass;

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre integrates polynomials up to degree 2n-1 exactly") {
  for (int order : {1, 2, 5, 8, 20}) {
    const Rule1D r = gauss_legendre(order, 0.0, 2.0);
    for (int p = 0; p <= 2 * order - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
      CHECK(s == doctest::Approx(std::pow(2.0, p + 1) / (p + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gauss-Legendre nodes are mirror symmetric bit for bit") {
  const Rule1D r = gauss_legendre(11);
  for (int i = 0; i < 11; ++i) {
    CHECK(r.nodes[i] == -r.nodes[10 - i]);
    CHECK(r.weights[i] == r.weights[10 - i]);
  }
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("sphere areas and ball volumes") {
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(unit_ball_volume(0.0) == doctest::Approx(1.0));
  CHECK(unit_ball_volume(1.0) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2.0) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3.0) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  // omega_{n-1} = n alpha_n
  for (int n = 2; n <= 7; ++n) CHECK(unit_sphere_area(n) == doctest::Approx(n * unit_ball_volume(n)));
}

TEST_CASE("product sphere rule integrates low-degree polynomials on S^2") {
  const SphereRule r = sphere_product_rule(16);
  double one = 0.0, z2 = 0.0, xy = 0.0, x4 = 0.0;
  for (std::size_t i = 0; i < r.normals.size(); ++i) {
    const Vec& v = r.normals[i];
    CHECK(v.norm() == doctest::Approx(1.0));
    one += r.weights[i];
    z2 += r.weights[i] * v[2] * v[2];
    xy += r.weights[i] * v[0] * v[1];
    x4 += r.weights[i] * std::pow(v[0], 4);
  }
  CHECK(one == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-13));
  CHECK(z2 == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-13));
  CHECK(std::abs(xy) < 1e-13);
  CHECK(x4 == doctest::Approx(4.0 * std::numbers::pi / 5.0).epsilon(1e-12));
}

TEST_CASE("Monte Carlo sphere rule is seeded and unbiased") {
  const SphereRule a = sphere_monte_carlo(5, 20000, 7), b = sphere_monte_carlo(5, 20000, 7);
  REQUIRE(a.normals.size() == b.normals.size());
  for (std::size_t i = 0; i < a.normals.size(); i += 997) CHECK((a.normals[i] - b.normals[i]).norm() == 0.0);
  double area = 0.0, x2 = 0.0;
  for (std::size_t i = 0; i < a.normals.size(); ++i) {
    area += a.weights[i];
    x2 += a.weights[i] * a.normals[i][0] * a.normals[i][0];
  }
  CHECK(area == doctest::Approx(unit_sphere_area(5)));
  CHECK(x2 == doctest::Approx(unit_sphere_area(5) / 5.0).epsilon(0.03));
}

TEST_CASE("Rng streams repeat under a fixed seed") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs = differs || x != c.normal();
  }
  CHECK(differs);
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("log-log slope and the power-law limit fit") {
  const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  REQUIRE(loglog_slope(x, y).has_value());
  CHECK(*loglog_slope(x, y) == doctest::Approx(-1.5));
  const std::vector<double> zeros(4, 0.0);
  CHECK_FALSE(loglog_slope(x, zeros).has_value());

  const std::vector<double> rho = {8.0, 16.0, 32.0, 64.0};
  std::vector<double> f;
  for (double r : rho) f.push_back(2.0 + 0.7 * std::pow(r, -1.3));
  const PowerLawFit fit = fit_power_law_limit(rho, f);
  CHECK(fit.limit == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(fit.order == doctest::Approx(1.3).epsilon(1e-4));
  CHECK(fit.residual < 1e-9);
}

TEST_CASE("relative variation") {
  const std::vector<double> same = {2.0, 2.0, 2.0}, spread = {1.0, 1.1, 1.2}, zeros = {0.0, 0.0};
  const std::vector<double> halfzero = {0.0, 1.0};
  CHECK(relative_variation(same) == 0.0);
  CHECK(relative_variation(spread) == doctest::Approx(0.2));
  CHECK(relative_variation(zeros) == 0.0);
  CHECK(std::isinf(relative_variation(halfzero)));
}

}
