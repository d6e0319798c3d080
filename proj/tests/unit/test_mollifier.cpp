#include "mollifier/bounds.hpp"
#include "mollifier/kernel.hpp"
#include "mollifier/mollified_metric.hpp"
#include "mollifier/partition.hpp"
#include "mollifier/width.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace lipmass;
using namespace lipmass::mollifier;

namespace {

std::shared_ptr<singular::SingularSet> origin(int n) {
  auto s = std::make_shared<singular::SingularSet>(n);
  s->add(std::make_shared<singular::PointPrimitive>(Vec::Zero(n)));
  return s;
}

// w = 1 + 0.2 |x| e^{-|x|^2}: Lipschitz, kinked at the origin.
geometry::MetricFieldPtr cone_metric(int n) {
  auto w = std::make_shared<geometry::FunctionField>(n, [](const Vec& x) {
    const double r = x.norm();
    return 1.0 + 0.2 * r * std::exp(-r * r);
  });
  return geometry::conformally_flat(w);
}

// Independent normalization: composite Simpson in r of omega_{n-1} r^{n-1} exp(-1/(1-r^2)).
double simpson_mass(int n) {
  const int m = 20000;
  const double h = 1.0 / m;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double r = i * h;
    const double f = r < 1.0 ? std::pow(r, n - 1) * std::exp(-1.0 / (1.0 - r * r)) : 0.0;
    s += f * (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return unit_sphere_area(n) * s * h / 3.0;
}

}  // namespace

TEST_SUITE("mollifier") {

TEST_CASE("bump kernel normalization matches an independent Simpson rule") {
  for (int n = 3; n <= 7; ++n) {
    const BumpKernel k(n);
    CHECK(k.normalization() * simpson_mass(n) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(k.integral() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const BumpKernel k(3);
  Vec outside = Vec::Zero(3);
  outside[0] = 1.0;
  CHECK(k.value(outside) == 0.0);
  CHECK(BumpKernel::profile(1.5) == 0.0);
  CHECK(BumpKernel::profile(0.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("rescaled kernel keeps unit mass") {
  const BumpKernel unit(3);
  const BumpKernel small = rescale_kernel(unit, 0.25);
  Vec x(3);
  x << 0.05, -0.1, 0.02;
  CHECK(small.value(x) == doctest::Approx(std::pow(0.25, -3) * unit.value(x / 0.25)).epsilon(1e-13));
  CHECK(small.integral() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ball quadrature is normalized and symmetric") {
  const BallQuadrature q = ball_quadrature(BumpKernel(3), 8);
  double sum = 0.0;
  Vec first = Vec::Zero(3);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    CHECK(q.nodes[i].norm() < 1.0);
    sum += q.weights[i];
    first += q.weights[i] * q.nodes[i];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(first.norm() < 1e-15);
  CHECK(q.raw_mass == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("plateau profile is eps near S, zero far away and 3-Lipschitz") {
  const double eps = 0.3;
  CHECK(plateau_profile(0.0, eps) == eps);
  CHECK(plateau_profile(4.0 * eps / 3.0, eps) == doctest::Approx(eps));
  CHECK(plateau_profile(5.0 * eps / 3.0, eps) == doctest::Approx(0.0));
  CHECK(plateau_profile(3.0 * eps, eps) == 0.0);
  for (double d = 0.0; d < 2.0 * eps; d += 0.001) CHECK(std::abs(plateau_profile(d + 0.001, eps) - plateau_profile(d, eps)) <= 0.003 + 1e-12);
}

TEST_CASE("width function regions and band midpoint") {
  const double eps = 0.1;
  // A large sphere is locally flat, so the band midpoint averages the linear ramp.
  auto s = std::make_shared<singular::SingularSet>(3);
  s->add(std::make_shared<singular::SpherePrimitive>(Vec::Zero(3), 100.0));
  auto w = build_width(s, eps, BumpKernel(3), 20);
  Vec x = Vec::Zero(3);
  x[0] = 100.0 + 0.5 * eps;
  CHECK(w->value(x) == eps);
  CHECK(w->region(0.5 * eps) == WidthFunction::Region::kPlateau);
  x[0] = 100.0 + 1.5 * eps;
  CHECK(w->value(x) == doctest::Approx(0.5 * eps).epsilon(1e-3));
  CHECK(w->region(1.5 * eps) == WidthFunction::Region::kBand);
  x[0] = 100.0 + 2.0 * eps;
  CHECK(w->value(x) == 0.0);
  CHECK(w->region(2.0 * eps) == WidthFunction::Region::kZero);
  CHECK_THROWS_AS(build_width(s, eps, BumpKernel(3), 10), Error);
}

TEST_CASE("width function certificate and derivative bounds") {
  const double eps = 0.1;
  auto w = build_width(origin(3), eps, BumpKernel(3), 20);
  const double h = eps / 20.0;
  const WidthBounds b = width_bound_report(*w, h);
  CHECK(b.plateau_violations == 0);
  CHECK(b.zero_violations == 0);
  CHECK(b.plateau_nodes > 0);
  CHECK(b.zero_nodes > 0);
  CHECK(b.sup_d1 <= 3.0 + 10.0 * h);
  CHECK(b.sup_d1 >= 2.5);
  CHECK_THROWS_AS(width_bound_report(*w, eps / 10.0), Error);
}

TEST_CASE("mollified scalars reproduce affine functions and leave the far field alone") {
  auto set = origin(3);
  auto w = build_width(set, 0.1, BumpKernel(3), 20);
  auto affine = std::make_shared<geometry::FunctionField>(3, [](const Vec& x) { return 2.0 + x[0] - 0.5 * x[2]; });
  auto fe = mollify_scalar(affine, w, BumpKernel(3), 8);
  Vec x(3);
  x << 0.03, -0.02, 0.05;
  CHECK(fe->value(x) == doctest::Approx(affine->value(x)).epsilon(1e-14));
  auto kink = std::make_shared<geometry::FunctionField>(3, [](const Vec& x) { return x.norm(); });
  auto ke = mollify_scalar(kink, w, BumpKernel(3), 8);
  CHECK(ke->value(Vec::Zero(3)) > 0.0);
  x << 0.25, 0.0, 0.0;
  CHECK(ke->value(x) == kink->value(x));
}

TEST_CASE("mollified metric is exact outside S_{2eps} and converges uniformly") {
  auto g = cone_metric(3);
  auto set = origin(3);
  double prev = INFINITY;
  for (double eps : {0.2, 0.1}) {
    auto w = build_width(set, eps, BumpKernel(3), 20);
    auto gm = mollify_metric(g, w, BumpKernel(3));
    REQUIRE(gm->has_lattice());
    CHECK(gm->spacing() <= eps / 8.0 + 1e-15);
    CHECK(gm->locality_deviation() <= 1e-10);
    CHECK(gm->min_active_eigenvalue() > 0.0);
    Vec far(3);
    far << 2.0 * eps + 1e-6, 0.0, 0.0;
    CHECK((gm->metric_at(far) - g->metric_at(far)).norm() == 0.0);

    // node cache agrees with the direct mollification sum
    double worst = 0.0, dev = 0.0;
    Mat a, b, c;
    for (const auto& t : gm->tube_nodes()) {
      const Index idx = gm->lattice().multi(t.node);
      gm->node_metric(idx, a);
      gm->direct_value(gm->lattice().position(idx), b);
      g->metric_at(gm->lattice().position(idx), c);
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
      dev = std::max(dev, (a - c).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-13);
    // |w_eps - w| <= Lip(w) eps with Lip(w) <= 0.2 near the origin; g = w^4
    CHECK(dev <= 4.0 * std::pow(1.1, 3) * 0.2 * eps);
    CHECK(dev < prev);
    prev = dev;
    CHECK(gm->metadata()["kernel"] == BumpKernel::id());
  }
}

TEST_CASE("smoothness report rejects p <= n in W^{1,p} mode") {
  auto w = build_width(origin(3), 0.2, BumpKernel(3), 20);
  auto gm = mollify_metric(cone_metric(3), w, BumpKernel(3));
  SmoothnessMode mode;
  mode.type = SmoothnessMode::Type::kW1p;
  mode.p = 3.0;
  CHECK_THROWS_AS(smoothness_bound_report(*gm, mode), Error);
  mode.p = 6.0;
  const SmoothnessBounds b = smoothness_bound_report(*gm, mode);
  CHECK(b.sup_d1 > 0.0);
  CHECK(b.eps_sup_d2 > 0.0);
}

TEST_CASE("partition of unity and blended metrics") {
  Chart left{Vec::Constant(3, -2.0), Vec::Constant(3, 0.5), 0.3};
  Chart right{Vec::Constant(3, -0.5), Vec::Constant(3, 2.0), 0.3};
  PartitionOfUnity pou({left, right});
  std::vector<double> psi;
  for (double t : {-1.5, -0.2, 0.0, 0.3, 1.7}) {
    const Vec x = Vec::Constant(3, t);
    CHECK(pou.sum_deviation(x) < 1e-14);
    pou.weights(x, psi);
    for (double p : psi) CHECK(p >= 0.0);
  }
  CHECK_THROWS_AS(pou.weights(Vec::Constant(3, 5.0), psi), Error);
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(2.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));

  auto g = cone_metric(3);
  auto blended = blend_patches(pou, {g, g});
  const Vec x = Vec::Constant(3, 0.1);
  CHECK((blended->metric_at(x) - g->metric_at(x)).cwiseAbs().maxCoeff() < 1e-14);
  auto two = blend_patches(pou, {geometry::flat_metric(3), g});
  Eigen::SelfAdjointEigenSolver<Mat> es(two->metric_at(x));
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

}
