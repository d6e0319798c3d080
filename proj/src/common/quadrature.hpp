#pragma once

#include "common/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace lipmass {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` nodes on [a, b].
Rule1D gauss_legendre(int order, double a = -1.0, double b = 1.0);

/// Area of the unit (k-1)-sphere in R^k, i.e. omega_{k-1}.
double unit_sphere_area(int k);

/// Volume of the unit ball in R^k for real k >= 0 (Gamma-function formula).
double unit_ball_volume(double k);

/// Quadrature nodes on the coordinate sphere of radius rho about the origin.
/// Points are the outward unit normals; weights already include the area element.
struct SphereRule {
  int dim = 3;
  std::vector<Vec> normals;
  std::vector<double> weights;
  bool monte_carlo = false;
};

/// Product rule for n = 3: Gauss-Legendre in cos(theta), equispaced azimuth.
SphereRule sphere_product_rule(int order);

/// Uniform Monte Carlo rule on S^{n-1}; weights are area/N.
SphereRule sphere_monte_carlo(int n, int samples, std::uint64_t seed);

/// Seeded generator. Normal deviates are produced with Box-Muller so that the
/// stream is the same across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lipmass
