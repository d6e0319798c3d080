#pragma once

#include "geometry/metric.hpp"

#include <vector>

namespace lipmass::geometry {

/// Gamma^k_ij stored as gamma(k, i, j).
class Christoffel {
 public:
  explicit Christoffel(int n = 3) : n_(n), data_(n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int k, int i, int j) { return data_[(k * n_ + i) * n_ + j]; }
  double operator()(int k, int i, int j) const { return data_[(k * n_ + i) * n_ + j]; }

 private:
  int n_;
  std::vector<double> data_;
};

/// Scratch buffers reused across evaluations so that sweeps over lattices
/// do not allocate per point.
class CurvatureWorkspace {
 public:
  explicit CurvatureWorkspace(int n = 3);
  int dim() const { return n_; }

 private:
  friend void christoffel_from_jet(const MetricJet&, CurvatureWorkspace&, Christoffel&);
  friend double scalar_curvature_from_jet(const MetricJet&, CurvatureWorkspace&);
  int n_;
  Mat ginv;
  std::vector<double> dginv;  // d_m g^{kl} at (m, k, l)
  std::vector<double> dgamma; // d_m Gamma^k_ij at (m, k, i, j)
  Christoffel gamma;
};

/// Inverts the metric of the jet; throws Error(kNumerical) when singular.
Mat inverse_metric(const MetricJet& jet);

void christoffel_from_jet(const MetricJet& jet, CurvatureWorkspace& ws, Christoffel& out);

/// R = g^{ij} (d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik); needs an order-2 jet.
double scalar_curvature_from_jet(const MetricJet& jet, CurvatureWorkspace& ws);

Christoffel christoffel(const MetricField& g, const Vec& x);
double scalar_curvature(const MetricField& g, const Vec& x);

}  // namespace lipmass::geometry
