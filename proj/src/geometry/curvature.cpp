#include "geometry/curvature.hpp"

#include <cmath>

namespace lipmass::geometry {

CurvatureWorkspace::CurvatureWorkspace(int n)
    : n_(n), ginv(n, n), dginv(n * n * n, 0.0), dgamma(n * n * n * n, 0.0), gamma(n) {}

Mat inverse_metric(const MetricJet& jet) {
  const Mat g = jet.metric();
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      require(std::isfinite(g(i, j)), ErrorCode::kNumerical, "non-finite metric entry");
  Eigen::LLT<Mat> llt(g);
  require(llt.info() == Eigen::Success, ErrorCode::kNumerical,
          "metric matrix is singular or not positive definite");
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

void christoffel_from_jet(const MetricJet& jet, CurvatureWorkspace& ws, Christoffel& out) {
  const int n = jet.dim();
  require(ws.n_ == n && out.dim() == n, ErrorCode::kInvalidArgument, "workspace dimension mismatch");
  ws.ginv = inverse_metric(jet);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += ws.ginv(k, l) * (jet.dg(j, l, i) + jet.dg(i, l, j) - jet.dg(i, j, l));
        out(k, i, j) = out(k, j, i) = 0.5 * acc;
      }
}

double scalar_curvature_from_jet(const MetricJet& jet, CurvatureWorkspace& ws) {
  const int n = jet.dim();
  require(jet.order >= 2, ErrorCode::kInvalidArgument, "scalar curvature needs second partials");
  christoffel_from_jet(jet, ws, ws.gamma);
  const Mat& gi = ws.ginv;
  auto dginv = [&](int m, int k, int l) -> double& { return ws.dginv[(m * n + k) * n + l]; };
  auto dgamma = [&](int m, int k, int i, int j) -> double& {
    return ws.dgamma[((m * n + k) * n + i) * n + j];
  };
  // d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
          if (gi(k, a) == 0.0) continue;
          for (int b = 0; b < n; ++b) acc += gi(k, a) * jet.dg(a, b, m) * gi(b, l);
        }
        dginv(m, k, l) = dginv(m, l, k) = -acc;
      }
  // d_m Gamma^k_ij
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            const double t = jet.dg(j, l, i) + jet.dg(i, l, j) - jet.dg(i, j, l);
            const double dt = jet.ddg(j, l, i, m) + jet.ddg(i, l, j, m) - jet.ddg(i, j, l, m);
            acc += dginv(m, k, l) * t + gi(k, l) * dt;
          }
          dgamma(m, k, i, j) = dgamma(m, k, j, i) = 0.5 * acc;
        }
      }
  const Christoffel& G = ws.gamma;
  double scalar = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (gi(i, j) == 0.0) continue;
      double ric = 0.0;
      for (int k = 0; k < n; ++k) {
        ric += dgamma(k, k, i, j) - dgamma(j, k, i, k);
        for (int l = 0; l < n; ++l) ric += G(k, k, l) * G(l, i, j) - G(k, j, l) * G(l, i, k);
      }
      scalar += gi(i, j) * ric;
    }
  return scalar;
}

Christoffel christoffel(const MetricField& g, const Vec& x) {
  const int n = g.dim();
  MetricJet jet(n);
  g.partials(x, 1, jet);
  CurvatureWorkspace ws(n);
  Christoffel out(n);
  christoffel_from_jet(jet, ws, out);
  return out;
}

double scalar_curvature(const MetricField& g, const Vec& x) {
  const int n = g.dim();
  MetricJet jet(n);
  g.partials(x, 2, jet);
  CurvatureWorkspace ws(n);
  return scalar_curvature_from_jet(jet, ws);
}

}  // namespace lipmass::geometry
