#include "singular/singular_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace lipmass::singular {
namespace {

nlohmann::json vec_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void check_point(const Vec& v, int n, const char* what) {
  require(v.size() == n, ErrorCode::kInvalidArgument, std::string(what) + ": dimension mismatch");
  require(v.allFinite(), ErrorCode::kInvalidArgument, std::string(what) + ": non-finite coordinate");
}

}  // namespace

nlohmann::json PointPrimitive::describe() const { return {{"type", "point"}, {"at", vec_json(p_)}}; }

SegmentPrimitive::SegmentPrimitive(Vec a, Vec b) : a_(std::move(a)), b_(std::move(b)) {
  check_point(b_, static_cast<int>(a_.size()), "segment endpoint");
}

double SegmentPrimitive::distance(const Vec& x) const {
  const Vec d = b_ - a_;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((x - a_).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (x - a_ - t * d).norm();
}

void SegmentPrimitive::bounds(Vec& lo, Vec& hi) const {
  lo = a_.cwiseMin(b_);
  hi = a_.cwiseMax(b_);
}

nlohmann::json SegmentPrimitive::describe() const {
  return {{"type", "segment"}, {"from", vec_json(a_)}, {"to", vec_json(b_)}};
}

PolylinePrimitive::PolylinePrimitive(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
  require(vertices_.size() >= 2, ErrorCode::kInvalidArgument, "polyline needs at least 2 vertices");
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) segments_.emplace_back(vertices_[i], vertices_[i + 1]);
}

double PolylinePrimitive::distance(const Vec& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) d = std::min(d, s.distance(x));
  return d;
}

void PolylinePrimitive::bounds(Vec& lo, Vec& hi) const {
  lo = hi = vertices_.front();
  for (const Vec& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
}

nlohmann::json PolylinePrimitive::describe() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const Vec& v : vertices_) pts.push_back(vec_json(v));
  return {{"type", "polyline"}, {"vertices", pts}};
}

CirclePrimitive::CirclePrimitive(Vec center, double radius, Vec u, Vec v)
    : c_(std::move(center)), r_(radius), u_(std::move(u)), v_(std::move(v)) {
  const int n = static_cast<int>(c_.size());
  check_point(u_, n, "circle axis");
  check_point(v_, n, "circle axis");
  require(radius > 0.0, ErrorCode::kInvalidArgument, "circle radius must be positive");
  require(u_.norm() > 0.0, ErrorCode::kInvalidArgument, "circle axis must be nonzero");
  u_.normalize();
  v_ -= v_.dot(u_) * u_;
  require(v_.norm() > 1e-12, ErrorCode::kInvalidArgument, "circle axes must be independent");
  v_.normalize();
}

std::shared_ptr<CirclePrimitive> CirclePrimitive::with_normal(Vec center, double radius, const Vec& normal) {
  require(normal.size() == 3 && normal.norm() > 0.0, ErrorCode::kInvalidArgument,
          "circle normal form is available for n = 3 with a nonzero normal");
  const Eigen::Vector3d nn = Eigen::Vector3d(normal[0], normal[1], normal[2]).normalized();
  Eigen::Vector3d seed = std::abs(nn[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d u = (seed - seed.dot(nn) * nn).normalized();
  Eigen::Vector3d v = nn.cross(u);
  if (std::abs(nn[2]) == 1.0) {
    u = Eigen::Vector3d::UnitX();
    v = nn[2] > 0 ? Eigen::Vector3d::UnitY() : Eigen::Vector3d(0, -1, 0);
  }
  return std::make_shared<CirclePrimitive>(std::move(center), radius, Vec(u), Vec(v));
}

double CirclePrimitive::distance(const Vec& x) const {
  const Vec d = x - c_;
  const double a = d.dot(u_), b = d.dot(v_);
  // Out-of-plane part as a vector; |d|^2 - a^2 - b^2 cancels badly near the circle.
  const double q2 = (d - a * u_ - b * v_).squaredNorm();
  const double rho = std::hypot(a, b);
  return std::sqrt((rho - r_) * (rho - r_) + q2);
}

void CirclePrimitive::bounds(Vec& lo, Vec& hi) const {
  const int n = dim();
  lo.resize(n);
  hi.resize(n);
  for (int k = 0; k < n; ++k) {
    const double e = r_ * std::hypot(u_[k], v_[k]);
    lo[k] = c_[k] - e;
    hi[k] = c_[k] + e;
  }
}

nlohmann::json CirclePrimitive::describe() const {
  return {{"type", "circle"}, {"center", vec_json(c_)}, {"radius", r_}, {"axes", {vec_json(u_), vec_json(v_)}}};
}

SpherePrimitive::SpherePrimitive(Vec center, double radius) : c_(std::move(center)), r_(radius) {
  require(radius > 0.0, ErrorCode::kInvalidArgument, "sphere radius must be positive");
}

void SpherePrimitive::bounds(Vec& lo, Vec& hi) const {
  lo = c_.array() - r_;
  hi = c_.array() + r_;
}

nlohmann::json SpherePrimitive::describe() const {
  return {{"type", "sphere"}, {"center", vec_json(c_)}, {"radius", r_}};
}

PointCloudPrimitive::PointCloudPrimitive(std::vector<Vec> points, std::string source)
    : n_(points.empty() ? 0 : static_cast<int>(points.front().size())),
      points_(std::move(points)),
      source_(std::move(source)) {
  require(!points_.empty(), ErrorCode::kInvalidArgument, "point cloud is empty");
  for (const Vec& p : points_) check_point(p, n_, "point cloud entry");
  std::vector<int> ids(points_.size());
  std::iota(ids.begin(), ids.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(ids, 0, static_cast<int>(ids.size()), 0);
}

std::shared_ptr<PointCloudPrimitive> PointCloudPrimitive::load(const std::string& path, int n) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open point cloud " + path);
  std::vector<Vec> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    require(ls.eof(), ErrorCode::kIo, path + ":" + std::to_string(lineno) + ": unparsable coordinate");
    if (vals.empty()) continue;
    require(static_cast<int>(vals.size()) == n, ErrorCode::kIo,
            path + ":" + std::to_string(lineno) + ": expected " + std::to_string(n) + " coordinates");
    pts.push_back(Eigen::Map<const Eigen::VectorXd>(vals.data(), n));
  }
  return std::make_shared<PointCloudPrimitive>(std::move(pts), path);
}

int PointCloudPrimitive::build(std::vector<int>& ids, int begin, int end, int depth) {
  if (begin >= end) return -1;
  const int axis = depth % n_;
  const int mid = (begin + end) / 2;
  std::nth_element(ids.begin() + begin, ids.begin() + mid, ids.begin() + end,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back({ids[mid], axis, -1, -1});
  const int left = build(ids, begin, mid, depth + 1);
  const int right = build(ids, mid + 1, end, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void PointCloudPrimitive::search(int node, const Vec& x, double& best2) const {
  if (node < 0) return;
  const Node& nd = nodes_[node];
  const Vec& p = points_[nd.point];
  best2 = std::min(best2, (x - p).squaredNorm());
  const double diff = x[nd.axis] - p[nd.axis];
  const int near = diff < 0 ? nd.left : nd.right;
  const int far = diff < 0 ? nd.right : nd.left;
  search(near, x, best2);
  if (diff * diff < best2) search(far, x, best2);
}

double PointCloudPrimitive::distance(const Vec& x) const {
  double best2 = std::numeric_limits<double>::infinity();
  search(root_, x, best2);
  return std::sqrt(best2);
}

void PointCloudPrimitive::bounds(Vec& lo, Vec& hi) const {
  lo = hi = points_.front();
  for (const Vec& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

nlohmann::json PointCloudPrimitive::describe() const {
  nlohmann::json j = {{"type", "point-cloud"}, {"count", points_.size()}};
  if (!source_.empty()) j["file"] = source_;
  return j;
}

void SingularSet::add(PrimitivePtr p) {
  require(p && p->dim() == n_, ErrorCode::kInvalidArgument, "primitive dimension does not match the chart");
  parts_.push_back(std::move(p));
}

double SingularSet::distance(const Vec& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : parts_) d = std::min(d, p->distance(x));
  return d;
}

double SingularSet::bounding_radius() const {
  if (empty()) return 0.0;
  Vec lo, hi;
  double r = 0.0;
  for (const auto& p : parts_) {
    p->bounds(lo, hi);
    // Farthest box corner from the origin; an upper bound for max |x| over S.
    const double box = lo.cwiseAbs().cwiseMax(hi.cwiseAbs()).norm();
    r = std::max(r, box);
  }
  return r;
}

void SingularSet::bounds(Vec& lo, Vec& hi) const {
  lo = Vec::Zero(n_);
  hi = Vec::Zero(n_);
  bool first = true;
  Vec a, b;
  for (const auto& p : parts_) {
    p->bounds(a, b);
    lo = first ? a : Vec(lo.cwiseMin(a));
    hi = first ? b : Vec(hi.cwiseMax(b));
    first = false;
  }
}

int SingularSet::manifold_dimension() const {
  int d = -1;
  for (const auto& p : parts_) d = std::max(d, p->manifold_dimension());
  return d;
}

nlohmann::json SingularSet::describe() const {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : parts_) a.push_back(p->describe());
  return a;
}

double distance_lipschitz_ratio(const SingularSet& s, const Vec& lo, const Vec& hi, int pairs, Rng& rng) {
  const int n = s.dim();
  double worst = 0.0;
  Vec x(n), y(n);
  for (int i = 0; i < pairs; ++i) {
    for (int k = 0; k < n; ++k) {
      x[k] = rng.uniform(lo[k], hi[k]);
      y[k] = rng.uniform(lo[k], hi[k]);
    }
    const double sep = (x - y).norm();
    if (sep > 0.0) worst = std::max(worst, std::abs(s.distance(x) - s.distance(y)) / sep);
  }
  return worst;
}

}  // namespace lipmass::singular
