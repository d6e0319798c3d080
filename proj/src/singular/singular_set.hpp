#pragma once

#include "common/quadrature.hpp"
#include "common/types.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace lipmass::singular {

/// One geometric piece of a singular set with an exact Euclidean distance.
class Primitive {
 public:
  virtual ~Primitive() = default;
  virtual int dim() const = 0;
  virtual double distance(const Vec& x) const = 0;
  /// Dimension of the primitive as a submanifold (0 for points and clouds).
  virtual int manifold_dimension() const = 0;
  /// Axis-aligned bounding box of the primitive itself.
  virtual void bounds(Vec& lo, Vec& hi) const = 0;
  virtual nlohmann::json describe() const = 0;
};

using PrimitivePtr = std::shared_ptr<const Primitive>;

class PointPrimitive final : public Primitive {
 public:
  explicit PointPrimitive(Vec p) : p_(std::move(p)) {}
  int dim() const override { return static_cast<int>(p_.size()); }
  double distance(const Vec& x) const override { return (x - p_).norm(); }
  int manifold_dimension() const override { return 0; }
  void bounds(Vec& lo, Vec& hi) const override { lo = hi = p_; }
  nlohmann::json describe() const override;

 private:
  Vec p_;
};

class SegmentPrimitive final : public Primitive {
 public:
  SegmentPrimitive(Vec a, Vec b);
  int dim() const override { return static_cast<int>(a_.size()); }
  double distance(const Vec& x) const override;
  int manifold_dimension() const override { return 1; }
  void bounds(Vec& lo, Vec& hi) const override;
  nlohmann::json describe() const override;

 private:
  Vec a_, b_;
};

class PolylinePrimitive final : public Primitive {
 public:
  explicit PolylinePrimitive(std::vector<Vec> vertices);
  int dim() const override { return static_cast<int>(vertices_.front().size()); }
  double distance(const Vec& x) const override;
  int manifold_dimension() const override { return 1; }
  void bounds(Vec& lo, Vec& hi) const override;
  nlohmann::json describe() const override;

 private:
  std::vector<Vec> vertices_;
  std::vector<SegmentPrimitive> segments_;
};

/// Round circle of radius R in the plane through `center` spanned by the
/// orthonormal pair (u, v): dist = sqrt((rho - R)^2 + |q|^2), where rho is the
/// in-plane distance from the center and q the out-of-plane component.
class CirclePrimitive final : public Primitive {
 public:
  CirclePrimitive(Vec center, double radius, Vec u, Vec v);
  /// n = 3 convenience: plane given by its normal.
  static std::shared_ptr<CirclePrimitive> with_normal(Vec center, double radius, const Vec& normal);
  int dim() const override { return static_cast<int>(c_.size()); }
  double distance(const Vec& x) const override;
  int manifold_dimension() const override { return 1; }
  void bounds(Vec& lo, Vec& hi) const override;
  nlohmann::json describe() const override;
  double radius() const { return r_; }

 private:
  Vec c_;
  double r_;
  Vec u_, v_;
};

/// Round (n-1)-sphere: dist = | |x - c| - R |.
class SpherePrimitive final : public Primitive {
 public:
  SpherePrimitive(Vec center, double radius);
  int dim() const override { return static_cast<int>(c_.size()); }
  double distance(const Vec& x) const override { return std::abs((x - c_).norm() - r_); }
  int manifold_dimension() const override { return dim() - 1; }
  void bounds(Vec& lo, Vec& hi) const override;
  nlohmann::json describe() const override;
  double radius() const { return r_; }

 private:
  Vec c_;
  double r_;
};

/// Finite point set with nearest-neighbour distance through a k-d tree.
class PointCloudPrimitive final : public Primitive {
 public:
  explicit PointCloudPrimitive(std::vector<Vec> points, std::string source = {});
  /// One point per line, whitespace-separated coordinates, '#' starts a comment.
  static std::shared_ptr<PointCloudPrimitive> load(const std::string& path, int n);
  int dim() const override { return n_; }
  double distance(const Vec& x) const override;
  int manifold_dimension() const override { return 0; }
  void bounds(Vec& lo, Vec& hi) const override;
  nlohmann::json describe() const override;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    int point = -1, axis = 0, left = -1, right = -1;
  };
  int build(std::vector<int>& ids, int begin, int end, int depth);
  void search(int node, const Vec& x, double& best2) const;

  int n_;
  std::vector<Vec> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
  std::string source_;
};

/// Bounded union of primitives. The empty set has distance +infinity.
class SingularSet {
 public:
  explicit SingularSet(int n) : n_(n) { check_dimension(n); }
  void add(PrimitivePtr p);
  int dim() const { return n_; }
  bool empty() const { return parts_.empty(); }
  const std::vector<PrimitivePtr>& primitives() const { return parts_; }

  double distance(const Vec& x) const;
  /// S_eps membership: dist(x, S) < eps.
  bool in_tube(const Vec& x, double eps) const { return distance(x) < eps; }
  /// max |x| over S (0 when empty).
  double bounding_radius() const;
  /// Bounding box of S; both corners are zero-size at the origin when empty.
  void bounds(Vec& lo, Vec& hi) const;
  /// Largest manifold dimension among the primitives (-1 when empty).
  int manifold_dimension() const;
  nlohmann::json describe() const;

 private:
  int n_;
  std::vector<PrimitivePtr> parts_;
};

/// max |d(x) - d(y)| / |x - y| over `pairs` random pairs drawn in the box.
double distance_lipschitz_ratio(const SingularSet& s, const Vec& lo, const Vec& hi, int pairs, Rng& rng);

}  // namespace lipmass::singular
