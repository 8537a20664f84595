// Discrete closed plane curves and their flowing-finite-volume geometry.
//
// A curve is stored as M nodes X_1..X_M (rows of an M x 2 matrix, zero-based
// in code). Indexing is periodic: X_0 := X_M and X_{M+1} := X_1. Segment i
// joins X_{i-1} to X_i, so d(0) is the closing segment |X_1 - X_M|.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmcf {

template <typename Scalar>
using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, 2, 1>;

enum class Orientation { counterclockwise, clockwise };

/// Segments shorter than this (in length units) are treated as collapsed.
inline constexpr double kDefaultEpsilonGeom = 1e-12;

/// Thrown when a segment length falls below the degeneracy threshold.
class DegenerateSegmentError : public std::runtime_error {
 public:
  DegenerateSegmentError(Eigen::Index segment, double length)
      : std::runtime_error("degenerate segment " + std::to_string(segment) +
                           " (length " + std::to_string(length) + ")"),
        segment_(segment),
        length_(length) {}

  Eigen::Index segment() const { return segment_; }
  double length() const { return length_; }

 private:
  Eigen::Index segment_;
  double length_;
};

namespace detail {

inline Eigen::Index next(Eigen::Index i, Eigen::Index m) { return i + 1 == m ? 0 : i + 1; }
inline Eigen::Index prev(Eigen::Index i, Eigen::Index m) { return i == 0 ? m - 1 : i - 1; }

/// (x, y)^perp = (y, -x): outward normal of a counterclockwise tangent.
template <typename Derived>
Point<typename Derived::Scalar> perp(const Eigen::MatrixBase<Derived>& v) {
  return {v(1), -v(0)};
}

template <typename Scalar>
Scalar shoelace(const Points<Scalar>& x) {
  const Eigen::Index m = x.rows();
  Scalar twice = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = next(i, m);
    twice += x(i, 0) * x(j, 1) - x(j, 0) * x(i, 1);
  }
  return twice / 2;
}

}  // namespace detail

/// Ordered closed polygon with at least four nodes and no repeated
/// consecutive nodes (including the closing pair).
template <typename Scalar>
class CurveState {
 public:
  explicit CurveState(Points<Scalar> nodes) : nodes_(std::move(nodes)) {
    const Eigen::Index m = nodes_.rows();
    if (m < 4) {
      throw std::invalid_argument("a closed curve needs at least 4 nodes, got " +
                                  std::to_string(m));
    }
    if (!nodes_.allFinite()) {
      throw std::invalid_argument("curve nodes must be finite");
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (nodes_.row(i) == nodes_.row(detail::prev(i, m))) {
        throw std::invalid_argument("node " + std::to_string(i) +
                                    " repeats its predecessor");
      }
    }
    orientation_ = detail::shoelace(nodes_) >= 0 ? Orientation::counterclockwise
                                                 : Orientation::clockwise;
  }

  const Points<Scalar>& nodes() const { return nodes_; }
  Eigen::Index size() const { return nodes_.rows(); }
  Orientation orientation() const { return orientation_; }

  Point<Scalar> node(Eigen::Index i) const { return nodes_.row(i).transpose(); }

  /// Same nodes traversed in the opposite direction.
  CurveState reversed() const { return CurveState(nodes_.colwise().reverse()); }

  friend bool operator==(const CurveState& a, const CurveState& b) {
    return a.nodes_.rows() == b.nodes_.rows() && a.nodes_ == b.nodes_;
  }

 private:
  Points<Scalar> nodes_;
  Orientation orientation_;
};

/// How nodes are placed along a polar graph r(theta).
enum class RadialSampling {
  uniform_angle,      ///< u_i = i / M
  uniform_arclength,  ///< equal arc length of the polar graph between nodes
};

/// Nodes on r(u) = 1 + a cos(2 pi n u), point = r(u) (cos 2 pi u, sin 2 pi u).
template <typename Scalar = double>
CurveState<Scalar> build_radial_curve(int folds, Scalar amplitude, Eigen::Index node_count,
                                      RadialSampling sampling = RadialSampling::uniform_angle) {
  using std::abs;
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (folds < 1) throw std::invalid_argument("folds must be a positive integer");
  if (!(abs(amplitude) < 1)) throw std::invalid_argument("amplitude must satisfy |a| < 1");
  if (node_count < 4) throw std::invalid_argument("node count must be at least 4");

  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  const Scalar n = folds;
  auto radius = [&](Scalar u) { return 1 + amplitude * cos(two_pi * n * u); };

  Vector<Scalar> params(node_count);
  if (sampling == RadialSampling::uniform_angle) {
    for (Eigen::Index i = 0; i < node_count; ++i) params(i) = Scalar(i) / Scalar(node_count);
  } else {
    // |dX/du| = 2 pi sqrt(r^2 + (dr/dtheta)^2); tabulate s(u) with Simpson
    // cells, then invert by linear interpolation on the fine grid.
    auto speed = [&](Scalar u) {
      const Scalar r = radius(u);
      const Scalar dr = -amplitude * n * sin(two_pi * n * u);
      return two_pi * sqrt(r * r + dr * dr);
    };
    const Eigen::Index cells = 512 * node_count;
    const Scalar h = Scalar(1) / Scalar(cells);
    std::vector<Scalar> s(cells + 1, Scalar(0));
    for (Eigen::Index k = 0; k < cells; ++k) {
      const Scalar u = k * h;
      s[k + 1] = s[k] + h / 6 * (speed(u) + 4 * speed(u + h / 2) + speed(u + h));
    }
    const Scalar total = s.back();
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < node_count; ++i) {
      const Scalar target = total * Scalar(i) / Scalar(node_count);
      while (k + 1 < cells && s[k + 1] < target) ++k;
      const Scalar w = (target - s[k]) / (s[k + 1] - s[k]);
      params(i) = (k + w) * h;
    }
  }

  Points<Scalar> nodes(node_count, 2);
  for (Eigen::Index i = 0; i < node_count; ++i) {
    const Scalar u = params(i);
    const Scalar r = radius(u);
    nodes(i, 0) = r * cos(two_pi * u);
    nodes(i, 1) = r * sin(two_pi * u);
  }
  return CurveState<Scalar>(std::move(nodes));
}

/// Regular polygon inscribed in the circle of the given radius and centre.
template <typename Scalar = double>
CurveState<Scalar> build_circle(Scalar radius, Eigen::Index node_count,
                                Point<Scalar> centre = Point<Scalar>::Zero()) {
  if (!(radius > 0)) throw std::invalid_argument("circle radius must be positive");
  if (node_count < 4) throw std::invalid_argument("node count must be at least 4");
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  Points<Scalar> nodes(node_count, 2);
  for (Eigen::Index i = 0; i < node_count; ++i) {
    const Scalar theta = two_pi * Scalar(i) / Scalar(node_count);
    nodes(i, 0) = centre(0) + radius * std::cos(theta);
    nodes(i, 1) = centre(1) + radius * std::sin(theta);
  }
  return CurveState<Scalar>(std::move(nodes));
}

/// Closed curve through the given points; the last point connects back to the
/// first. Orientation is detected from the signed area.
template <typename Scalar = double>
CurveState<Scalar> load_polyline(const std::vector<Point<Scalar>>& points) {
  Points<Scalar> nodes(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    nodes.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return CurveState<Scalar>(std::move(nodes));
}

/// d_i = |X_i - X_{i-1}| for i = 1..M (entry 0 is the closing segment).
template <typename Scalar>
Vector<Scalar> segment_lengths(const CurveState<Scalar>& curve,
                               Scalar epsilon_geom = Scalar(kDefaultEpsilonGeom)) {
  const auto& x = curve.nodes();
  const Eigen::Index m = x.rows();
  Vector<Scalar> d(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    d(i) = (x.row(i) - x.row(detail::prev(i, m))).norm();
    if (!(d(i) >= epsilon_geom)) throw DegenerateSegmentError(i, double(d(i)));
  }
  return d;
}

/// Dual (finite volume) lengths (d_i + d_{i+1}) / 2.
template <typename Scalar>
Vector<Scalar> dual_lengths(const Vector<Scalar>& d) {
  const Eigen::Index m = d.size();
  Vector<Scalar> dual(m);
  for (Eigen::Index i = 0; i < m; ++i) dual(i) = (d(i) + d(detail::next(i, m))) / 2;
  return dual;
}

/// Discrete curvature vector at each node,
///   2 / (d_i + d_{i+1}) * ((X_{i+1} - X_i) / d_{i+1} - (X_i - X_{i-1}) / d_i).
template <typename Scalar>
Points<Scalar> curvature_vectors(const CurveState<Scalar>& curve, const Vector<Scalar>& d) {
  const auto& x = curve.nodes();
  const Eigen::Index m = x.rows();
  Points<Scalar> k(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index ip = detail::next(i, m);
    const Eigen::Index im = detail::prev(i, m);
    const Scalar dp = d(ip);
    k.row(i) = (2 / (d(i) + dp)) * ((x.row(ip) - x.row(i)) / dp - (x.row(i) - x.row(im)) / d(i));
  }
  return k;
}

/// Discrete normals (X_{i+1} - X_{i-1})^perp / (d_i + d_{i+1}); outward and of
/// length <= 1 on counterclockwise curves.
template <typename Scalar>
Points<Scalar> discrete_normals(const CurveState<Scalar>& curve, const Vector<Scalar>& d) {
  const auto& x = curve.nodes();
  const Eigen::Index m = x.rows();
  Points<Scalar> n(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index ip = detail::next(i, m);
    const Eigen::Index im = detail::prev(i, m);
    const Point<Scalar> chord = (x.row(ip) - x.row(im)).transpose();
    n.row(i) = detail::perp(chord).transpose() / (d(i) + d(ip));
  }
  return n;
}

/// kappa_i = -(curvature vector) . (discrete normal). Positive on convex
/// counterclockwise curves; a counterclockwise circle of radius R gives
/// cos(pi / M) / R.
template <typename Scalar>
Vector<Scalar> discrete_curvature(const CurveState<Scalar>& curve, const Vector<Scalar>& d) {
  if (d.size() != curve.size()) throw std::invalid_argument("segment length count mismatch");
  const Points<Scalar> k = curvature_vectors(curve, d);
  const Points<Scalar> n = discrete_normals(curve, d);
  return -(k.cwiseProduct(n)).rowwise().sum();
}

/// Signed shoelace area; positive iff the curve is counterclockwise.
template <typename Scalar>
Scalar enclosed_area(const CurveState<Scalar>& curve) {
  return detail::shoelace(curve.nodes());
}

template <typename Scalar>
Scalar curve_length(const Vector<Scalar>& d) {
  return d.sum();
}

template <typename Scalar>
struct ShapeDiagnostics {
  Scalar isoperimetric_ratio;  ///< L^2 / (4 pi A)
  Scalar uniformity_ratio;     ///< max d_i / min d_i
};

template <typename Scalar>
ShapeDiagnostics<Scalar> shape_diagnostics(const CurveState<Scalar>& curve,
                                           Scalar epsilon_geom = Scalar(kDefaultEpsilonGeom)) {
  const Scalar area = enclosed_area(curve);
  if (!(area > 0)) {
    throw std::invalid_argument("shape diagnostics need a positive (counterclockwise) area");
  }
  const Vector<Scalar> d = segment_lengths(curve, epsilon_geom);
  const Scalar length = curve_length(d);
  return {length * length / (4 * std::numbers::pi_v<Scalar> * area), d.maxCoeff() / d.minCoeff()};
}

/// Everything the time stepper needs about one configuration, computed once.
template <typename Scalar>
struct GeometryCache {
  Vector<Scalar> d;
  Vector<Scalar> dual;
  Vector<Scalar> kappa;
  Scalar total_length;
  Scalar area;
};

template <typename Scalar>
GeometryCache<Scalar> compute_geometry(const CurveState<Scalar>& curve,
                                       Scalar epsilon_geom = Scalar(kDefaultEpsilonGeom)) {
  GeometryCache<Scalar> g;
  g.d = segment_lengths(curve, epsilon_geom);
  g.dual = dual_lengths(g.d);
  g.kappa = discrete_curvature(curve, g.d);
  g.total_length = curve_length(g.d);
  g.area = enclosed_area(curve);
  return g;
}

/// Resamples a closed polygon to node_count points equally spaced in arc
/// length along its edges, starting at the first node. Used to prepare initial
/// data; the evolution itself never redistributes nodes.
template <typename Scalar>
CurveState<Scalar> resample_uniform(const CurveState<Scalar>& curve, Eigen::Index node_count) {
  if (node_count < 4) throw std::invalid_argument("node count must be at least 4");
  const auto& x = curve.nodes();
  const Eigen::Index m = x.rows();
  Vector<Scalar> cumulative(m + 1);
  cumulative(0) = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    cumulative(i + 1) = cumulative(i) + (x.row(detail::next(i, m)) - x.row(i)).norm();
  }
  const Scalar total = cumulative(m);
  Points<Scalar> out(node_count, 2);
  Eigen::Index edge = 0;
  for (Eigen::Index k = 0; k < node_count; ++k) {
    const Scalar s = total * Scalar(k) / Scalar(node_count);
    while (edge + 1 < m && cumulative(edge + 1) <= s) ++edge;
    const Scalar w = (s - cumulative(edge)) / (cumulative(edge + 1) - cumulative(edge));
    out.row(k) = (1 - w) * x.row(edge) + w * x.row(detail::next(edge, m));
  }
  return CurveState<Scalar>(std::move(out));
}

}  // namespace cmcf
