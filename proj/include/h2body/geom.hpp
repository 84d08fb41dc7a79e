#pragma once

// Upper half-plane model of the hyperbolic plane, metric (dx^2 + dy^2) / y^2.

#include <variant>

namespace h2body {

/// A point of the upper half-plane. The constructor rejects y <= 0.
class Point {
 public:
  Point(double x, double y);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  double x_;
  double y_;
};

/// Chart components (vx, vy) of a tangent vector based at `base`.
struct TangentVector {
  Point base;
  double vx = 0.0;
  double vy = 0.0;

  /// Hyperbolic length sqrt(vx^2 + vy^2) / y.
  double norm() const;
};

/// Hyperbolic inner product of two vectors based at the same point.
double hyperbolic_inner(const TangentVector& a, const TangentVector& b);

struct HalfCircle {
  double center_x;
  double radius;
};

struct VerticalLine {
  double x0;
};

/// A complete geodesic with a direction of travel.
///
/// Arc-length origin: the apex (center_x, radius) for half circles, the point
/// (x0, 1) for vertical lines. orientation = +1 travels toward increasing x on a
/// half circle and toward increasing y on a vertical line.
struct Geodesic {
  std::variant<HalfCircle, VerticalLine> kind;
  int orientation = 1;

  bool is_vertical() const { return std::holds_alternative<VerticalLine>(kind); }
};

enum class Orientation { Equal, Opposite };

double hyperbolic_distance(const Point& a, const Point& b);

/// Unique geodesic through two distinct points, oriented from a to b.
Geodesic geodesic_through(const Point& a, const Point& b);

/// Unit-speed point and velocity at arc length s.
TangentVector geodesic_point_at(const Geodesic& g, double s);

/// Arc-length coordinate of a point assumed to lie on g.
double geodesic_arc_length(const Geodesic& g, const Point& p);

/// Euclidean-chart residual of p against the geodesic's defining equation, scaled to be dimensionless.
double geodesic_residual(const Geodesic& g, const Point& p);

/// Compares two normal vectors along g through the orientation of {v_i, tangent_i}.
Orientation normal_orientation(const Geodesic& g, const TangentVector& v1, const TangentVector& v2);

namespace tolerance {
inline constexpr double vertical_tie = 1e-12;
inline constexpr double perpendicular = 1e-9;
inline constexpr double on_geodesic = 1e-9;
}  // namespace tolerance

}  // namespace h2body
