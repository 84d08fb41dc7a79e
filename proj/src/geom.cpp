#include "h2body/geom.hpp"

#include <algorithm>
#include <cmath>

#include "h2body/error.hpp"

namespace h2body {

Point::Point(double x, double y) : x_(x), y_(y) {
  if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::InvalidArgument, "point must satisfy y > 0");
  }
}

double TangentVector::norm() const { return std::hypot(vx, vy) / base.y(); }

double hyperbolic_inner(const TangentVector& a, const TangentVector& b) {
  const double y = a.base.y();
  return (a.vx * b.vx + a.vy * b.vy) / (y * y);
}

double hyperbolic_distance(const Point& a, const Point& b) {
  // cosh(d) - 1 = 2 sinh^2(d/2), so the asinh form stays accurate as d -> 0.
  const double chord = std::hypot(a.x() - b.x(), a.y() - b.y());
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(a.y() * b.y())));
}

Geodesic geodesic_through(const Point& a, const Point& b) {
  if (hyperbolic_distance(a, b) < 1e-12) {
    throw Error(ErrorCode::CoincidentPoints, "geodesic through coincident points");
  }
  const double scale = std::max({1.0, std::abs(a.x()), std::abs(b.x())});
  if (std::abs(a.x() - b.x()) < tolerance::vertical_tie * scale) {
    return Geodesic{VerticalLine{0.5 * (a.x() + b.x())}, b.y() > a.y() ? 1 : -1};
  }
  const double ra = a.x() * a.x() + a.y() * a.y();
  const double rb = b.x() * b.x() + b.y() * b.y();
  const double c = (rb - ra) / (2.0 * (b.x() - a.x()));
  const double r = std::hypot(a.x() - c, a.y());
  return Geodesic{HalfCircle{c, r}, b.x() > a.x() ? 1 : -1};
}

TangentVector geodesic_point_at(const Geodesic& g, double s) {
  const double o = g.orientation;
  if (const auto* hc = std::get_if<HalfCircle>(&g.kind)) {
    const double th = std::tanh(s);
    const double sech = 1.0 / std::cosh(s);
    const double r = hc->radius;
    return TangentVector{Point(hc->center_x + o * r * th, r * sech), o * r * sech * sech,
                         -r * sech * th};
  }
  const auto& vl = std::get<VerticalLine>(g.kind);
  const double y = std::exp(o * s);
  return TangentVector{Point(vl.x0, y), 0.0, o * y};
}

double geodesic_arc_length(const Geodesic& g, const Point& p) {
  if (const auto* hc = std::get_if<HalfCircle>(&g.kind)) {
    // sinh(s) = tanh(s) / sech(s) = (x - c) / y
    return g.orientation * std::asinh((p.x() - hc->center_x) / p.y());
  }
  return g.orientation * std::log(p.y());
}

double geodesic_residual(const Geodesic& g, const Point& p) {
  if (const auto* hc = std::get_if<HalfCircle>(&g.kind)) {
    const double dx = p.x() - hc->center_x;
    return (dx * dx + p.y() * p.y() - hc->radius * hc->radius) / (hc->radius * p.y());
  }
  return (p.x() - std::get<VerticalLine>(g.kind).x0) / p.y();
}

namespace {

// Sign of det[v, tangent] after validating v as a normal vector on g.
int normal_side(const Geodesic& g, const TangentVector& v) {
  if (v.vx == 0.0 && v.vy == 0.0) {
    throw Error(ErrorCode::ZeroVector, "normal vector is zero");
  }
  if (std::abs(geodesic_residual(g, v.base)) > tolerance::on_geodesic) {
    throw Error(ErrorCode::NotOnGeodesic, "vector base is not on the geodesic");
  }
  const TangentVector t = geodesic_point_at(g, geodesic_arc_length(g, v.base));
  const TangentVector t_here{v.base, t.vx, t.vy};
  if (std::abs(hyperbolic_inner(v, t_here)) > tolerance::perpendicular * v.norm() * t_here.norm()) {
    throw Error(ErrorCode::NotPerpendicular, "vector is not normal to the geodesic");
  }
  return (v.vx * t.vy - v.vy * t.vx) > 0.0 ? 1 : -1;
}

}  // namespace

Orientation normal_orientation(const Geodesic& g, const TangentVector& v1, const TangentVector& v2) {
  return normal_side(g, v1) == normal_side(g, v2) ? Orientation::Equal : Orientation::Opposite;
}

}  // namespace h2body
