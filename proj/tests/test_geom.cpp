#include <doctest.h>

#include <cmath>
#include <numbers>

#include "h2body/error.hpp"
#include "h2body/geom.hpp"
#include "h2body/liegroup.hpp"
#include "oracles.hpp"

using namespace h2body;
using doctest::Approx;

TEST_SUITE("geom") {

TEST_CASE("point rejects the boundary and below") {
  CHECK_THROWS_AS(Point(0.0, 0.0), Error);
  CHECK_THROWS_AS(Point(1.0, -2.0), Error);
  CHECK_THROWS_AS(Point(std::nan(""), 1.0), Error);
  CHECK_NOTHROW(Point(-3.0, 1e-9));
}

TEST_CASE("tangent norm") {
  const TangentVector v{Point(0.3, 2.0), 3.0, 4.0};
  CHECK(v.norm() == Approx(2.5));
  CHECK(TangentVector{Point(0.0, 1.0)}.norm() == 0.0);
}

TEST_CASE("distance examples") {
  CHECK(hyperbolic_distance(Point(0, 1), Point(0, 1)) == 0.0);
  CHECK(hyperbolic_distance(Point(0, 1), Point(0, std::numbers::e)) == Approx(1.0).epsilon(1e-14));
  CHECK(std::cosh(1.0) == Approx((std::numbers::e * std::numbers::e + 1.0) / (2.0 * std::numbers::e)));
  const double t = std::numbers::pi / 3;
  CHECK(hyperbolic_distance(Point(std::cos(t), std::sin(t)), Point(0, 1)) ==
        Approx(std::atanh(0.5)).epsilon(1e-14));
}

TEST_CASE("distance against the acosh formula and near-coincident points") {
  oracle::Sampler s(11);
  for (int i = 0; i < 200; ++i) {
    const Point a = s.point(), b = s.point();
    CHECK(hyperbolic_distance(a, b) == Approx(oracle::distance_acosh(a, b)).epsilon(1e-10));
    CHECK(hyperbolic_distance(a, b) == hyperbolic_distance(b, a));
  }
  // Tiny separations: first-order behaviour |dq| / y.
  const Point p(0.4, 2.0);
  const Point q(0.4 + 1e-10, 2.0);
  CHECK(hyperbolic_distance(p, q) == Approx(0.5e-10).epsilon(1e-6));
}

TEST_CASE("isometry invariance and triangle inequality") {
  oracle::Sampler s(12);
  for (int i = 0; i < 200; ++i) {
    const Point a = s.point(), b = s.point(), c = s.point();
    const GroupElement g = s.group();
    CHECK(std::abs(hyperbolic_distance(moebius_act(g, a), moebius_act(g, b)) - hyperbolic_distance(a, b)) < 1e-12 * std::max(1.0, hyperbolic_distance(a, b)) * 10);
    CHECK(hyperbolic_distance(a, c) <= hyperbolic_distance(a, b) + hyperbolic_distance(b, c) + 1e-12);
  }
}

TEST_CASE("geodesic through two points") {
  const Geodesic g = geodesic_through(Point(-0.5, 0.5), Point(0.5, 0.5));
  REQUIRE(!g.is_vertical());
  const auto hc = std::get<HalfCircle>(g.kind);
  CHECK(hc.center_x == Approx(0.0));
  // (x - c)^2 + y^2 = r^2 with c = 0 gives r^2 = 1/4 + 1/4.
  CHECK(hc.radius == Approx(std::sqrt(0.5)).epsilon(1e-14));

  const Geodesic v = geodesic_through(Point(0, 1), Point(0, 2));
  REQUIRE(v.is_vertical());
  CHECK(std::get<VerticalLine>(v.kind).x0 == 0.0);

  const double t = 0.7;
  const Geodesic u = geodesic_through(Point(std::cos(t), std::sin(t)), Point(-std::cos(t), std::sin(t)));
  const auto uc = std::get<HalfCircle>(u.kind);
  CHECK(uc.center_x == Approx(0.0).scale(1.0));
  CHECK(uc.radius == Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(geodesic_through(Point(1, 1), Point(1, 1)), Error);
  try {
    geodesic_through(Point(1, 1), Point(1, 1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoincidentPoints);
  }
}

TEST_CASE("vertical tie tolerance") {
  CHECK(geodesic_through(Point(1e6, 1), Point(1e6 + 1e-7, 3)).is_vertical());
  CHECK(!geodesic_through(Point(0.0, 1), Point(1e-9, 3)).is_vertical());
}

TEST_CASE("points lie on their geodesic and the orientation follows a to b") {
  oracle::Sampler s(13);
  for (int i = 0; i < 200; ++i) {
    const Point a = s.point(), b = s.point();
    const Geodesic g = geodesic_through(a, b);
    CHECK(std::abs(geodesic_residual(g, a)) < 1e-10);
    CHECK(std::abs(geodesic_residual(g, b)) < 1e-10);
    const double sa = geodesic_arc_length(g, a), sb = geodesic_arc_length(g, b);
    CHECK(sb > sa);
    CHECK(sb - sa == Approx(hyperbolic_distance(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("arc-length parametrization examples") {
  const Geodesic unit{HalfCircle{0.0, 1.0}, 1};
  const TangentVector p0 = geodesic_point_at(unit, 0.0);
  CHECK(p0.base.x() == Approx(0.0).scale(1.0));
  CHECK(p0.base.y() == Approx(1.0));
  const double d1 = 0.8;
  const TangentVector p1 = geodesic_point_at(unit, d1);
  CHECK(p1.base.x() == Approx(std::tanh(d1)));
  CHECK(p1.base.y() == Approx(1.0 / std::cosh(d1)));

  const Geodesic vert{VerticalLine{0.0}, 1};
  for (const double s : {-2.0, 0.0, 1.5}) {
    const TangentVector p = geodesic_point_at(vert, s);
    CHECK(p.base.x() == 0.0);
    CHECK(p.base.y() == Approx(std::exp(s)));
  }
}

TEST_CASE("unit speed by finite differences and distance equals arc length") {
  oracle::Sampler s(14);
  for (int i = 0; i < 100; ++i) {
    const Geodesic g = geodesic_through(s.point(), s.point());
    const double s0 = s.uniform(-2, 2);
    const double h = 1e-5;
    const Point a = geodesic_point_at(g, s0 - h).base, b = geodesic_point_at(g, s0 + h).base;
    const Point m = geodesic_point_at(g, s0).base;
    const double speed = std::hypot(b.x() - a.x(), b.y() - a.y()) / (2.0 * h) / m.y();
    CHECK(std::abs(speed - 1.0) < 1e-6);
    CHECK(geodesic_point_at(g, s0).norm() == Approx(1.0).epsilon(1e-12));
    const double s1 = s.uniform(-2, 2);
    CHECK(std::abs(hyperbolic_distance(m, geodesic_point_at(g, s1).base) - std::abs(s1 - s0)) < 1e-10);
  }
}

TEST_CASE("normal orientation examples") {
  const Geodesic unit{HalfCircle{0.0, 1.0}, 1};
  const TangentVector up{Point(0, 1), 0.0, 1.0};
  CHECK(normal_orientation(unit, up, up) == Orientation::Equal);

  const double t1 = 0.6, t2 = 1.1;
  const TangentVector out1{Point(std::cos(t1), std::sin(t1)), std::cos(t1), std::sin(t1)};
  const TangentVector in2{Point(-std::cos(t2), std::sin(t2)), std::cos(t2), -std::sin(t2)};
  CHECK(normal_orientation(unit, out1, in2) == Orientation::Opposite);
  // Reversing the geodesic's direction does not change the comparison.
  const Geodesic rev{HalfCircle{0.0, 1.0}, -1};
  CHECK(normal_orientation(rev, out1, in2) == Orientation::Opposite);

  const Geodesic vert{VerticalLine{0.0}, 1};
  CHECK(normal_orientation(vert, {Point(0, 1), 1.0, 0.0}, {Point(0, 2), 1.0, 0.0}) == Orientation::Equal);
  CHECK(normal_orientation(vert, {Point(0, 1), 1.0, 0.0}, {Point(0, 2), -3.0, 0.0}) == Orientation::Opposite);
}

TEST_CASE("normal orientation errors") {
  const Geodesic unit{HalfCircle{0.0, 1.0}, 1};
  const auto code_of = [&](const TangentVector& a, const TangentVector& b) {
    try {
      normal_orientation(unit, a, b);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  const TangentVector up{Point(0, 1), 0.0, 1.0};
  CHECK(code_of(up, {Point(0, 1), 0.0, 0.0}) == ErrorCode::ZeroVector);
  CHECK(code_of(up, {Point(0, 2), 0.0, 1.0}) == ErrorCode::NotOnGeodesic);
  CHECK(code_of(up, {Point(0, 1), 1.0, 1.0}) == ErrorCode::NotPerpendicular);
}

}
