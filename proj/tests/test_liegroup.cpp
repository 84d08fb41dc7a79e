#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "h2body/error.hpp"
#include "h2body/liegroup.hpp"
#include "oracles.hpp"

using namespace h2body;
using doctest::Approx;

namespace {

// Matrix exponential reference for exp(t xi).
Mat2 expm(const AlgebraElement& xi, double t) { return (t * xi.matrix()).exp(); }

double coalgebra_gap(const CoalgebraElement& a, const CoalgebraElement& b) {
  return std::max({std::abs(a.e - b.e), std::abs(a.h - b.h), std::abs(a.p - b.p)});
}

}  // namespace

TEST_SUITE("liegroup") {

TEST_CASE("group elements are normalized to unit determinant") {
  const GroupElement g(2.0, 0.0, 0.0, 2.0);
  CHECK(g.a() == Approx(1.0));
  CHECK(g.matrix().determinant() == Approx(1.0));
  CHECK_THROWS_AS(GroupElement(0.0, 1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(GroupElement(1.0, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("basis matrices and round trip") {
  CHECK(oracle::max_abs_diff(xi_e.matrix(), (Mat2() << 0, -0.5, 0.5, 0).finished()) == 0.0);
  CHECK(oracle::max_abs_diff(xi_h.matrix(), (Mat2() << 0.5, 0, 0, -0.5).finished()) == 0.0);
  CHECK(oracle::max_abs_diff(xi_p.matrix(), (Mat2() << 0, 1, 0, 0).finished()) == 0.0);
  oracle::Sampler s(21);
  for (int i = 0; i < 50; ++i) {
    const AlgebraElement x = s.algebra();
    const AlgebraElement y = AlgebraElement::from_matrix(x.matrix());
    CHECK(std::abs(x.E - y.E) + std::abs(x.H - y.H) + std::abs(x.P - y.P) < 1e-14);
    const CoalgebraElement mu{s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)};
    CHECK(coalgebra_gap(mu, CoalgebraElement::from_matrix(mu.matrix())) < 1e-14);
  }
}

TEST_CASE("pairing is twice the trace and the dual basis is dual") {
  oracle::Sampler s(22);
  for (int i = 0; i < 50; ++i) {
    const AlgebraElement x = s.algebra();
    const CoalgebraElement mu{s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)};
    CHECK(pairing(mu, x) == Approx(2.0 * (mu.matrix() * x.matrix()).trace()).epsilon(1e-12));
  }
  const CoalgebraElement me{1, 0, 0}, mh{0, 1, 0}, mp{0, 0, 1};
  CHECK(pairing(me, xi_e) == 1.0);
  CHECK(pairing(me, xi_h) == 0.0);
  CHECK(pairing(mh, xi_h) == 1.0);
  CHECK(pairing(mp, xi_p) == 1.0);
  CHECK(pairing(mp, xi_e) == 0.0);
}

TEST_CASE("bracket relations") {
  const AlgebraElement eh = bracket(xi_e, xi_h);
  const AlgebraElement ref = AlgebraElement::from_matrix(xi_e.matrix() * xi_h.matrix() - xi_h.matrix() * xi_e.matrix());
  CHECK(eh.E == Approx(ref.E));
  CHECK(eh.H == Approx(ref.H));
  CHECK(eh.P == Approx(ref.P));
  const AlgebraElement hp = bracket(xi_h, xi_p);
  CHECK(hp.P == Approx(1.0));
  CHECK(hp.E == 0.0);
  CHECK(hp.H == 0.0);
}

TEST_CASE("ad-star matches the derivative of the coadjoint transport") {
  oracle::Sampler s(23);
  for (int i = 0; i < 30; ++i) {
    const AlgebraElement x = s.algebra();
    const CoalgebraElement mu{s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)};
    const double h = 1e-6;
    const CoalgebraElement a = coadjoint_transport(flow(x, h), mu), b = coadjoint_transport(flow(x, -h), mu);
    const CoalgebraElement fd{(a.e - b.e) / (2 * h), (a.h - b.h) / (2 * h), (a.p - b.p) / (2 * h)};
    // d/dt exp(t x) mu exp(-t x) = [x, mu] = -ad*_x mu.
    const CoalgebraElement ad = ad_star(x, mu);
    CHECK(coalgebra_gap(fd, {-ad.e, -ad.h, -ad.p}) < 1e-8);
    // <ad*_x mu, eta> = <mu, [x, eta]>.
    const AlgebraElement eta = s.algebra();
    CHECK(pairing(ad, eta) == Approx(pairing(mu, bracket(x, eta))).epsilon(1e-12));
  }
}

TEST_CASE("classification") {
  CHECK(classify(xi_e).type == AlgebraType::Elliptic);
  CHECK(classify(xi_e).omega == Approx(1.0));
  CHECK(classify(3.0 * xi_h).type == AlgebraType::Hyperbolic);
  CHECK(classify(3.0 * xi_h).omega == Approx(3.0));
  CHECK(classify(xi_p).type == AlgebraType::Parabolic);
  CHECK(classify(xi_p).sign == 1);
  CHECK(classify(-2.0 * xi_p).sign == -1);
  CHECK(classify(AlgebraElement{}).type == AlgebraType::Zero);
  CHECK(discriminant(xi_h) == Approx(0.25));
  CHECK(discriminant(xi_e) == Approx(-0.25));
  // Conjugation preserves type and rate.
  oracle::Sampler s(24);
  for (int i = 0; i < 30; ++i) {
    const AlgebraElement x = s.algebra();
    const Classification c0 = classify(x), c1 = classify(adjoint(s.group(), x));
    CHECK(c0.type == c1.type);
    CHECK(c0.omega == Approx(c1.omega).epsilon(1e-9));
  }
}

TEST_CASE("flow matches the matrix exponential") {
  oracle::Sampler s(25);
  for (int i = 0; i < 100; ++i) {
    const AlgebraElement x = s.algebra();
    const double t = s.uniform(-3, 3);
    const Mat2 ref = expm(x, t);
    CHECK(oracle::max_abs_diff(flow(x, t).matrix(), ref) < 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
  for (const AlgebraElement& x : {xi_e, xi_h, xi_p, AlgebraElement{}}) {
    CHECK(oracle::max_abs_diff(flow(x, 0.7).matrix(), expm(x, 0.7)) < 1e-13);
  }
  // Decaying direction stays accurate for long hyperbolic flows.
  const Mat2 far = flow(xi_h, 40.0).matrix();
  CHECK(far(1, 1) == Approx(std::exp(-20.0)).epsilon(1e-12));
}

TEST_CASE("elliptic flow fixes (0, 1) and has period 2 pi") {
  const Point o(0, 1);
  const Point r = moebius_act(flow(2.5 * xi_e, 0.9), o);
  CHECK(r.x() == Approx(0.0).scale(1.0));
  CHECK(r.y() == Approx(1.0));
  const Point p(0.3, 0.4);
  const Point back = moebius_act(flow(xi_e, 2.0 * std::numbers::pi), p);
  CHECK(back.x() == Approx(p.x()).epsilon(1e-12));
  CHECK(back.y() == Approx(p.y()).epsilon(1e-12));
}

TEST_CASE("moebius action is a left action") {
  oracle::Sampler s(26);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g = s.group(), h = s.group();
    const Point p = s.point();
    const Point a = moebius_act(g * h, p), b = moebius_act(g, moebius_act(h, p));
    CHECK(oracle::distance_acosh(a, b) < 1e-6);
  }
}

TEST_CASE("infinitesimal generator is the derivative of the flow") {
  oracle::Sampler s(27);
  for (int i = 0; i < 100; ++i) {
    const AlgebraElement x = s.algebra();
    const Point p = s.point();
    const double h = 1e-6;
    const Point a = moebius_act(flow(x, h), p), b = moebius_act(flow(x, -h), p);
    const TangentVector v = infinitesimal_generator(x, p);
    CHECK(v.vx == Approx((a.x() - b.x()) / (2 * h)).epsilon(1e-7).scale(1.0));
    CHECK(v.vy == Approx((a.y() - b.y()) / (2 * h)).epsilon(1e-7).scale(1.0));
  }
  const TangentVector up = infinitesimal_generator(xi_h, Point(0, 1));
  CHECK(up.vx == Approx(0.0));
  CHECK(up.vy == Approx(1.0));
  const TangentVector right = infinitesimal_generator(xi_p, Point(5, 2));
  CHECK(right.vx == 1.0);
  CHECK(right.vy == 0.0);
}

TEST_CASE("tangent action is the pushforward") {
  oracle::Sampler s(28);
  for (int i = 0; i < 50; ++i) {
    const GroupElement g = s.group();
    const TangentVector v{s.point(), s.uniform(-1, 1), s.uniform(-1, 1)};
    const double h = 1e-6;
    const Point a = moebius_act(g, Point(v.base.x() + h * v.vx, v.base.y() + h * v.vy));
    const Point b = moebius_act(g, Point(v.base.x() - h * v.vx, v.base.y() - h * v.vy));
    const TangentVector w = moebius_act_tangent(g, v);
    CHECK(w.vx == Approx((a.x() - b.x()) / (2 * h)).epsilon(1e-6).scale(1.0));
    CHECK(w.vy == Approx((a.y() - b.y()) / (2 * h)).epsilon(1e-6).scale(1.0));
    CHECK(w.norm() == Approx(v.norm()).epsilon(1e-10));
  }
}

TEST_CASE("adjoint transports generators") {
  oracle::Sampler s(29);
  for (int i = 0; i < 50; ++i) {
    const GroupElement g = s.group();
    const AlgebraElement x = s.algebra();
    const Point p = s.point();
    const TangentVector lhs = infinitesimal_generator(adjoint(g, x), moebius_act(g, p));
    const TangentVector rhs = moebius_act_tangent(g, infinitesimal_generator(x, p));
    CHECK(lhs.vx == Approx(rhs.vx).epsilon(1e-9).scale(1.0));
    CHECK(lhs.vy == Approx(rhs.vy).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("normalizing isometry and rotation") {
  oracle::Sampler s(30);
  for (int i = 0; i < 50; ++i) {
    const Point p0 = s.point();
    const double th = s.uniform(-3, 3);
    const GroupElement g = normalizing_isometry(p0, th);
    const Point o = moebius_act(g, p0);
    CHECK(o.x() == Approx(0.0).scale(1.0));
    CHECK(o.y() == Approx(1.0));
    const TangentVector t = moebius_act_tangent(g, {p0, std::cos(th), std::sin(th)});
    CHECK(t.vy == Approx(0.0).scale(t.norm()));
    CHECK(t.vx > 0.0);

    const Point q = moebius_act(translation_to(p0), Point(0, 1));
    CHECK(q.x() == Approx(p0.x()));
    CHECK(q.y() == Approx(p0.y()));
  }
  const Point r = moebius_act(rotation(0.4), Point(0, 1));
  CHECK(r.x() == Approx(0.0).scale(1.0));
  CHECK(r.y() == Approx(1.0));
}

}
