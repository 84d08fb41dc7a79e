#include "h2body/dynamics.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Cholesky>

#include "h2body/error.hpp"

namespace h2body {

Params::Params(double m1, double m2, double k) : m1_(m1), m2_(m2), k_(k) {
  if (!(m1 > 0.0) || !(m2 > 0.0) || !(k > 0.0) || !std::isfinite(m1) || !std::isfinite(m2) ||
      !std::isfinite(k)) {
    throw Error(ErrorCode::InvalidArgument, "masses and coupling must be positive");
  }
}

Configuration::Configuration(const Point& q1, const Point& q2) : q1_(q1), q2_(q2) {
  if (!(hyperbolic_distance(q1, q2) > collision_epsilon)) {
    throw Error(ErrorCode::Collision, "particles closer than the collision threshold");
  }
}

Configuration act(const GroupElement& g, const Configuration& q) {
  return {moebius_act(g, q.q1()), moebius_act(g, q.q2())};
}

State PhaseState::to_array() const {
  return {config.q1().x(), config.q1().y(), config.q2().x(), config.q2().y(), p[0], p[1], p[2], p[3]};
}

PhaseState PhaseState::from_array(const State& s) {
  return {Configuration(Point(s[0], s[1]), Point(s[2], s[3])), {s[4], s[5], s[6], s[7]}};
}

PhaseState act(const GroupElement& g, const PhaseState& z) {
  Vec4 p{};
  for (int i = 0; i < 2; ++i) {
    const Point& q = z.config.q(i);
    const std::complex<double> w = g.c() * std::complex<double>(q.x(), q.y()) + g.d();
    // Velocities are multiplied by 1 / w^2, so covectors pick up conj(w^2).
    const std::complex<double> pi = std::complex<double>(z.p[2 * i], z.p[2 * i + 1]) * std::conj(w * w);
    p[2 * i] = pi.real();
    p[2 * i + 1] = pi.imag();
  }
  return {act(g, z.config), p};
}

CoalgebraElement LockedInertia::apply(const AlgebraElement& xi) const {
  const Eigen::Vector3d r = m * Eigen::Vector3d(xi.E, xi.H, xi.P);
  return {r(0), r(1), r(2)};
}

AlgebraElement LockedInertia::solve(const CoalgebraElement& mu) const {
  const Eigen::Vector3d r = m.ldlt().solve(Eigen::Vector3d(mu.e, mu.h, mu.p));
  return {r(0), r(1), r(2)};
}

double LockedInertia::form(const AlgebraElement& xi, const AlgebraElement& eta) const {
  return pairing(apply(xi), eta);
}

double potential(const Configuration& q, const Params& prm) {
  const double x1 = q.q1().x(), y1 = q.q1().y(), x2 = q.q2().x(), y2 = q.q2().y();
  const double dx2 = (x1 - x2) * (x1 - x2);
  const double num = dx2 + y1 * y1 + y2 * y2;
  const double den = std::sqrt((dx2 + (y1 - y2) * (y1 - y2)) * (dx2 + (y1 + y2) * (y1 + y2)));
  return -prm.k() * prm.m1() * prm.m2() * num / den;
}

double potential_of_distance(double d, const Params& prm) {
  return -prm.k() * prm.m1() * prm.m2() / std::tanh(d);
}

Vec4 potential_gradient(const Configuration& q, const Params& prm) {
  const double x1 = q.q1().x(), y1 = q.q1().y(), x2 = q.q2().x(), y2 = q.q2().y();
  const double dx = x1 - x2;
  const double dy = y1 - y2;
  // z = cosh(d) = 1 + delta, V = -k m1 m2 z / sqrt(z^2 - 1), dV/dz = k m1 m2 / (z^2 - 1)^{3/2}
  const double delta = (dx * dx + dy * dy) / (2.0 * y1 * y2);
  const double sinh2 = delta * (delta + 2.0);
  const double dvdz = prm.k() * prm.m1() * prm.m2() / (sinh2 * std::sqrt(sinh2));
  const double dz_dx1 = dx / (y1 * y2);
  const double dz_dy1 = (y1 * y1 - y2 * y2 - dx * dx) / (2.0 * y1 * y1 * y2);
  const double dz_dy2 = (y2 * y2 - y1 * y1 - dx * dx) / (2.0 * y2 * y2 * y1);
  return {dvdz * dz_dx1, dvdz * dz_dy1, -dvdz * dz_dx1, dvdz * dz_dy2};
}

double kinetic_energy(const PhaseState& z, const Params& prm) {
  double t = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double y = z.config.q(i).y();
    t += y * y / (2.0 * prm.mass(i)) * (z.p[2 * i] * z.p[2 * i] + z.p[2 * i + 1] * z.p[2 * i + 1]);
  }
  return t;
}

double hamiltonian(const PhaseState& z, const Params& prm) {
  return kinetic_energy(z, prm) + potential(z.config, prm);
}

State hamiltonian_vector_field(const PhaseState& z, const Params& prm) {
  const Vec4 dv = potential_gradient(z.config, prm);
  State f{};
  for (int i = 0; i < 2; ++i) {
    const double y = z.config.q(i).y();
    const double m = prm.mass(i);
    const double px = z.p[2 * i];
    const double py = z.p[2 * i + 1];
    f[2 * i] = y * y * px / m;
    f[2 * i + 1] = y * y * py / m;
    f[4 + 2 * i] = -dv[2 * i];
    f[4 + 2 * i + 1] = -(y / m) * (px * px + py * py) - dv[2 * i + 1];
  }
  return f;
}

State hamiltonian_vector_field(const State& s, const Params& prm) {
  return hamiltonian_vector_field(PhaseState::from_array(s), prm);
}

CoalgebraElement momentum_map(const PhaseState& z) {
  CoalgebraElement mu;
  for (int i = 0; i < 2; ++i) {
    const double x = z.config.q(i).x();
    const double y = z.config.q(i).y();
    const double px = z.p[2 * i];
    const double py = z.p[2 * i + 1];
    mu.h += x * px + y * py;
    mu.e += 0.5 * (px * (y * y - x * x - 1.0) - 2.0 * py * x * y);
    mu.p += px;
  }
  return mu;
}

double canonical_relation_residual(double theta1, double theta2, const Params& prm) {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double rhs = c2 * s1 * s1 / (s2 * s2 * c1);
  return std::abs(prm.ratio() - rhs) / prm.ratio();
}

Mat2 momentum_at_canonical(double theta1, double theta2, const AlgebraElement& xi, const Params& prm) {
  if (!(canonical_relation_residual(theta1, theta2, prm) < 1e-10)) {
    throw Error(ErrorCode::NotCanonical, "angles violate the canonical mass relation");
  }
  const double c1 = std::cos(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double pre = prm.m2() * (c1 + c2) / (2.0 * s2 * s2 * c1);
  const double cc = c1 * c2;
  Mat2 m;
  m << xi.H, (1.0 - 2.0 * cc) * xi.P + cc * xi.E, xi.P - cc * xi.E, -xi.H;
  return pre * m;
}

LockedInertia locked_inertia(const Configuration& q, const Params& prm) {
  double i11 = 0, i12 = 0, i13 = 0, i22 = 0, i23 = 0, i33 = 0;
  for (int i = 0; i < 2; ++i) {
    const double x = q.q(i).x();
    const double y = q.q(i).y();
    const double w = prm.mass(i) / (y * y);
    const double r2 = x * x + y * y;
    i11 += 0.25 * w * ((r2 + 1.0) * (r2 + 1.0) - 4.0 * y * y);
    i22 += w * r2;
    i33 += w;
    i12 += -0.5 * w * x * (1.0 + r2);
    i13 += -0.5 * w * (1.0 + x * x - y * y);
    i23 += w * x;
  }
  LockedInertia ii;
  ii.m << i11, i12, i13, i12, i22, i23, i13, i23, i33;
  return ii;
}

double augmented_potential(const Configuration& q, const Params& prm, const AlgebraElement& xi) {
  return potential(q, prm) - 0.5 * locked_inertia(q, prm).form(xi, xi);
}

Vec4 augmented_potential_gradient(const Configuration& q, const Params& prm, const AlgebraElement& xi) {
  Vec4 g = potential_gradient(q, prm);
  for (int i = 0; i < 2; ++i) {
    const double x = q.q(i).x();
    const double y = q.q(i).y();
    const double m = prm.mass(i);
    const TangentVector v = infinitesimal_generator(xi, q.q(i));
    // K = m |v|^2 / y^2 is twice the generator's kinetic energy for particle i.
    const double dvx_dx = -xi.E * x + xi.H;
    const double dvy_dx = -xi.E * y;
    const double dvx_dy = xi.E * y;
    const double dvy_dy = -xi.E * x + xi.H;
    const double dk_dx = 2.0 * m * (v.vx * dvx_dx + v.vy * dvy_dx) / (y * y);
    const double dk_dy = 2.0 * m * (v.vx * dvx_dy + v.vy * dvy_dy) / (y * y) -
                         2.0 * m * (v.vx * v.vx + v.vy * v.vy) / (y * y * y);
    g[2 * i] -= 0.5 * dk_dx;
    g[2 * i + 1] -= 0.5 * dk_dy;
  }
  return g;
}

PhaseState legendre(const Configuration& q, const Params& prm, const AlgebraElement& xi) {
  Vec4 p{};
  for (int i = 0; i < 2; ++i) {
    const double y = q.q(i).y();
    const TangentVector v = infinitesimal_generator(xi, q.q(i));
    const double w = prm.mass(i) / (y * y);
    p[2 * i] = w * v.vx;
    p[2 * i + 1] = w * v.vy;
  }
  return {q, p};
}

std::array<TangentVector, 2> velocities(const PhaseState& z, const Params& prm) {
  std::array<TangentVector, 2> out{TangentVector{z.config.q1()}, TangentVector{z.config.q2()}};
  for (int i = 0; i < 2; ++i) {
    const double y = z.config.q(i).y();
    const double w = y * y / prm.mass(i);
    out[i].vx = w * z.p[2 * i];
    out[i].vy = w * z.p[2 * i + 1];
  }
  return out;
}

}  // namespace h2body
