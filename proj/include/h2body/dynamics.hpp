#pragma once

// Two point masses on the upper half-plane with potential V(d) = -k m1 m2 coth(d).
//
// Phase-space coordinates are ordered (x1, y1, x2, y2, px1, py1, px2, py2).

#include <array>

#include <Eigen/Core>

#include "h2body/geom.hpp"
#include "h2body/liegroup.hpp"

namespace h2body {

/// Configurations closer than this (hyperbolic distance) are treated as collisions.
inline constexpr double collision_epsilon = 1e-8;

using State = std::array<double, 8>;
using Vec4 = std::array<double, 4>;

class Params {
 public:
  Params(double m1, double m2, double k);

  double m1() const noexcept { return m1_; }
  double m2() const noexcept { return m2_; }
  double k() const noexcept { return k_; }
  double mass(int i) const noexcept { return i == 0 ? m1_ : m2_; }
  /// m1 / m2.
  double ratio() const noexcept { return m1_ / m2_; }

 private:
  double m1_, m2_, k_;
};

class Configuration {
 public:
  Configuration(const Point& q1, const Point& q2);

  const Point& q1() const noexcept { return q1_; }
  const Point& q2() const noexcept { return q2_; }
  const Point& q(int i) const noexcept { return i == 0 ? q1_ : q2_; }
  double distance() const { return hyperbolic_distance(q1_, q2_); }
  Vec4 coords() const { return {q1_.x(), q1_.y(), q2_.x(), q2_.y()}; }

  static Configuration from_coords(const Vec4& c) { return {Point(c[0], c[1]), Point(c[2], c[3])}; }

 private:
  Point q1_;
  Point q2_;
};

Configuration act(const GroupElement& g, const Configuration& q);

struct PhaseState {
  Configuration config;
  Vec4 p{};  ///< (px1, py1, px2, py2)

  State to_array() const;
  static PhaseState from_array(const State& s);
};

/// Cotangent lift of the diagonal Moebius action.
PhaseState act(const GroupElement& g, const PhaseState& z);

/// Locked inertia tensor in the bases {xi_e, xi_h, xi_p} -> {mu_e, mu_h, mu_p}.
struct LockedInertia {
  Eigen::Matrix3d m;

  CoalgebraElement apply(const AlgebraElement& xi) const;
  AlgebraElement solve(const CoalgebraElement& mu) const;
  /// <II xi, eta>.
  double form(const AlgebraElement& xi, const AlgebraElement& eta) const;
};

double potential(const Configuration& q, const Params& prm);

/// -k m1 m2 coth(d).
double potential_of_distance(double d, const Params& prm);

/// Exact partials (dV/dx1, dV/dy1, dV/dx2, dV/dy2).
Vec4 potential_gradient(const Configuration& q, const Params& prm);

double kinetic_energy(const PhaseState& z, const Params& prm);
double hamiltonian(const PhaseState& z, const Params& prm);

State hamiltonian_vector_field(const PhaseState& z, const Params& prm);

/// Same field on a raw state; throws on y <= 0 or collision.
State hamiltonian_vector_field(const State& s, const Params& prm);

CoalgebraElement momentum_map(const PhaseState& z);

/// Closed-form momentum (matrix form) of the relative-equilibrium covector with velocity xi
/// at the canonical configuration with angles (theta1, theta2).
Mat2 momentum_at_canonical(double theta1, double theta2, const AlgebraElement& xi, const Params& prm);

/// Residual of m1/m2 = cos(t2) sin^2(t1) / (sin^2(t2) cos(t1)), relative to m1/m2.
double canonical_relation_residual(double theta1, double theta2, const Params& prm);

LockedInertia locked_inertia(const Configuration& q, const Params& prm);

/// V(q) - 1/2 <II(q) xi, xi>.
double augmented_potential(const Configuration& q, const Params& prm, const AlgebraElement& xi);
Vec4 augmented_potential_gradient(const Configuration& q, const Params& prm, const AlgebraElement& xi);

/// Covector p_i = (m_i / y_i^2) (xi_H2)(q_i), the metric dual of the generator velocity.
PhaseState legendre(const Configuration& q, const Params& prm, const AlgebraElement& xi);

/// Chart velocities of both particles (inverse metric applied to the momenta).
std::array<TangentVector, 2> velocities(const PhaseState& z, const Params& prm);

}  // namespace h2body
