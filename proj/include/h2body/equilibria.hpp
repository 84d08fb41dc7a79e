#pragma once

// Relative equilibria: solutions z(t) = exp(t xi) . z(0) lying in one group orbit.

#include <span>
#include <utility>
#include <vector>

#include "h2body/dynamics.hpp"

namespace h2body {

enum class Family { Elliptic, Hyperbolic };

const char* to_string(Family f);

/// Point on the connecting geodesic with m1 sinh(2 d1) = m2 sinh(2 d2), d1 + d2 = d.
struct CenterOfMassSplit {
  Point com;
  double d1;
  double d2;
};

CenterOfMassSplit center_of_mass(const Point& q1, const Point& q2, const Params& prm);

/// d2 balancing d1 for the given masses: m1 sinh(2 d1) = m2 sinh(2 d2).
double partner_distance(double d1, const Params& prm);

/// Isometry taking a pair to (cos t1, sin t1), (-cos t2, sin t2) with center of mass (0, 1).
struct CanonicalFrame {
  GroupElement g;
  double theta1;
  double theta2;
};

CanonicalFrame to_canonical(const Point& q1, const Point& q2, const Params& prm);

/// theta = atan2(sech d, tanh d), the angle of the point at distance d from (0, 1) on the unit circle.
std::pair<double, double> canonical_angles_from_distances(double d1, double d2);
double distance_from_canonical_angle(double theta);
Configuration canonical_configuration(double theta1, double theta2);

/// Existence screening at a canonical configuration.
struct AdmissibilityReport {
  double hyperbolic_commutator = 0;  ///< |[J, xi]| for xi = xi_h
  double elliptic_commutator = 0;    ///< |[J, xi]| for xi = xi_e
  double case_c_commutator = 0;      ///< |[J, xi]| for xi = xi_e + xi_p
  double parabolic_commutator = 0;   ///< |[J, xi]| for xi = xi_p
  /// m2^2 k cos t2 sin^2 t2 sin^4 t1 (cos t1 + cos t2); criticality in case (c) would need it to vanish.
  double case_c_residual = 0;
  /// min over omega of |dV_{omega (xi_e + xi_p)}| relative to |dV|.
  double case_c_min_gradient = 0;
  bool hyperbolic_admissible = false;
  bool elliptic_admissible = false;
  bool case_c_admissible = false;
  bool parabolic_admissible = false;
};

/// Matrix commutator [J(p_q), xi] at the canonical configuration.
Mat2 canonical_commutator(double theta1, double theta2, const AlgebraElement& xi, const Params& prm);

AdmissibilityReport admissible_generators(double theta1, double theta2, const Params& prm);

struct RelativeEquilibrium {
  Family family;
  Configuration config;
  AlgebraElement xi;
  double omega;  ///< signed rate, xi = omega xi_e or omega xi_h at the canonical representative
  Params params;
  double d1;
  double d2;
  double theta1;
  double theta2;

  PhaseState initial_state() const { return legendre(config, params, xi); }
  double distance() const { return d1 + d2; }
  double period() const;

  /// The same solution seen through the isometry g: configuration g.q, velocity Ad_g xi.
  RelativeEquilibrium transported(const GroupElement& g) const;
};

/// Both intrinsic forms of omega^2: (2 k m1 / (sinh^2 d sinh 2 d2), 2 k m2 / (sinh^2 d sinh 2 d1)).
std::pair<double, double> omega_squared_intrinsic(double d1, double d2, const Params& prm);

/// Both trigonometric forms of omega^2 at canonical angles.
std::pair<double, double> omega_squared_trig(double theta1, double theta2, const Params& prm);

RelativeEquilibrium build_relative_equilibrium(Family family, double d1, double d2, const Params& prm,
                                               int sign = 1);

/// Convenience overload solving d2 from the center-of-mass balance.
RelativeEquilibrium build_relative_equilibrium(Family family, double d1, const Params& prm, int sign = 1);

PhaseState analytic_trajectory(const RelativeEquilibrium& re, double t);

struct IntrinsicReport {
  double max_perpendicular = 0;    ///< |cos| of the angle between v_i and the connecting geodesic
  bool orientation_ok = true;      ///< Equal (hyperbolic) or Opposite (elliptic) at every sample
  double max_speed_error = 0;      ///< relative error of |v_i| against |omega| cosh/sinh(d_i)
  double max_distance_drift = 0;   ///< |d_i(t) - d_i|
  double max_com_error = 0;        ///< center-of-mass deviation from its predicted motion
  bool passed = false;
};

IntrinsicReport intrinsic_checks(const RelativeEquilibrium& re, std::span<const double> times);

/// Samples one period (elliptic) or t in [0, 2] (hyperbolic) at 17 points.
IntrinsicReport intrinsic_checks(const RelativeEquilibrium& re);

}  // namespace h2body
