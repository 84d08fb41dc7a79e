#pragma once

// Reduced energy-momentum analysis of the canonical relative equilibria.
//
// u = cos(theta1), v = cos(theta2), c = m1 / m2 throughout.

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "h2body/equilibria.hpp"

namespace h2body {

/// Positive root v of the canonical relation c = ((1 - u^2) / u) v / (1 - v^2).
double v_of_u(double u, double c);

/// F(u, v) = 1 - 3 u^2 v^2 - u^2 - v^2.
double stability_factor(double u, double v);

/// f(u) = F(u, v(u)).
double reduced_factor(double u, double c);

/// p(x) = 3x^8 + (16c^2 - 8)x^6 + 6x^4 - 1.
double threshold_polynomial(double x, double c);

/// Rigid block in the basis {xi_e, xi_p} (hyperbolic) or {xi_h, xi_e + xi_p} (elliptic).
Mat2 rig_block(Family family, double theta1, double theta2, double omega, const Params& prm);

/// Same block assembled from the momentum, the locked inertia tensor and ad / ad*.
Mat2 rig_block_definitional(Family family, double theta1, double theta2, double omega, const Params& prm);

/// Closed form of (d^2 V_xi + corr)(w, w) on the internal generator w.
double internal_block(Family family, double theta1, double theta2, const Params& prm);

struct InternalOracle {
  double hessian;     ///< d^2 V_xi (w, w) by differencing the exact gradient along w
  double correction;  ///< <(D II . w)(xi), II^{-1} (D II . w)(xi)>
  double value;       ///< hessian + correction
};

InternalOracle internal_block_numeric(Family family, double theta1, double theta2, double omega,
                                      const Params& prm);

/// (-s1^2 c1 (c2^2 + 1), s1 c1^2 (c2^2 + 1), s2^2 c2 (c1^2 + 1), s2 c2^2 (c1^2 + 1)).
Vec4 v_int_generator(double theta1, double theta2);

struct VIntMembership {
  double orthogonality;  ///< |cos| of the kinetic-metric angle between w and g_mu . q
  double membership;     ///< components of II^{-1}((D II . w)(xi)) outside g_mu, relative to its norm
};

VIntMembership v_int_membership(Family family, double theta1, double theta2, double omega, const Params& prm);

enum class Verdict { Stable, Unstable, Degenerate };

const char* to_string(Verdict v);

struct StabilityReport {
  Family family;
  double theta1;
  double theta2;
  Mat2 ar;
  bool ar_definite;
  double internal_value;
  std::array<int, 4> signature;  ///< +1 / -1 / 0 per block direction
  Verdict verdict;
};

/// Degenerate band |internal| < degenerate_band * m2^2 k.
inline constexpr double degenerate_band = 1e-9;

StabilityReport classify_stability(const RelativeEquilibrium& re);

struct MassRatioCurve {
  double c;
  double u0;
  double d1_threshold;
};

/// Bisection on p over (0, 1).
MassRatioCurve threshold(double c);

/// Root of f(u) = F(u, v(u)), found independently of p.
double threshold_from_factor(double c);

/// Log-spaced thresholds on [c_min, c_max].
std::vector<MassRatioCurve> threshold_curve(double c_min, double c_max, int n_points);

/// sqrt(3 tanh^2 d1 + 1) / (4 sinh^3 d1).
double intrinsic_stability_limit(double d1);

/// sin^3 t1 sqrt(3 cos^2 t1 + 1) / (4 cos^3 t1).
double stability_limit_trig(double theta1);

/// c below the intrinsic limit at d1.
bool intrinsic_stability_bound(double d1, double c);

/// sqrt(k m2) m1 |xi_e|_F sqrt(u (1 - v(u)^2)) with m1 = c m2.
double momentum_norm(double u, double c, double k = 1.0, double m2 = 1.0);

std::vector<std::pair<double, double>> momentum_norm_profile(double c, std::span<const double> u_grid,
                                                             double k = 1.0, double m2 = 1.0);

}  // namespace h2body
