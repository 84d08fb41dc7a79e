#pragma once

// SL(2,R) acting on the upper half-plane by Moebius transformations, and its Lie algebra.
//
// Algebra basis (matrix form):
//   xi_e = [[0, -1/2], [1/2, 0]]   elliptic, generates rotations about (0, 1)
//   xi_h = [[1/2, 0], [0, -1/2]]   hyperbolic, generates dilations about the origin
//   xi_p = [[0, 1], [0, 0]]        parabolic, generates horizontal translations
//
// The dual is identified with sl(2,R) through <mu, xi> = 2 tr(mu xi). The dual basis is
//   mu_e = xi_p,  mu_h = xi_h,  mu_p = xi_p + xi_e.

#include <Eigen/Core>

#include "h2body/geom.hpp"

namespace h2body {

using Mat2 = Eigen::Matrix2d;

/// Element of SL(2,R). Entries are divided by sqrt(det) on construction; det <= 0 throws.
class GroupElement {
 public:
  GroupElement(double a, double b, double c, double d);
  explicit GroupElement(const Mat2& m) : GroupElement(m(0, 0), m(0, 1), m(1, 0), m(1, 1)) {}

  static GroupElement identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

  Mat2 matrix() const;
  GroupElement inverse() const { return {d_, -b_, -c_, a_}; }

  friend GroupElement operator*(const GroupElement& g, const GroupElement& h);

 private:
  double a_, b_, c_, d_;
};

/// Coordinates (E, H, P) of E xi_e + H xi_h + P xi_p.
struct AlgebraElement {
  double E = 0.0;
  double H = 0.0;
  double P = 0.0;

  static AlgebraElement from_matrix(const Mat2& m);
  Mat2 matrix() const;

  /// Frobenius norm of the matrix form.
  double norm() const { return matrix().norm(); }

  friend AlgebraElement operator*(double s, const AlgebraElement& x) { return {s * x.E, s * x.H, s * x.P}; }
  friend AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
    return {x.E + y.E, x.H + y.H, x.P + y.P};
  }
};

inline constexpr AlgebraElement xi_e{1.0, 0.0, 0.0};
inline constexpr AlgebraElement xi_h{0.0, 1.0, 0.0};
inline constexpr AlgebraElement xi_p{0.0, 0.0, 1.0};

/// Coordinates (e, h, p) of e mu_e + h mu_h + p mu_p.
struct CoalgebraElement {
  double e = 0.0;
  double h = 0.0;
  double p = 0.0;

  static CoalgebraElement from_matrix(const Mat2& m);
  Mat2 matrix() const;
};

/// <mu, xi> = 2 tr(mu xi) = e E + h H + p P.
double pairing(const CoalgebraElement& mu, const AlgebraElement& xi);

/// [x, y] = xy - yx.
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& xi);

/// g mu g^{-1}; the momentum map satisfies J(g . z) = coadjoint_transport(g, J(z)).
CoalgebraElement coadjoint_transport(const GroupElement& g, const CoalgebraElement& mu);

/// ad*_xi mu = [mu, xi].
CoalgebraElement ad_star(const AlgebraElement& xi, const CoalgebraElement& mu);

Point moebius_act(const GroupElement& g, const Point& p);
TangentVector moebius_act_tangent(const GroupElement& g, const TangentVector& v);

enum class AlgebraType { Elliptic, Hyperbolic, Parabolic, Zero };

struct Classification {
  AlgebraType type = AlgebraType::Zero;
  /// Positive rate: eigenvalues are +-i omega/2 (elliptic) or +-omega/2 (hyperbolic).
  double omega = 0.0;
  /// Parabolic only: xi is conjugate to sign * xi_p.
  int sign = 0;
};

/// Discriminant trace^2/4 - det of the matrix form.
double discriminant(const AlgebraElement& xi);
Classification classify(const AlgebraElement& xi);

/// exp(t xi) in closed form per algebra type.
GroupElement flow(const AlgebraElement& xi, double t);

/// Velocity of t -> exp(t xi) . p at t = 0.
TangentVector infinitesimal_generator(const AlgebraElement& xi, const Point& p);

/// Left translation taking (0, 1) to p.
GroupElement translation_to(const Point& p);

/// Hyperbolic rotation about (0, 1) by angle t.
GroupElement rotation(double t);

/// Isometry taking p0 to (0, 1) and the geodesic through p0 with chart direction theta0
/// onto the upper unit semicircle.
GroupElement normalizing_isometry(const Point& p0, double theta0);

}  // namespace h2body
