#include "h2body/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "h2body/error.hpp"

namespace h2body {

const char* to_string(Family f) { return f == Family::Elliptic ? "elliptic" : "hyperbolic"; }

namespace {

double norm4(const Vec4& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]); }

// Root of m1 sinh(2s) - m2 sinh(2(d - s)) on [0, d]; strictly increasing in s.
double balance_root(double d, const Params& prm) {
  const auto f = [&](double s) { return prm.m1() * std::sinh(2.0 * s) - prm.m2() * std::sinh(2.0 * (d - s)); };
  double lo = 0.0, hi = d;
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < 200 && hi - lo > 1e-8 * d; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // Secant polish, kept inside the bracket.
  double s = lo - flo * (hi - lo) / (fhi - flo);
  for (int i = 0; i < 50; ++i) {
    const double fs = f(s);
    if (fs == 0.0) break;
    if (fs < 0.0) {
      lo = s;
      flo = fs;
    } else {
      hi = s;
      fhi = fs;
    }
    double next = lo - flo * (hi - lo) / (fhi - flo);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step < 1e-13 || hi - lo < 1e-13) break;
  }
  return s;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

CenterOfMassSplit center_of_mass(const Point& q1, const Point& q2, const Params& prm) {
  const Geodesic g = geodesic_through(q1, q2);
  const double d = hyperbolic_distance(q1, q2);
  const double d1 = balance_root(d, prm);
  const Point com = geodesic_point_at(g, geodesic_arc_length(g, q1) + d1).base;
  return {com, d1, d - d1};
}

double partner_distance(double d1, const Params& prm) {
  if (!(d1 > 0.0)) {
    throw Error(ErrorCode::NonPositiveDistance, "d1 must be positive");
  }
  return 0.5 * std::asinh(prm.ratio() * std::sinh(2.0 * d1));
}

CanonicalFrame to_canonical(const Point& q1, const Point& q2, const Params& prm) {
  const CenterOfMassSplit split = center_of_mass(q1, q2, prm);
  const Geodesic geo = geodesic_through(q1, q2);
  const TangentVector t = geodesic_point_at(geo, geodesic_arc_length(geo, split.com));
  GroupElement g = normalizing_isometry(split.com, std::atan2(t.vy, t.vx));
  if (moebius_act(g, q1).x() < 0.0) {
    g = GroupElement(0.0, -1.0, 1.0, 0.0) * g;
  }
  const Point p1 = moebius_act(g, q1);
  const Point p2 = moebius_act(g, q2);
  return {g, std::atan2(p1.y(), p1.x()), std::atan2(p2.y(), -p2.x())};
}

std::pair<double, double> canonical_angles_from_distances(double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw Error(ErrorCode::NonPositiveDistance, "distances to the center of mass must be positive");
  }
  const auto angle = [](double d) { return std::atan2(1.0 / std::cosh(d), std::tanh(d)); };
  return {angle(d1), angle(d2)};
}

double distance_from_canonical_angle(double theta) { return std::asinh(std::cos(theta) / std::sin(theta)); }

Configuration canonical_configuration(double theta1, double theta2) {
  return {Point(std::cos(theta1), std::sin(theta1)), Point(-std::cos(theta2), std::sin(theta2))};
}

Mat2 canonical_commutator(double theta1, double theta2, const AlgebraElement& xi, const Params& prm) {
  const Mat2 j = momentum_at_canonical(theta1, theta2, xi, prm);
  const Mat2 x = xi.matrix();
  return j * x - x * j;
}

AdmissibilityReport admissible_generators(double theta1, double theta2, const Params& prm) {
  const Configuration q = canonical_configuration(theta1, theta2);
  const Vec4 dv = potential_gradient(q, prm);
  const double dv_norm = norm4(dv);

  // min over omega^2 >= 0 of |dV - omega^2 b|, b the gradient of 1/2 <II eta, eta>.
  const auto min_gradient = [&](const AlgebraElement& eta) {
    const Vec4 ga = augmented_potential_gradient(q, prm, eta);
    Vec4 b{};
    double ab = 0.0, bb = 0.0;
    for (int i = 0; i < 4; ++i) {
      b[i] = dv[i] - ga[i];
      ab += dv[i] * b[i];
      bb += b[i] * b[i];
    }
    const double s = std::max(0.0, ab / bb);
    Vec4 r{};
    for (int i = 0; i < 4; ++i) r[i] = dv[i] - s * b[i];
    return norm4(r) / dv_norm;
  };
  const auto commutator = [&](const AlgebraElement& eta) {
    const double scale = momentum_at_canonical(theta1, theta2, eta, prm).norm() * eta.norm();
    return canonical_commutator(theta1, theta2, eta, prm).norm() / scale;
  };

  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const AlgebraElement case_c = xi_e + xi_p;

  AdmissibilityReport r;
  r.hyperbolic_commutator = commutator(xi_h);
  r.elliptic_commutator = commutator(xi_e);
  r.case_c_commutator = commutator(case_c);
  r.parabolic_commutator = commutator(xi_p);
  r.case_c_residual = prm.m2() * prm.m2() * prm.k() * c2 * s2 * s2 * std::pow(s1, 4) * (c1 + c2);
  r.case_c_min_gradient = min_gradient(case_c);

  constexpr double commutes = 1e-12;
  constexpr double critical = 1e-8;
  r.hyperbolic_admissible = r.hyperbolic_commutator < commutes && min_gradient(xi_h) < critical;
  r.elliptic_admissible = r.elliptic_commutator < commutes && min_gradient(xi_e) < critical;
  r.case_c_admissible = r.case_c_commutator < commutes && r.case_c_min_gradient < critical;
  r.parabolic_admissible = r.parabolic_commutator < commutes && min_gradient(xi_p) < critical;
  return r;
}

double RelativeEquilibrium::period() const { return 2.0 * std::numbers::pi / std::abs(omega); }

RelativeEquilibrium RelativeEquilibrium::transported(const GroupElement& g) const {
  RelativeEquilibrium out = *this;
  out.config = act(g, config);
  out.xi = adjoint(g, xi);
  return out;
}

std::pair<double, double> omega_squared_intrinsic(double d1, double d2, const Params& prm) {
  const double sd = std::sinh(d1 + d2);
  return {2.0 * prm.k() * prm.m1() / (sd * sd * std::sinh(2.0 * d2)),
          2.0 * prm.k() * prm.m2() / (sd * sd * std::sinh(2.0 * d1))};
}

std::pair<double, double> omega_squared_trig(double theta1, double theta2, const Params& prm) {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double common = prm.k() * s1 * s1 * s2 * s2 / ((c1 + c2) * (c1 + c2));
  return {common * s2 * s2 / c2 * prm.m1(), common * s1 * s1 / c1 * prm.m2()};
}

RelativeEquilibrium build_relative_equilibrium(Family family, double d1, double d2, const Params& prm, int sign) {
  if (sign != 1 && sign != -1) {
    throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  }
  const auto [theta1, theta2] = canonical_angles_from_distances(d1, d2);
  const double lhs = prm.m1() * std::sinh(2.0 * d1);
  const double rhs = prm.m2() * std::sinh(2.0 * d2);
  if (relative_gap(lhs, rhs) > 1e-9) {
    throw Error(ErrorCode::MassDistanceMismatch, "d1, d2 do not balance the masses");
  }
  const double omega = sign * std::sqrt(omega_squared_intrinsic(d1, d2, prm).first);
  const AlgebraElement xi = omega * (family == Family::Elliptic ? xi_e : xi_h);
  const Configuration q = canonical_configuration(theta1, theta2);

  const double grad = norm4(augmented_potential_gradient(q, prm, xi));
  if (grad > 1e-8 * (1.0 + norm4(potential_gradient(q, prm)))) {
    throw Error(ErrorCode::NotCritical, "configuration is not critical for the augmented potential");
  }
  return RelativeEquilibrium{family, q, xi, omega, prm, d1, d2, theta1, theta2};
}

RelativeEquilibrium build_relative_equilibrium(Family family, double d1, const Params& prm, int sign) {
  return build_relative_equilibrium(family, d1, partner_distance(d1, prm), prm, sign);
}

PhaseState analytic_trajectory(const RelativeEquilibrium& re, double t) {
  return legendre(act(flow(re.xi, t), re.config), re.params, re.xi);
}

IntrinsicReport intrinsic_checks(const RelativeEquilibrium& re, std::span<const double> times) {
  IntrinsicReport r;
  const double w = std::abs(re.omega);
  const bool elliptic = re.family == Family::Elliptic;
  const Point com0 = center_of_mass(re.config.q1(), re.config.q2(), re.params).com;
  const double di[2] = {re.d1, re.d2};

  for (const double t : times) {
    const PhaseState z = analytic_trajectory(re, t);
    const auto v = velocities(z, re.params);
    const Geodesic geo = geodesic_through(z.config.q1(), z.config.q2());

    const auto perpendicularity = [&](const TangentVector& vec) {
      const TangentVector tan = geodesic_point_at(geo, geodesic_arc_length(geo, vec.base));
      const TangentVector tan_here{vec.base, tan.vx, tan.vy};
      return std::abs(hyperbolic_inner(vec, tan_here)) / (vec.norm() * tan_here.norm());
    };

    for (int i = 0; i < 2; ++i) {
      r.max_perpendicular = std::max(r.max_perpendicular, perpendicularity(v[i]));
      const double expected = w * (elliptic ? std::sinh(di[i]) : std::cosh(di[i]));
      r.max_speed_error = std::max(r.max_speed_error, std::abs(v[i].norm() - expected) / expected);
    }
    try {
      const Orientation o = normal_orientation(geo, v[0], v[1]);
      if (o != (elliptic ? Orientation::Opposite : Orientation::Equal)) r.orientation_ok = false;
    } catch (const Error&) {
      r.orientation_ok = false;
    }

    const CenterOfMassSplit split = center_of_mass(z.config.q1(), z.config.q2(), re.params);
    r.max_distance_drift =
        std::max({r.max_distance_drift, std::abs(split.d1 - re.d1), std::abs(split.d2 - re.d2)});

    const TangentVector vc = infinitesimal_generator(re.xi, split.com);
    if (elliptic) {
      r.max_com_error = std::max({r.max_com_error, hyperbolic_distance(split.com, com0), vc.norm()});
    } else {
      const Point predicted = moebius_act(flow(re.xi, t), com0);
      r.max_com_error = std::max({r.max_com_error, hyperbolic_distance(split.com, predicted),
                                  std::abs(vc.norm() - w) / w, perpendicularity(vc)});
    }
  }
  constexpr double tol = 1e-9;
  r.passed = r.max_perpendicular < tol && r.orientation_ok && r.max_speed_error < tol &&
             r.max_distance_drift < tol && r.max_com_error < tol;
  return r;
}

IntrinsicReport intrinsic_checks(const RelativeEquilibrium& re) {
  const double span = re.family == Family::Elliptic ? re.period() : 2.0;
  std::vector<double> times(17);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = span * static_cast<double>(i) / 16.0;
  return intrinsic_checks(re, times);
}

}  // namespace h2body
