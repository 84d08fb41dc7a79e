#include "h2body/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "h2body/error.hpp"

namespace h2body {

double v_of_u(double u, double c) {
  if (!(u > 0.0 && u < 1.0) || !(c > 0.0)) {
    throw Error(ErrorCode::OutOfRange, "v(u) needs 0 < u < 1 and c > 0");
  }
  // Rationalized form of the root.
  const double a = 1.0 - u * u;
  return 2.0 * c * u / (a + std::sqrt(a * a + 4.0 * c * c * u * u));
}

double stability_factor(double u, double v) { return 1.0 - 3.0 * u * u * v * v - u * u - v * v; }

double reduced_factor(double u, double c) { return stability_factor(u, v_of_u(u, c)); }

double threshold_polynomial(double x, double c) {
  const double x2 = x * x;
  const double x4 = x2 * x2;
  return 3.0 * x4 * x4 + (16.0 * c * c - 8.0) * x4 * x2 + 6.0 * x4 - 1.0;
}

Mat2 rig_block(Family family, double theta1, double theta2, double omega, const Params& prm) {
  const double c1 = std::cos(theta1), c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double base = prm.m2() * omega * omega * (c1 + c2) * c2 / (s2 * s2);
  const double cc = c1 * c2;
  Mat2 ar;
  if (family == Family::Hyperbolic) {
    ar << 1.0, -1.0, -1.0, 1.0 / (cc * cc);
    ar *= base / (1.0 - cc);
  } else {
    ar << 1.0 / (1.0 - cc), 0.0, 0.0, 1.0 + cc;
    ar *= base;
  }
  return ar;
}

namespace {

AlgebraElement generator_of(Family family, double omega) {
  return omega * (family == Family::Elliptic ? xi_e : xi_h);
}

std::array<AlgebraElement, 2> rig_basis(Family family) {
  if (family == Family::Hyperbolic) return {xi_e, xi_p};
  return {xi_h, xi_e + xi_p};
}

Configuration shifted(const Vec4& q, const Vec4& w, double s) {
  return Configuration::from_coords({q[0] + s * w[0], q[1] + s * w[1], q[2] + s * w[2], q[3] + s * w[3]});
}

double max_abs(const Vec4& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), std::abs(v[3])});
}

// (D II . w)(xi) by central differences.
Eigen::Vector3d inertia_derivative(const Configuration& q, const Vec4& w, const AlgebraElement& xi,
                                   const Params& prm) {
  const double h = 1e-6 * std::max(1.0, max_abs(q.coords())) / max_abs(w);
  const Eigen::Matrix3d d =
      (locked_inertia(shifted(q.coords(), w, h), prm).m - locked_inertia(shifted(q.coords(), w, -h), prm).m) /
      (2.0 * h);
  return d * Eigen::Vector3d(xi.E, xi.H, xi.P);
}

double kinetic_inner(const Configuration& q, const Params& prm, const Vec4& a, const Vec4& b) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double y = q.q(i).y();
    s += prm.mass(i) / (y * y) * (a[2 * i] * b[2 * i] + a[2 * i + 1] * b[2 * i + 1]);
  }
  return s;
}

}  // namespace

Mat2 rig_block_definitional(Family family, double theta1, double theta2, double omega, const Params& prm) {
  const Configuration q = canonical_configuration(theta1, theta2);
  const AlgebraElement xi = generator_of(family, omega);
  const CoalgebraElement mu = momentum_map(legendre(q, prm, xi));
  const LockedInertia ii = locked_inertia(q, prm);
  const AlgebraElement ii_inv_mu = ii.solve(mu);
  const auto basis = rig_basis(family);
  Mat2 ar;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const AlgebraElement rhs = ii.solve(ad_star(basis[b], mu)) + bracket(basis[b], ii_inv_mu);
      ar(a, b) = pairing(ad_star(basis[a], mu), rhs);
    }
  }
  return ar;
}

double internal_block(Family family, double theta1, double theta2, const Params& prm) {
  const double u = std::cos(theta1), v = std::cos(theta2), s1 = std::sin(theta1);
  const double k = prm.k(), m2 = prm.m2();
  if (family == Family::Hyperbolic) {
    const double s1_4 = s1 * s1 * s1 * s1;
    return -k * m2 * m2 * v * s1_4 * (u * v + 1.0) * (u * u + s1 * s1 * v * v + 3.0) / ((u + v) * u);
  }
  const double a = 1.0 - u * u;
  return m2 * m2 * k * v * a * a * (1.0 + u * v) * stability_factor(u, v) / (u * (u + v));
}

InternalOracle internal_block_numeric(Family family, double theta1, double theta2, double omega,
                                      const Params& prm) {
  const Configuration q = canonical_configuration(theta1, theta2);
  const AlgebraElement xi = generator_of(family, omega);
  const Vec4 w = v_int_generator(theta1, theta2);
  const Vec4 q0 = q.coords();

  // Directional derivative of the exact gradient, central differences with one Richardson step.
  const double h = 1e-4 * std::min(q.q1().y(), q.q2().y()) / max_abs(w);
  const auto slope = [&](double s) {
    const Vec4 g = augmented_potential_gradient(shifted(q0, w, s), prm, xi);
    return g[0] * w[0] + g[1] * w[1] + g[2] * w[2] + g[3] * w[3];
  };
  const auto central = [&](double step) { return (slope(step) - slope(-step)) / (2.0 * step); };
  const double hess = (4.0 * central(0.5 * h) - central(h)) / 3.0;

  const Eigen::Vector3d a = inertia_derivative(q, w, xi, prm);
  const double corr = a.dot(locked_inertia(q, prm).m.ldlt().solve(a));
  return {hess, corr, hess + corr};
}

Vec4 v_int_generator(double theta1, double theta2) {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  return {-s1 * s1 * c1 * (c2 * c2 + 1.0), s1 * c1 * c1 * (c2 * c2 + 1.0), s2 * s2 * c2 * (c1 * c1 + 1.0),
          s2 * c2 * c2 * (c1 * c1 + 1.0)};
}

VIntMembership v_int_membership(Family family, double theta1, double theta2, double omega, const Params& prm) {
  const Configuration q = canonical_configuration(theta1, theta2);
  const AlgebraElement xi = generator_of(family, omega);
  const AlgebraElement stab = family == Family::Elliptic ? xi_e : xi_h;
  const Vec4 w = v_int_generator(theta1, theta2);

  const TangentVector g1 = infinitesimal_generator(stab, q.q1());
  const TangentVector g2 = infinitesimal_generator(stab, q.q2());
  const Vec4 orbit{g1.vx, g1.vy, g2.vx, g2.vy};
  const double orth = std::abs(kinetic_inner(q, prm, w, orbit)) /
                      std::sqrt(kinetic_inner(q, prm, w, w) * kinetic_inner(q, prm, orbit, orbit));

  const Eigen::Vector3d b = locked_inertia(q, prm).m.ldlt().solve(inertia_derivative(q, w, xi, prm));
  const double outside = family == Family::Elliptic ? std::hypot(b(1), b(2)) : std::hypot(b(0), b(2));
  return {orth, outside / b.norm()};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable:
      return "stable";
    case Verdict::Unstable:
      return "unstable";
    case Verdict::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

StabilityReport classify_stability(const RelativeEquilibrium& re) {
  StabilityReport r{};
  r.family = re.family;
  r.theta1 = re.theta1;
  r.theta2 = re.theta2;
  r.ar = rig_block(re.family, re.theta1, re.theta2, re.omega, re.params);
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Mat2>(r.ar).eigenvalues();
  r.ar_definite = ev(0) > 0.0;
  r.internal_value = internal_block(re.family, re.theta1, re.theta2, re.params);

  const auto sign = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
  const double band = degenerate_band * re.params.m2() * re.params.m2() * re.params.k();
  const bool degenerate = std::abs(r.internal_value) < band;
  r.signature = {sign(ev(0)), sign(ev(1)), degenerate ? 0 : sign(r.internal_value), 1};

  const int negatives = static_cast<int>(std::count(r.signature.begin(), r.signature.end(), -1));
  const bool zero = std::count(r.signature.begin(), r.signature.end(), 0) > 0;
  if (degenerate || zero) {
    r.verdict = Verdict::Degenerate;
  } else if (negatives == 0) {
    r.verdict = Verdict::Stable;
  } else if (negatives % 2 == 1) {
    r.verdict = Verdict::Unstable;
  } else {
    r.verdict = Verdict::Degenerate;
  }
  return r;
}

namespace {

// Root of a function negative at 0 and positive at 1, bisected to adjacent doubles.
template <class Fn>
double bisect_unit(Fn&& f) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

}  // namespace

MassRatioCurve threshold(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::OutOfRange, "mass ratio must be positive");
  }
  const double u0 = bisect_unit([c](double x) { return threshold_polynomial(x, c); });
  return {c, u0, std::atanh(u0)};
}

double threshold_from_factor(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::OutOfRange, "mass ratio must be positive");
  }
  return bisect_unit([c](double u) {
    if (u <= 0.0) return -1.0;
    if (u >= 1.0) return 4.0;
    return -reduced_factor(u, c);
  });
}

std::vector<MassRatioCurve> threshold_curve(double c_min, double c_max, int n_points) {
  if (!(c_min > 0.0) || !(c_max > c_min) || n_points < 2) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < c_min < c_max and at least two points");
  }
  std::vector<MassRatioCurve> out;
  out.reserve(static_cast<std::size_t>(n_points));
  const double a = std::log(c_min), b = std::log(c_max);
  for (int i = 0; i < n_points; ++i) {
    const double c = i == 0 ? c_min : i == n_points - 1 ? c_max : std::exp(a + (b - a) * i / (n_points - 1));
    out.push_back(threshold(c));
  }
  return out;
}

double intrinsic_stability_limit(double d1) {
  if (!(d1 > 0.0)) {
    throw Error(ErrorCode::NonPositiveDistance, "d1 must be positive");
  }
  const double t = std::tanh(d1);
  const double s = std::sinh(d1);
  return std::sqrt(3.0 * t * t + 1.0) / (4.0 * s * s * s);
}

double stability_limit_trig(double theta1) {
  const double c = std::cos(theta1), s = std::sin(theta1);
  return s * s * s * std::sqrt(3.0 * c * c + 1.0) / (4.0 * c * c * c);
}

bool intrinsic_stability_bound(double d1, double c) { return c < intrinsic_stability_limit(d1); }

double momentum_norm(double u, double c, double k, double m2) {
  const double v = v_of_u(u, c);
  const double xi_e_norm = std::sqrt(0.5);
  return std::sqrt(k * m2) * c * m2 * xi_e_norm * std::sqrt(u * (1.0 - v * v));
}

std::vector<std::pair<double, double>> momentum_norm_profile(double c, std::span<const double> u_grid, double k,
                                                             double m2) {
  std::vector<std::pair<double, double>> out;
  out.reserve(u_grid.size());
  for (const double u : u_grid) out.emplace_back(u, momentum_norm(u, c, k, m2));
  return out;
}

}  // namespace h2body
