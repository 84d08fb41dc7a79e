#include "h2body/liegroup.hpp"

#include <cmath>
#include <complex>

#include "h2body/error.hpp"

namespace h2body {

GroupElement::GroupElement(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw Error(ErrorCode::InvalidArgument, "group element needs a positive determinant");
  }
  const double s = 1.0 / std::sqrt(det);
  a_ = a * s;
  b_ = b * s;
  c_ = c * s;
  d_ = d * s;
}

Mat2 GroupElement::matrix() const {
  Mat2 m;
  m << a_, b_, c_, d_;
  return m;
}

GroupElement operator*(const GroupElement& g, const GroupElement& h) {
  return GroupElement(g.matrix() * h.matrix());
}

AlgebraElement AlgebraElement::from_matrix(const Mat2& m) {
  // [[H/2, P - E/2], [E/2, -H/2]]; the trace part is discarded.
  const double alpha = 0.5 * (m(0, 0) - m(1, 1));
  return {2.0 * m(1, 0), 2.0 * alpha, m(0, 1) + m(1, 0)};
}

Mat2 AlgebraElement::matrix() const {
  Mat2 m;
  m << 0.5 * H, P - 0.5 * E, 0.5 * E, -0.5 * H;
  return m;
}

CoalgebraElement CoalgebraElement::from_matrix(const Mat2& m) {
  // [[h/2, e + p/2], [p/2, -h/2]]
  const double alpha = 0.5 * (m(0, 0) - m(1, 1));
  return {m(0, 1) - m(1, 0), 2.0 * alpha, 2.0 * m(1, 0)};
}

Mat2 CoalgebraElement::matrix() const {
  Mat2 m;
  m << 0.5 * h, e + 0.5 * p, 0.5 * p, -0.5 * h;
  return m;
}

double pairing(const CoalgebraElement& mu, const AlgebraElement& xi) {
  return mu.e * xi.E + mu.h * xi.H + mu.p * xi.P;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  const Mat2 a = x.matrix();
  const Mat2 b = y.matrix();
  return AlgebraElement::from_matrix(a * b - b * a);
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& xi) {
  return AlgebraElement::from_matrix(g.matrix() * xi.matrix() * g.inverse().matrix());
}

CoalgebraElement coadjoint_transport(const GroupElement& g, const CoalgebraElement& mu) {
  return CoalgebraElement::from_matrix(g.matrix() * mu.matrix() * g.inverse().matrix());
}

CoalgebraElement ad_star(const AlgebraElement& xi, const CoalgebraElement& mu) {
  const Mat2 m = mu.matrix();
  const Mat2 x = xi.matrix();
  return CoalgebraElement::from_matrix(m * x - x * m);
}

Point moebius_act(const GroupElement& g, const Point& p) {
  const double x = p.x();
  const double y = p.y();
  const double den_re = g.c() * x + g.d();
  const double den_im = g.c() * y;
  const double den = den_re * den_re + den_im * den_im;
  const double num_x = (g.a() * x + g.b()) * den_re + g.a() * den_im * y;
  return Point(num_x / den, y / den);
}

TangentVector moebius_act_tangent(const GroupElement& g, const TangentVector& v) {
  const std::complex<double> z(v.base.x(), v.base.y());
  const std::complex<double> w = g.c() * z + g.d();
  const std::complex<double> dv = std::complex<double>(v.vx, v.vy) / (w * w);
  return TangentVector{moebius_act(g, v.base), dv.real(), dv.imag()};
}

double discriminant(const AlgebraElement& xi) {
  return 0.25 * xi.H * xi.H + 0.5 * xi.P * xi.E - 0.25 * xi.E * xi.E;
}

Classification classify(const AlgebraElement& xi) {
  const double n = xi.norm();
  if (n == 0.0) {
    return {};
  }
  const double delta = discriminant(xi);
  if (std::abs(delta) < 1e-12 * (1.0 + n * n)) {
    // Sign of the xi_e component under the Killing form separates the two nilpotent nappes.
    return {AlgebraType::Parabolic, 0.0, xi.P - xi.E > 0.0 ? 1 : -1};
  }
  if (delta < 0.0) {
    return {AlgebraType::Elliptic, 2.0 * std::sqrt(-delta), 0};
  }
  return {AlgebraType::Hyperbolic, 2.0 * std::sqrt(delta), 0};
}

GroupElement flow(const AlgebraElement& xi, double t) {
  const Classification cls = classify(xi);
  const Mat2 m = xi.matrix();
  const Mat2 id = Mat2::Identity();
  switch (cls.type) {
    case AlgebraType::Zero:
      return GroupElement::identity();
    case AlgebraType::Parabolic:
      return GroupElement(id + t * m);
    case AlgebraType::Elliptic: {
      const double half = 0.5 * cls.omega;
      return GroupElement(std::cos(half * t) * id + (std::sin(half * t) / half) * m);
    }
    case AlgebraType::Hyperbolic: {
      // Spectral projectors keep the decaying direction accurate for large |t|.
      const double half = 0.5 * cls.omega;
      const Mat2 up = 0.5 * (id + m / half);
      const Mat2 down = 0.5 * (id - m / half);
      return GroupElement(std::exp(half * t) * up + std::exp(-half * t) * down);
    }
  }
  return GroupElement::identity();
}

TangentVector infinitesimal_generator(const AlgebraElement& xi, const Point& p) {
  const double x = p.x();
  const double y = p.y();
  return TangentVector{p, xi.E * 0.5 * (y * y - x * x - 1.0) + xi.H * x + xi.P, -xi.E * x * y + xi.H * y};
}

GroupElement translation_to(const Point& p) {
  const double s = std::sqrt(p.y());
  return GroupElement(s, p.x() / s, 0.0, 1.0 / s);
}

GroupElement rotation(double t) {
  const double c = std::cos(0.5 * t);
  const double s = std::sin(0.5 * t);
  return GroupElement(c, -s, s, c);
}

GroupElement normalizing_isometry(const Point& p0, double theta0) {
  const double c = std::cos(0.5 * theta0);
  const double s = std::sin(0.5 * theta0);
  const double r = std::sqrt(p0.y());
  return GroupElement(c / r, -(c * p0.x() + s * p0.y()) / r, s / r, (-s * p0.x() + c * p0.y()) / r);
}

}  // namespace h2body
