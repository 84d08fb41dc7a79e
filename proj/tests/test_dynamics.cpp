#include <doctest.h>

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "h2body/dynamics.hpp"
#include "h2body/error.hpp"
#include "oracles.hpp"

using namespace h2body;
using doctest::Approx;

namespace {

PhaseState random_state(oracle::Sampler& s) {
  for (;;) {
    try {
      Configuration q(s.point(), s.point());
      if (q.distance() < 0.05) continue;
      return {q, {s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)}};
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("parameter and configuration validation") {
  CHECK_THROWS_AS(Params(0.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(Params(1.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(Params(1.0, 1.0, 0.0), Error);
  CHECK(Params(2.0, 4.0, 1.0).ratio() == 0.5);
  try {
    Configuration(Point(0, 1), Point(0, 1));
    FAIL("expected collision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Collision);
  }
}

TEST_CASE("state array round trip") {
  const State s{0.1, 1.2, -0.3, 0.8, 1, 2, 3, 4};
  CHECK(PhaseState::from_array(s).to_array() == s);
  CHECK_THROWS_AS(PhaseState::from_array({0, -1, 1, 1, 0, 0, 0, 0}), Error);
}

TEST_CASE("potential of distance") {
  const Params prm(2.0, 3.0, 0.5);
  const Configuration q(Point(0, 1), Point(0, std::exp(0.7)));
  CHECK(potential(q, prm) == Approx(-0.5 * 6.0 / std::tanh(0.7)).epsilon(1e-13));
  CHECK(potential_of_distance(0.7, prm) == Approx(potential(q, prm)).epsilon(1e-13));
}

TEST_CASE("potential gradient against finite differences") {
  oracle::Sampler s(31);
  const Params prm(1.3, 0.7, 1.1);
  for (int i = 0; i < 100; ++i) {
    const Configuration q = random_state(s).config;
    const auto f = [&](const Vec4& c) { return potential(Configuration::from_coords(c), prm); };
    const Vec4 fd = oracle::fd_gradient<4>(f, q.coords(), 1e-6);
    const Vec4 g = potential_gradient(q, prm);
    for (int j = 0; j < 4; ++j) CHECK(g[j] == Approx(fd[j]).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("hamiltonian vector field is the symplectic gradient") {
  oracle::Sampler s(32);
  const Params prm(1.0, 2.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const PhaseState z = random_state(s);
    const auto f = [&](const State& x) { return hamiltonian(PhaseState::from_array(x), prm); };
    const State dH = oracle::fd_gradient<8>(f, z.to_array(), 1e-6);
    const State X = hamiltonian_vector_field(z, prm);
    for (int j = 0; j < 4; ++j) {
      CHECK(X[j] == Approx(dH[j + 4]).epsilon(1e-5).scale(1.0));
      CHECK(X[j + 4] == Approx(-dH[j]).epsilon(1e-5).scale(1.0));
    }
    const State Xa = hamiltonian_vector_field(z.to_array(), prm);
    CHECK(Xa == X);
  }
}

TEST_CASE("kinetic energy uses the inverse metric") {
  const Params prm(2.0, 1.0, 1.0);
  const PhaseState z{Configuration(Point(0, 2), Point(1, 1)), {1, 0, 0, 3}};
  CHECK(kinetic_energy(z, prm) == Approx(0.5 * 4.0 / 2.0 + 0.5 * 9.0 / 1.0));
}

TEST_CASE("momentum map pairs with generators") {
  oracle::Sampler s(33);
  for (int i = 0; i < 100; ++i) {
    const PhaseState z = random_state(s);
    const AlgebraElement x = s.algebra();
    CHECK(pairing(momentum_map(z), x) == Approx(oracle::momentum_pairing(z, x)).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("momentum map is equivariant") {
  oracle::Sampler s(34);
  for (int i = 0; i < 50; ++i) {
    const PhaseState z = random_state(s);
    const GroupElement g = s.group(1.5);
    const CoalgebraElement lhs = momentum_map(act(g, z));
    const CoalgebraElement rhs = coadjoint_transport(g, momentum_map(z));
    const double sc = 1.0 + std::abs(rhs.e) + std::abs(rhs.h) + std::abs(rhs.p);
    CHECK(std::abs(lhs.e - rhs.e) < 1e-9 * sc);
    CHECK(std::abs(lhs.h - rhs.h) < 1e-9 * sc);
    CHECK(std::abs(lhs.p - rhs.p) < 1e-9 * sc);
  }
}

TEST_CASE("hamiltonian and momentum are invariant along group orbits") {
  oracle::Sampler s(35);
  const Params prm(0.8, 1.4, 2.0);
  for (int i = 0; i < 50; ++i) {
    const PhaseState z = random_state(s);
    const GroupElement g = s.group(1.5);
    CHECK(hamiltonian(act(g, z), prm) == Approx(hamiltonian(z, prm)).epsilon(1e-9));
    // Conserved: d/dt <J, xi> = 0 along the vector field.
    const State X = hamiltonian_vector_field(z, prm);
    const AlgebraElement x = s.algebra();
    State zs = z.to_array();
    const double h = 1e-6;
    State zp = zs, zm = zs;
    for (int j = 0; j < 8; ++j) {
      zp[j] += h * X[j];
      zm[j] -= h * X[j];
    }
    const double rate = (oracle::momentum_pairing(PhaseState::from_array(zp), x) -
                         oracle::momentum_pairing(PhaseState::from_array(zm), x)) / (2 * h);
    CHECK(std::abs(rate) < 1e-6);
  }
}

TEST_CASE("locked inertia against the kinetic metric") {
  oracle::Sampler s(36);
  const Params prm(1.5, 0.5, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Configuration q = random_state(s).config;
    const LockedInertia ii = locked_inertia(q, prm);
    const AlgebraElement x = s.algebra(), y = s.algebra();
    CHECK(ii.form(x, y) == Approx(oracle::inertia_pairing(q, prm, x, y)).epsilon(1e-10).scale(1.0));
    CHECK(pairing(ii.apply(x), y) == Approx(ii.form(x, y)).epsilon(1e-10).scale(1.0));
    CHECK((ii.m - ii.m.transpose()).cwiseAbs().maxCoeff() < 1e-12 * ii.m.cwiseAbs().maxCoeff());
    const AlgebraElement back = ii.solve(ii.apply(x));
    CHECK(back.E == Approx(x.E).epsilon(1e-8).scale(1.0));
    CHECK(back.H == Approx(x.H).epsilon(1e-8).scale(1.0));
    CHECK(back.P == Approx(x.P).epsilon(1e-8).scale(1.0));
    // J(FL(xi)) = II xi.
    const CoalgebraElement mu = momentum_map(legendre(q, prm, x));
    const CoalgebraElement ix = ii.apply(x);
    CHECK(mu.e == Approx(ix.e).epsilon(1e-10).scale(1.0));
    CHECK(mu.h == Approx(ix.h).epsilon(1e-10).scale(1.0));
    CHECK(mu.p == Approx(ix.p).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("legendre and velocities are inverse") {
  oracle::Sampler s(37);
  const Params prm(1.0, 3.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Configuration q = random_state(s).config;
    const AlgebraElement x = s.algebra();
    const auto v = velocities(legendre(q, prm, x), prm);
    for (int j = 0; j < 2; ++j) {
      const TangentVector g = infinitesimal_generator(x, q.q(j));
      CHECK(v[j].vx == Approx(g.vx).epsilon(1e-12).scale(1.0));
      CHECK(v[j].vy == Approx(g.vy).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("augmented potential gradient against finite differences") {
  oracle::Sampler s(38);
  const Params prm(1.0, 2.0, 1.5);
  for (int i = 0; i < 50; ++i) {
    const Configuration q = random_state(s).config;
    const AlgebraElement x = s.algebra();
    const double direct = potential(q, prm) - 0.5 * oracle::inertia_pairing(q, prm, x, x);
    CHECK(augmented_potential(q, prm, x) == Approx(direct).epsilon(1e-11).scale(1.0));
    const auto f = [&](const Vec4& c) { return augmented_potential(Configuration::from_coords(c), prm, x); };
    const Vec4 fd = oracle::fd_gradient<4>(f, q.coords(), 1e-6);
    const Vec4 g = augmented_potential_gradient(q, prm, x);
    for (int j = 0; j < 4; ++j) CHECK(g[j] == Approx(fd[j]).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("canonical momentum closed form") {
  const double t1 = 0.9, t2 = 1.2;
  const double ratio = std::cos(t2) * std::sin(t1) * std::sin(t1) / (std::sin(t2) * std::sin(t2) * std::cos(t1));
  const Params prm(ratio * 0.9, 0.9, 1.0);
  const Configuration q(Point(std::cos(t1), std::sin(t1)), Point(-std::cos(t2), std::sin(t2)));
  for (const AlgebraElement& x : {xi_e, xi_h, xi_p, AlgebraElement{0.3, -0.2, 0.7}}) {
    const Mat2 closed = momentum_at_canonical(t1, t2, x, prm);
    const Mat2 direct = momentum_map(legendre(q, prm, x)).matrix();
    CHECK(oracle::max_abs_diff(closed, direct) < 1e-12);
  }
  CHECK(momentum_at_canonical(t1, t2, AlgebraElement{}, prm).cwiseAbs().maxCoeff() == 0.0);
  try {
    momentum_at_canonical(t1, t2, xi_h, Params(1.0, 1.0, 1.0));
    FAIL("expected NotCanonical");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCanonical);
  }
}

TEST_CASE("spec examples") {
  const Params unit(1.0, 1.0, 1.0);
  CHECK(potential(Configuration(Point(0, 1), Point(0, std::exp(1.0))), unit) ==
        Approx(-1.0 / std::tanh(1.0)).epsilon(1e-14));
  CHECK(std::abs(potential(Configuration(Point(0, 1), Point(0, std::exp(30.0))), unit) + 1.0) < 1e-12);
  const double th = M_PI / 4;
  const Configuration sym(Point(std::cos(th), std::sin(th)), Point(-std::cos(th), std::sin(th)));
  CHECK(sym.distance() == Approx(1.7627471740390863).epsilon(1e-14));
  const Vec4 g = potential_gradient(sym, unit);
  CHECK(g[0] == Approx(-g[2]));
  CHECK(g[1] == Approx(g[3]));
  // dV annihilates generators.
  for (const AlgebraElement& x : {xi_e, xi_h, xi_p}) {
    double s = 0;
    for (int i = 0; i < 2; ++i) {
      const TangentVector v = infinitesimal_generator(x, sym.q(i));
      s += g[2 * i] * v.vx + g[2 * i + 1] * v.vy;
    }
    CHECK(std::abs(s) < 1e-9);
  }
  // Unit hyperbolic speed for particle 1 only, m1 = 2.
  const Params heavy(2.0, 1.0, 1.0);
  const Configuration q(Point(0.2, 1.5), Point(-1.0, 0.7));
  const double y = q.q1().y();
  const PhaseState z{q, {2.0 / (y * y) * y, 0.0, 0.0, 0.0}};
  CHECK(hamiltonian(z, heavy) == Approx(1.0 + potential(q, heavy)).epsilon(1e-14));
  CHECK(hamiltonian({q, {}}, heavy) == potential(q, heavy));
  const CoalgebraElement zero = momentum_map({q, {}});
  CHECK(zero.e == 0.0);
  CHECK(zero.h == 0.0);
  CHECK(zero.p == 0.0);
  const PhaseState lp = legendre(q, heavy, xi_p);
  CHECK(lp.p[0] == Approx(2.0 / (y * y)));
  CHECK(lp.p[1] == 0.0);
  CHECK(augmented_potential(q, heavy, AlgebraElement{}) == potential(q, heavy));
}

TEST_CASE("locked inertia is positive definite") {
  oracle::Sampler s(39);
  const Params prm(0.3, 2.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Configuration q = random_state(s).config;
    CHECK(locked_inertia(q, prm).m.llt().info() == Eigen::Success);
  }
}

TEST_CASE("augmented potential is invariant under transport") {
  oracle::Sampler s(40);
  const Params prm(1.0, 0.6, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Configuration q = random_state(s).config;
    const AlgebraElement x = s.algebra();
    const GroupElement g = s.group(1.5);
    const double a = augmented_potential(q, prm, x);
    CHECK(augmented_potential(act(g, q), prm, adjoint(g, x)) == Approx(a).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("canonical relation residual vanishes at balanced angles") {
  const double t1 = 0.8, t2 = 1.1;
  const double ratio = std::cos(t2) * std::sin(t1) * std::sin(t1) / (std::sin(t2) * std::sin(t2) * std::cos(t1));
  CHECK(std::abs(canonical_relation_residual(t1, t2, Params(ratio, 1.0, 1.0))) < 1e-14);
  CHECK(std::abs(canonical_relation_residual(t1, t2, Params(2.0 * ratio, 1.0, 1.0))) > 0.1);
}

}
