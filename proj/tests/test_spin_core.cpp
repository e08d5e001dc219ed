#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "spinsq/errors.hpp"
#include "spinsq/linalg.hpp"
#include "spinsq/random.hpp"
#include "spinsq/spin_core.hpp"

using namespace spinsq;

TEST_CASE("half-integers parse and print exactly") {
  CHECK(HalfInt::parse("3/2").twice() == 3);
  CHECK(HalfInt::parse("1.5").twice() == 3);
  CHECK(HalfInt::parse("1").twice() == 2);
  CHECK(HalfInt::parse("-1/2").twice() == -1);
  CHECK(HalfInt::from_twice(5).to_string() == "5/2");
  CHECK(HalfInt::from_twice(4).to_string() == "2");
  CHECK_THROWS_AS(HalfInt::parse("0.3"), InvalidArgument);
  CHECK_THROWS_AS(HalfInt::parse("abc"), InvalidArgument);
}

TEST_CASE("spin-1/2 matrices are half the Pauli matrices") {
  const auto ops = spin_operators(HalfInt::from_twice(1));
  CHECK(std::abs(ops.jz(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(ops.jz(1, 1) + 0.5) < 1e-15);
  CHECK(std::abs(ops.jx(0, 1) - 0.5) < 1e-15);
}

TEST_CASE("spin-1 jx has off-diagonal entries 1/sqrt(2) and Casimir 2") {
  const auto ops = spin_operators(HalfInt::from_int(1));
  CHECK(std::abs(ops.jx(0, 1) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(ops.jx(1, 2) - 1.0 / std::sqrt(2.0)) < 1e-14);
  const CMatrix cas = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
  CHECK(testing::max_abs_diff(cas, 2.0 * CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("spin-3/2 Casimir is 3.75") {
  const auto ops = spin_operators(HalfInt::from_twice(3));
  const CMatrix cas = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
  CHECK(testing::max_abs_diff(cas, 3.75 * CMatrix::Identity(4, 4)) < 1e-12);
}

TEST_CASE("commutation relations and Casimir hold up to j = 5/2") {
  for (int tj = 1; tj <= 5; ++tj) {
    const auto ops = spin_operators(HalfInt::from_twice(tj));
    const double j = tj / 2.0;
    const Complex i(0, 1);
    CHECK(testing::max_abs_diff(ops.jx * ops.jy - ops.jy * ops.jx, i * ops.jz) < 1e-12);
    CHECK(testing::max_abs_diff(ops.jy * ops.jz - ops.jz * ops.jy, i * ops.jx) < 1e-12);
    CHECK(testing::max_abs_diff(ops.jz * ops.jx - ops.jx * ops.jz, i * ops.jy) < 1e-12);
    const CMatrix cas = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
    CHECK(testing::max_abs_diff(cas, j * (j + 1) * CMatrix::Identity(tj + 1, tj + 1)) < 1e-12);
    for (Axis a : kAxes) CHECK(hermiticity_defect(ops[a]) < 1e-12);
    for (int k = 0; k < tj + 1; ++k) CHECK(std::abs(ops.jz(k, k).real() - (j - k)) < 1e-15);
  }
}

TEST_CASE("non-positive spin is rejected") {
  CHECK_THROWS_AS(spin_operators(HalfInt::from_twice(0)), InvalidArgument);
  CHECK_THROWS_AS(spin_operators(HalfInt::from_twice(-1)), InvalidArgument);
}

TEST_CASE("coherent states point along their direction") {
  const auto half = HalfInt::from_twice(1);
  const CVector up = spin_coherent_state(half, Vec3(0, 0, 1));
  CHECK(std::abs(std::abs(up(0)) - 1.0) < 1e-12);
  const auto one = HalfInt::from_int(1);
  const auto ops = spin_operators(one);
  const CVector px = spin_coherent_state(one, Vec3(1, 0, 0));
  CHECK(std::abs(px.dot(ops.jx * px).real() - 1.0) < 1e-10);
  CHECK(std::abs(px.dot(ops.jy * px)) < 1e-10);
  CHECK(std::abs(px.dot(ops.jz * px)) < 1e-10);
  const CVector mz = spin_coherent_state(one, Vec3(0, 0, -1));
  CHECK(std::abs(mz.dot(ops.jz * mz).real() + 1.0) < 1e-10);
}

TEST_CASE("coherent state along (0.6, 0, 0.8) matches an explicit y rotation") {
  const auto one = HalfInt::from_int(1);
  const auto ops = spin_operators(one);
  const double theta = std::acos(0.8);
  const CMatrix gen = Complex(0, -theta) * ops.jy;
  const CMatrix u = gen.exp();
  const CVector oracle = u.col(0);
  const CVector psi = spin_coherent_state(one, Vec3(0.6, 0, 0.8));
  CHECK(std::abs(std::abs(oracle.dot(psi)) - 1.0) < 1e-10);
  const Vec3 mean(psi.dot(ops.jx * psi).real(), psi.dot(ops.jy * psi).real(),
                  psi.dot(ops.jz * psi).real());
  CHECK(std::abs(mean.norm() - 1.0) < 1e-10);
  CHECK((mean - Vec3(0.6, 0, 0.8)).norm() < 1e-10);
}

TEST_CASE("coherent states have maximal Bloch length for random directions") {
  random::Rng rng(5);
  for (int tj = 1; tj <= 4; ++tj) {
    const auto j = HalfInt::from_twice(tj);
    const auto ops = spin_operators(j);
    for (int k = 0; k < 50; ++k) {
      const Vec3 n = random::random_unit(rng);
      const CVector psi = spin_coherent_state(j, n);
      const Vec3 mean(psi.dot(ops.jx * psi).real(), psi.dot(ops.jy * psi).real(),
                      psi.dot(ops.jz * psi).real());
      CHECK((mean - j.value() * n).norm() < 1e-10);
    }
  }
  CHECK_THROWS_AS(spin_coherent_state(HalfInt::from_int(1), Vec3(1, 1, 0)), InvalidArgument);
}

TEST_CASE("rotation unitaries are unitary and rotate the mean spin") {
  const auto ops = spin_operators(HalfInt::from_twice(3));
  const CMatrix u = rotation_unitary(ops, Vec3(0, 0, 1), std::numbers::pi / 2);
  CHECK(testing::max_abs_diff(u * u.adjoint(), CMatrix::Identity(4, 4)) < 1e-12);
  const CMatrix rotated = u * ops.jx * u.adjoint();
  CHECK(testing::max_abs_diff(rotated, ops.jy) < 1e-12);
}

TEST_CASE("isotropic single-particle state has zero Bloch vector and zero nematic tensor") {
  for (int tj = 1; tj <= 4; ++tj) {
    const auto j = HalfInt::from_twice(tj);
    const CMatrix rho = CMatrix::Identity(tj + 1, tj + 1) / (tj + 1.0);
    const auto r = single_particle_report(rho, j, Frame{});
    CHECK(r.bloch.length() < 1e-12);
    CHECK(r.nematic.Q.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(!r.xi_sj_av1.has_value());
  }
}

TEST_CASE("every spin-1/2 state has a vanishing nematic tensor") {
  random::Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const CMatrix rho = random::random_density_matrix(2, 2, rng);
    const auto r = single_particle_report(rho, HalfInt::from_twice(1), Frame{});
    CHECK(r.nematic.Q.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("m = 0 spin-1 state has Q_zz = -2/3 and no single-particle squeezing parameter") {
  CMatrix rho = CMatrix::Zero(3, 3);
  rho(1, 1) = 1.0;
  const Frame axes = Frame::from_axes(Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0));
  const auto r = single_particle_report(rho, HalfInt::from_int(1), axes);
  CHECK(std::abs(r.nematic.Q(2, 2) + 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(r.nematic.Q.trace()) < 1e-12);
  CHECK(!r.xi_sj_av1.has_value());
}

TEST_CASE("single-particle report validates its inputs") {
  const CMatrix bad = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(single_particle_report(bad, HalfInt::from_int(1), Frame{}), InvalidArgument);
  CHECK_THROWS_AS(Frame::from_axes(Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 1)), InvalidArgument);
}

TEST_CASE("Bloch constraint holds for random mixed states") {
  random::Rng rng(13);
  for (int k = 0; k < 10000; ++k) {
    const int tj = 1 + k % 4;
    const auto j = HalfInt::from_twice(tj);
    const CMatrix rho = random::random_density_matrix(tj + 1, 1 + k % 3, rng);
    const auto r = single_particle_report(rho, j, Frame{});
    CHECK(r.bloch.length() <= 1.0 + 1e-12);
  }
}

TEST_CASE("second moment along n equals n^T (Q + Q0) n") {
  random::Rng rng(17);
  for (int k = 0; k < 200; ++k) {
    const int tj = 1 + k % 5;
    const auto j = HalfInt::from_twice(tj);
    const auto ops = spin_operators(j);
    const CMatrix rho = random::random_density_matrix(tj + 1, 2, rng);
    const NematicTensor q = nematic_tensor(rho, ops);
    const Vec3 n = random::random_unit(rng);
    const CMatrix jn = ops.along(n);
    const double direct = (jn * jn * rho).trace().real();
    CHECK(std::abs(direct - n.dot((q.Q + q.Q0 * Mat3::Identity()) * n)) < 1e-10);
    CHECK(std::abs(q.Q.trace()) < 1e-10);
    CHECK((q.Q - q.Q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("single-particle squeezing parameter of a coherent state is 2j(j/2)/j^2 = 1") {
  for (int tj = 1; tj <= 4; ++tj) {
    const auto j = HalfInt::from_twice(tj);
    const CVector psi = spin_coherent_state(j, Vec3(0, 0, 1));
    const CMatrix rho = psi * psi.adjoint();
    const Frame axes = Frame::from_axes(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1));
    const auto r = single_particle_report(rho, j, axes);
    REQUIRE(r.xi_sj_av1.has_value());
    CHECK(std::abs(*r.xi_sj_av1 - 1.0) < 1e-10);
  }
}
