#include <doctest.h>

#include "helpers.hpp"
#include "spinsq/criteria.hpp"
#include "spinsq/errors.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/moments.hpp"
#include "spinsq/random.hpp"
#include "spinsq/states.hpp"

using namespace spinsq;
using testing::shape;

TEST_CASE("completely mixed single spin-1 has uniform outcomes") {
  const auto st = completely_mixed(shape(1, "1"));
  const RVector p = outcome_distribution(st, Axis::Z);
  REQUIRE(p.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(p(k) - 1.0 / 3.0) < 1e-12);
  const auto rec = simulate_population_measurement(st, Axis::Z, 20000, 5);
  EstimatedMoments est;
  est.shape = st.shape();
  accumulate_estimates(rec, est);
  const auto& m = est.M[2];
  CHECK(std::abs(m.value - 2.0 / 3.0) < 5 * m.std_error);
}

TEST_CASE("two-qubit Dicke state always yields one up and one down") {
  const auto st = dicke_state(shape(2, "1/2"), HalfInt::from_int(0));
  const auto rec = simulate_population_measurement(st, Axis::Z, 500, 1);
  REQUIRE(rec.chi.size() == 2);
  CHECK(rec.chi[0] == doctest::Approx(0.5));
  for (const auto& row : rec.counts) {
    CHECK(row[0] == 1);
    CHECK(row[1] == 1);
  }
}

TEST_CASE("records are consistent and seed-deterministic") {
  random::Rng rng(50);
  const auto st = random::random_pure_state(shape(3, "1"), rng);
  for (Axis a : kAxes) {
    const auto r1 = simulate_population_measurement(st, a, 300, 77);
    const auto r2 = simulate_population_measurement(st, a, 300, 77);
    CHECK(r1.counts == r2.counts);
    for (const auto& row : r1.counts) {
      int total = 0;
      for (int c : row) {
        CHECK(c >= 0);
        total += c;
      }
      CHECK(total == 3);
    }
    const RVector p = outcome_distribution(st, a);
    CHECK(std::abs(p.sum() - 1.0) < 1e-12);
    CHECK(p.minCoeff() >= -1e-15);
  }
  const auto r3 = simulate_population_measurement(st, Axis::Z, 300, 78);
  CHECK(r3.counts != simulate_population_measurement(st, Axis::Z, 300, 77).counts);
  CHECK(simulate_population_measurement(st, Axis::X, 300, 77).counts !=
        simulate_population_measurement(st, Axis::Y, 300, 77).counts);
  CHECK_THROWS_AS(simulate_population_measurement(st, Axis::Z, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(estimate_moment_set(st, 1, 1), InvalidArgument);
}

TEST_CASE("spin-1 pair singlet population estimate of M_z") {
  const auto st = singlet_state(shape(2, "1"), SingletVariant::Spin1Pair);
  const auto est = estimate_moment_set(st, 10000, 3);
  CHECK(std::abs(est.M[2].value - 4.0 / 3.0) < 3 * est.M[2].std_error + 1e-12);
  CHECK(std::abs(est.J[2].value) < 1e-12);
  CHECK(std::abs(est.K[2].value) < 1e-12);
}

TEST_CASE("coherent ensemble mean spin estimate") {
  const auto st = coherent_ensemble(shape(3, "1"), Vec3(0, 0, 1));
  const auto est = estimate_moment_set(st, 10000, 9);
  CHECK(std::abs(est.J[2].value - 3.0) <= 3 * est.J[2].std_error + 1e-12);
  CHECK(std::abs(est.J[0].value) < 3 * est.J[0].std_error + 1e-12);
}

TEST_CASE("all-zero spin-1 product gives M_z = 0 exactly") {
  const auto s = shape(3, "1");
  const CVector zero = CVector::Unit(3, 1);
  const std::vector<CVector> sites(3, zero);
  const auto st = product_state(s, sites);
  const auto rec = simulate_population_measurement(st, Axis::Z, 100, 2);
  EstimatedMoments est;
  est.shape = s;
  accumulate_estimates(rec, est);
  CHECK(est.M[2].value == 0.0);
  for (const auto& row : rec.counts) CHECK(row[1] == 3);
}

TEST_CASE("estimated moment set derives Ktilde from K and M") {
  random::Rng rng(51);
  const auto st = random::random_mixed_state(shape(2, "1"), 2, rng);
  const auto est = estimate_moment_set(st, 500, 4);
  const auto m = est.to_moment_set();
  for (int l = 0; l < 3; ++l) {
    CHECK(std::abs(est.Ktilde[l].value - (est.K[l].value - est.M[l].value)) < 1e-12);
    CHECK(std::abs(m.Ktilde(l) - est.Ktilde[l].value) < 1e-12);
    CHECK(est.K[l].std_error > 0.0);
  }
  CHECK(est.shots == 500);
}

TEST_CASE("estimates are unbiased over repetitions") {
  const auto s = shape(2, "1");
  random::Rng rng(52);
  const auto st = random::random_pure_state(s, rng);
  const auto exact = moment_set(st);
  const int reps = 1000;
  const int shots = 50;
  Vec3 sum_j = Vec3::Zero(), sum_k = Vec3::Zero(), sum_m = Vec3::Zero();
  Vec3 se_j = Vec3::Zero(), se_k = Vec3::Zero(), se_m = Vec3::Zero();
  for (int r = 0; r < reps; ++r) {
    const auto est = estimate_moment_set(st, shots, 1000 + r);
    for (int l = 0; l < 3; ++l) {
      sum_j(l) += est.J[l].value;
      sum_k(l) += est.K[l].value;
      sum_m(l) += est.M[l].value;
      se_j(l) += est.J[l].std_error * est.J[l].std_error;
      se_k(l) += est.K[l].std_error * est.K[l].std_error;
      se_m(l) += est.M[l].std_error * est.M[l].std_error;
    }
  }
  for (int l = 0; l < 3; ++l) {
    CHECK(std::abs(sum_j(l) / reps - exact.J(l)) < 5 * std::sqrt(se_j(l)) / reps);
    CHECK(std::abs(sum_k(l) / reps - exact.K(l)) < 5 * std::sqrt(se_k(l)) / reps);
    CHECK(std::abs(sum_m(l) / reps - exact.M(l)) < 5 * std::sqrt(se_m(l)) / reps);
  }
}

TEST_CASE("estimation error shrinks as one over root shots") {
  const auto st = dicke_state(shape(3, "1"), HalfInt::from_int(0));
  const auto exact = moment_set(st);
  auto rms = [&](int shots) {
    double acc = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      const auto est = estimate_moment_set(st, shots, 7000 + r);
      acc += std::pow(est.M[2].value - exact.M(2), 2) + std::pow(est.K[0].value - exact.K(0), 2);
    }
    return std::sqrt(acc / reps);
  };
  const double ratio = rms(100) / rms(10000);
  CHECK(ratio > 5.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("violated set stabilizes as shots grow") {
  const auto st =
      mix_with_white_noise(singlet_state(shape(2, "1"), SingletVariant::Spin1Pair), 0.2);
  const auto exact = evaluate_optimal_set(moment_set(st));
  const auto est = estimate_moment_set(st, 100000, 11);
  const auto rep = evaluate_optimal_set(est.to_moment_set(), false);
  for (const auto& r : exact.records) {
    if (std::abs(r.margin) > 0.1) CHECK(rep.at(r.key()).violated == r.violated);
  }
  CHECK(rep.at("isoin").violated);
}
