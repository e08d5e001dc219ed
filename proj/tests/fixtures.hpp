#pragma once

#include <numbers>

#include "spinsq/moments.hpp"
#include "spinsq/random.hpp"
#include "spinsq/states.hpp"

namespace spinsq::testing {

// exp(-i mu J_z^2) applied to a coherent ensemble along x.
inline QuantumState twisted_state(const EnsembleShape& s, double mu) {
  CVector psi = coherent_ensemble(s, Vec3(1, 0, 0)).vector();
  const SparseOp jz = collective_operator(s, Axis::Z);
  for (Index i = 0; i < psi.size(); ++i) {
    const double m = jz.coeff(i, i).real();
    psi(i) *= std::exp(Complex(0, -mu * m * m));
  }
  return QuantumState::pure(s, psi);
}

// Frame with k along the least-variance direction perpendicular to the mean
// spin and l along the mean spin.
inline Frame squeezing_frame(const RawMoments& raw) {
  const Vec3 l = raw.mean.normalized();
  const Mat3 gamma = raw.second - raw.mean * raw.mean.transpose();
  const Vec3 u = l.unitOrthogonal();
  const Vec3 v = l.cross(u);
  Eigen::Matrix2d g;
  g << u.dot(gamma * u), u.dot(gamma * v), v.dot(gamma * u), v.dot(gamma * v);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(g);
  const Vec3 k = (eig.eigenvectors()(0, 0) * u + eig.eigenvectors()(1, 0) * v).normalized();
  return Frame::from_axes(k, l, k.cross(l));
}

struct Sample {
  RawMoments raw;
  Frame frame;
};

// Twisted coherent ensembles with a random collective rotation and a little
// white noise, paired with their squeezing frame.
inline std::vector<Sample> squeezed_samples(int count, random::Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Sample> out;
  for (int t = 0; t < count; ++t) {
    const auto s = EnsembleShape::make(2 + t % 5, HalfInt::from_twice(t % 3 == 2 ? 2 : 1));
    const auto st = twisted_state(s, 0.05 + 0.3 * u(rng));
    const CMatrix rot = rotation_unitary(spin_operators(s.spin()), random::random_unit(rng),
                                         2.0 * std::numbers::pi * u(rng));
    const auto raw = RawMoments::mix(raw_moments(apply_product_unitary(st, rot)),
                                     completely_mixed_moments(s), 0.1 * u(rng));
    out.push_back({raw, squeezing_frame(raw)});
  }
  return out;
}

}  // namespace spinsq::testing
