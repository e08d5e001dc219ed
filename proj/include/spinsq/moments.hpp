#pragma once

#include "spinsq/ensemble.hpp"
#include "spinsq/linalg.hpp"
#include "spinsq/spin_core.hpp"

namespace spinsq {

/// Frame-free first and second moments of a state. All three fields are
/// linear in the state, so moments of mixtures are mixtures of moments.
struct RawMoments {
  EnsembleShape shape;
  Vec3 mean = Vec3::Zero();    // <J_l>
  Mat3 second = Mat3::Zero();  // C_kl = 1/2 <J_k J_l + J_l J_k>
  Mat3 local = Mat3::Zero();   // sum_n 1/2 <j_k j_l + j_l j_k>^(n)

  /// (1 - w) a + w b. Throws InvalidArgument on a shape mismatch.
  static RawMoments mix(const RawMoments& a, const RawMoments& b, double w);
};

/// Moments by trace pairing against the cached collective operators.
RawMoments raw_moments(const QuantumState& state);

/// Moments of identity/D in closed form (no D x D matrix is built).
RawMoments completely_mixed_moments(const EnsembleShape& shape);

/// The six measured quantities plus everything derived from them, in one frame.
struct MomentSet {
  EnsembleShape shape;
  Frame frame;
  Vec3 J = Vec3::Zero();          // <J_l>
  Vec3 K = Vec3::Zero();          // <J_l^2>
  Vec3 M = Vec3::Zero();          // sum_n <(j_l^(n))^2>
  Vec3 Ktilde = Vec3::Zero();     // K - M
  Vec3 var = Vec3::Zero();        // K - J^2
  Vec3 var_tilde = Vec3::Zero();  // Ktilde - J^2

  /// Fills the derived fields from J, K and M.
  static MomentSet from_values(const EnsembleShape& shape, const Vec3& J, const Vec3& K,
                               const Vec3& M, const Frame& frame = {});
  double J_(Axis a) const { return J(index_of(a)); }
  double Kt(Axis a) const { return Ktilde(index_of(a)); }
  double vt(Axis a) const { return var_tilde(index_of(a)); }
};

MomentSet moment_set(const RawMoments& raw, const Frame& frame = {});
MomentSet moment_set(const QuantumState& state, const Frame& frame = {});

struct MomentMatrices {
  EnsembleShape shape;
  Frame frame;
  Vec3 mean = Vec3::Zero();
  Mat3 C = Mat3::Zero();
  Mat3 gamma = Mat3::Zero();
  NematicTensor Q;
  Mat3 X = Mat3::Zero();  // (N-1) gamma + C - N^2 Q
  double Q0() const { return Q.Q0; }
};

MomentMatrices moment_matrices(const RawMoments& raw, const Frame& frame = {});
MomentMatrices moment_matrices(const QuantumState& state, const Frame& frame = {});

/// Particle-averaged one- and two-body reduced states.
struct ReducedStates {
  EnsembleShape shape;
  CMatrix rho_av1;                 // d x d
  CMatrix rho_av2;                 // d^2 x d^2, averaged over ordered pairs
  Vec3 corr = Vec3::Zero();        // <j_l (x) j_l>_av2
  Vec3 local_mean = Vec3::Zero();  // <j_l (x) 1>_av2
  double sigma = 0.0;              // sum_l corr_l
};

/// Throws InvalidArgument for N = 1.
ReducedStates reduced_states(const QuantumState& state);

/// Builds the reduced-state summary from a given average two-body matrix.
ReducedStates reduced_states_from_pair(const EnsembleShape& shape, const CMatrix& rho_av2);

/// Moments from the reduced states alone; the second route used to
/// cross-check raw_moments.
RawMoments raw_moments(const ReducedStates& reduced);

}  // namespace spinsq
