#pragma once

#include <optional>

#include "spinsq/half_int.hpp"
#include "spinsq/linalg.hpp"
#include "spinsq/types.hpp"

namespace spinsq {

/// Largest spin accepted by the single-particle constructors.
inline constexpr int kMaxTwiceSpin = 40;

/// Spin-j matrices in the j_z eigenbasis, ordered m = j, j-1, ..., -j.
struct SpinOperators {
  HalfInt j;
  CMatrix jx;
  CMatrix jy;
  CMatrix jz;

  int dim() const { return static_cast<int>(jz.rows()); }
  const CMatrix& operator[](Axis a) const;
  /// n . j for an arbitrary (not necessarily unit) vector n.
  CMatrix along(const Vec3& n) const;
  /// j_+ = j_x + i j_y.
  CMatrix raising() const { return jx + Complex(0, 1) * jy; }
  CMatrix lowering() const { return jx - Complex(0, 1) * jy; }
};

/// Ladder-operator construction. Throws InvalidArgument for j <= 0.
SpinOperators spin_operators(HalfInt j);

/// exp(-i angle n.j) for a unit axis n.
CMatrix rotation_unitary(const SpinOperators& ops, const Vec3& axis, double angle);

/// Highest-weight state rotated onto `direction`; <j> = j * direction.
/// Throws InvalidArgument unless |direction| = 1 to 1e-10.
CVector spin_coherent_state(HalfInt j, const Vec3& direction);

struct BlochVector {
  Vec3 r = Vec3::Zero();  // <j_l> / j
  double length() const { return r.norm(); }
};

struct NematicTensor {
  Mat3 Q = Mat3::Zero();  // traceless, symmetric
  double Q0 = 0.0;        // j(j+1)/3
};

struct SingleParticleReport {
  BlochVector bloch;
  NematicTensor nematic;
  Vec3 mean_spin = Vec3::Zero();    // <j_n>, <j_perp1>, <j_perp2>
  double variance = 0.0;            // (Delta j_n)^2
  std::optional<double> xi_sj_av1;  // absent when the perpendicular spin vanishes
};

/// Bloch vector, nematic tensor and the single-particle squeezing parameter
/// 2j (Delta j_n)^2 / (<j_perp1>^2 + <j_perp2>^2) of a one-particle state.
/// `axes` supplies n (column 0) and the two perpendicular directions.
SingleParticleReport single_particle_report(const CMatrix& rho_av1, HalfInt j, const Frame& axes);

/// Q_kl = 1/2 <j_k j_l + j_l j_k> - Q0 delta_kl for a one-particle state.
NematicTensor nematic_tensor(const CMatrix& rho_av1, const SpinOperators& ops);

}  // namespace spinsq
