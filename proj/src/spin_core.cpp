#include "spinsq/spin_core.hpp"

#include <cmath>
#include <numbers>

#include "spinsq/errors.hpp"

namespace spinsq {

const CMatrix& SpinOperators::operator[](Axis a) const {
  switch (a) {
    case Axis::X:
      return jx;
    case Axis::Y:
      return jy;
    case Axis::Z:
      return jz;
  }
  return jz;
}

CMatrix SpinOperators::along(const Vec3& n) const { return n(0) * jx + n(1) * jy + n(2) * jz; }

SpinOperators spin_operators(HalfInt j) {
  if (j.twice() <= 0) throw InvalidArgument("spin j must be positive");
  if (j.twice() > kMaxTwiceSpin) {
    throw InvalidArgument("spin j=" + j.to_string() + " exceeds the supported maximum");
  }
  const int d = j.twice() + 1;
  const double jv = j.value();

  CMatrix jz = CMatrix::Zero(d, d);
  CMatrix jp = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = jv - k;
    jz(k, k) = m;
    if (k > 0) {
      // <m+1| j_+ |m> sits one row above the diagonal.
      jp(k - 1, k) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
    }
  }
  const CMatrix jm = jp.adjoint();
  SpinOperators ops{j, 0.5 * (jp + jm), Complex(0, -0.5) * (jp - jm), jz};
  return ops;
}

CMatrix rotation_unitary(const SpinOperators& ops, const Vec3& axis, double angle) {
  return unitary_exp(ops.along(axis), angle);
}

CVector spin_coherent_state(HalfInt j, const Vec3& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("coherent-state direction must be a unit vector");
  }
  const SpinOperators ops = spin_operators(j);
  CVector top = CVector::Zero(ops.dim());
  top(0) = 1.0;

  const Vec3 z = Vec3::UnitZ();
  const double theta = std::acos(std::clamp(direction.dot(z), -1.0, 1.0));
  Vec3 w = z.cross(direction);
  if (w.norm() < 1e-14) {
    if (direction(2) > 0) return top;
    w = Vec3::UnitY();  // antipodal: any perpendicular axis works
  }
  w.normalize();
  return rotation_unitary(ops, w, theta) * top;
}

NematicTensor nematic_tensor(const CMatrix& rho, const SpinOperators& ops) {
  const double jv = ops.j.value();
  NematicTensor out;
  out.Q0 = jv * (jv + 1.0) / 3.0;
  for (Axis a : kAxes) {
    for (Axis b : kAxes) {
      const CMatrix anti = 0.5 * (ops[a] * ops[b] + ops[b] * ops[a]);
      out.Q(index_of(a), index_of(b)) = (rho * anti).trace().real();
    }
  }
  out.Q -= out.Q0 * Mat3::Identity();
  return out;
}

SingleParticleReport single_particle_report(const CMatrix& rho, HalfInt j, const Frame& axes) {
  const SpinOperators ops = spin_operators(j);
  if (rho.rows() != ops.dim()) {
    throw InvalidArgument("single-particle state has the wrong dimension");
  }
  require_density_matrix(rho);

  SingleParticleReport rep;
  Vec3 mean;
  for (Axis a : kAxes) mean(index_of(a)) = (rho * ops[a]).trace().real();
  rep.bloch.r = mean / j.value();
  rep.nematic = nematic_tensor(rho, ops);

  const Vec3 n = axes.axis(0);
  const Vec3 p1 = axes.axis(1);
  const Vec3 p2 = axes.axis(2);
  rep.mean_spin = Vec3(n.dot(mean), p1.dot(mean), p2.dot(mean));
  const double second = n.dot((rep.nematic.Q + rep.nematic.Q0 * Mat3::Identity()) * n);
  rep.variance = second - rep.mean_spin(0) * rep.mean_spin(0);

  const double denom = rep.mean_spin(1) * rep.mean_spin(1) + rep.mean_spin(2) * rep.mean_spin(2);
  if (denom > 1e-14) {
    rep.xi_sj_av1 = 2.0 * j.value() * rep.variance / denom;
  }
  return rep;
}

}  // namespace spinsq
