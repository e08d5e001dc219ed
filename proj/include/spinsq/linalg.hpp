#pragma once

#include <span>

#include "spinsq/types.hpp"

namespace spinsq {

/// Eigenvalues in ascending order with matching column eigenvectors.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

HermitianEigen hermitian_eigen(const CMatrix& h);
RVector hermitian_eigenvalues(const CMatrix& h);
double min_eigenvalue(const CMatrix& h);

/// Largest entrywise deviation from Hermiticity, max |h - h^dagger|.
double hermiticity_defect(const CMatrix& h);

/// exp(-i * angle * generator) for a Hermitian generator, via its eigendecomposition.
CMatrix unitary_exp(const CMatrix& generator, double angle);

/// 0.5 * || a - b ||_1 for Hermitian a, b.
double trace_distance(const CMatrix& a, const CMatrix& b);

/// Kronecker product of a list of factors, first factor most significant.
CVector kron(std::span<const CVector> factors);
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Throws InvalidArgument unless rho is Hermitian and unit-trace within `tol`
/// and its smallest eigenvalue is at least -psd_tol.
void require_density_matrix(const CMatrix& rho, double tol = 1e-10, double psd_tol = 1e-9);

/// An orthonormal triad of axes. Column i of `axes` is the i-th axis; the
/// canonical frame is the identity.
class Frame {
 public:
  Frame() : axes_(Mat3::Identity()) {}

  /// Throws InvalidArgument ("degenerate frame") unless the columns are
  /// orthonormal to 1e-10.
  static Frame from_columns(const Mat3& axes);
  static Frame from_axes(const Vec3& a, const Vec3& b, const Vec3& c);

  const Mat3& matrix() const { return axes_; }
  Vec3 axis(int i) const { return axes_.col(i); }

 private:
  explicit Frame(const Mat3& axes) : axes_(axes) {}
  Mat3 axes_;
};

}  // namespace spinsq
