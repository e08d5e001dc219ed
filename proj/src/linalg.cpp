#include "spinsq/linalg.hpp"

#include <cmath>
#include <string>

#include "spinsq/errors.hpp"

namespace spinsq {

HermitianEigen hermitian_eigen(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConsistencyError("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConsistencyError("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double min_eigenvalue(const CMatrix& h) { return hermitian_eigenvalues(h)(0); }

double hermiticity_defect(const CMatrix& h) {
  if (h.rows() != h.cols()) return INFINITY;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix unitary_exp(const CMatrix& generator, double angle) {
  const HermitianEigen e = hermitian_eigen(generator);
  CVector phases(e.values.size());
  for (Index i = 0; i < e.values.size(); ++i) {
    phases(i) = std::polar(1.0, -angle * e.values(i));
  }
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  const RVector ev = hermitian_eigenvalues(a - b);
  return 0.5 * ev.cwiseAbs().sum();
}

CVector kron(std::span<const CVector> factors) {
  CVector out = CVector::Ones(1);
  for (const CVector& f : factors) {
    CVector next(out.size() * f.size());
    for (Index i = 0; i < out.size(); ++i) {
      next.segment(i * f.size(), f.size()) = out(i) * f;
    }
    out = std::move(next);
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    }
  }
  return out;
}

void require_density_matrix(const CMatrix& rho, double tol, double psd_tol) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) {
    throw InvalidArgument("density matrix must be square and non-empty");
  }
  if (hermiticity_defect(rho) > tol) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw InvalidArgument("density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  const double lo = min_eigenvalue(0.5 * (rho + rho.adjoint()));
  if (lo < -psd_tol) {
    throw InvalidArgument("density matrix has negative eigenvalue " + std::to_string(lo));
  }
}

Frame Frame::from_columns(const Mat3& axes) {
  const Mat3 gram = axes.transpose() * axes;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("degenerate frame: axes are not orthonormal");
  }
  return Frame(axes);
}

Frame Frame::from_axes(const Vec3& a, const Vec3& b, const Vec3& c) {
  Mat3 m;
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = c;
  return from_columns(m);
}

}  // namespace spinsq
