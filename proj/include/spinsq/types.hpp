#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <complex>
#include <cstdint>
#include <string_view>

namespace spinsq {

using Index = std::int64_t;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Row-major so that kernels can walk rows with outerIndexPtr/innerIndexPtr.
using SparseOp = Eigen::SparseMatrix<Complex, Eigen::RowMajor, std::int64_t>;

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

constexpr int index_of(Axis a) { return static_cast<int>(a); }

constexpr char axis_name(Axis a) {
  switch (a) {
    case Axis::X:
      return 'x';
    case Axis::Y:
      return 'y';
    case Axis::Z:
      return 'z';
  }
  return '?';
}

/// Parses "x", "y" or "z" (case-insensitive). Throws InvalidArgument otherwise.
Axis parse_axis(std::string_view text);

/// The two axes other than `a`, in cyclic order (x -> y,z; y -> z,x; z -> x,y).
constexpr std::array<Axis, 2> other_axes(Axis a) {
  switch (a) {
    case Axis::X:
      return {Axis::Y, Axis::Z};
    case Axis::Y:
      return {Axis::Z, Axis::X};
    case Axis::Z:
      return {Axis::X, Axis::Y};
  }
  return {Axis::Y, Axis::Z};
}

inline Vec3 unit_vector(Axis a) {
  Vec3 v = Vec3::Zero();
  v(index_of(a)) = 1.0;
  return v;
}

}  // namespace spinsq
