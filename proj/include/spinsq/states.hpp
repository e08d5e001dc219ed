#pragma once

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "spinsq/ensemble.hpp"
#include "spinsq/spin_core.hpp"

namespace spinsq {

/// Sparse collective operators of one ensemble shape.
struct CollectiveOperators {
  EnsembleShape shape;
  SpinOperators spin;
  std::array<SparseOp, 3> J;  // J_x, J_y, J_z
  // sum_n 1/2 {j_k, j_l}^(n), indexed by local_index(k, l).
  std::array<SparseOp, 6> local;

  const SparseOp& operator[](Axis a) const { return J[index_of(a)]; }
  const SparseOp& local_second(Axis a, Axis b) const { return local[local_index(a, b)]; }
  static int local_index(Axis a, Axis b);
};

/// Cached per shape; the cache only ever returns value-identical operators.
std::shared_ptr<const CollectiveOperators> collective_operators(const EnsembleShape& shape);

/// J_l = sum_n j_l^(n) as a sparse D x D matrix.
SparseOp collective_operator(const EnsembleShape& shape, Axis l);

/// sum_n op^(n) for a single-particle operator op.
SparseOp embed_sum(const EnsembleShape& shape, const CMatrix& op);

/// J_x^2 + J_y^2 + J_z^2 (dense; subject to the dense guard).
CMatrix total_spin_squared(const EnsembleShape& shape);

/// Thermal Hamiltonian with a bound-entangled window: J_x^2 + J_y^2 + J_z^2.
CMatrix bes_hamiltonian(const EnsembleShape& shape);
/// Five-qubit example Hamiltonian J_x^2 + J_z^2/4 + 3 J_z/4 (any N, j).
CMatrix h5_hamiltonian(const EnsembleShape& shape);

QuantumState product_state(const EnsembleShape& shape, std::span<const CVector> sites);

QuantumState coherent_ensemble(const EnsembleShape& shape, const Vec3& direction);

/// Symmetric Dicke state |Nj, lambda_z>. Throws InvalidArgument when
/// |lambda_z| > Nj or the parity of 2 lambda_z differs from that of 2Nj.
QuantumState dicke_state(const EnsembleShape& shape, HalfInt lambda_z);

enum class SingletVariant { PairProduct, PermutationInvariant, Spin1Pair, Projector };

SingletVariant parse_singlet_variant(std::string_view name);
std::string_view to_string(SingletVariant v);

/// A many-body singlet: <J_l> = <J_l^2> = 0 for every l.
QuantumState singlet_state(const EnsembleShape& shape, SingletVariant variant);

/// Orthonormal basis of the kernel of J^2 (empty when no singlet exists).
std::vector<CVector> singlet_basis(const EnsembleShape& shape);

/// identity / D.
QuantumState completely_mixed(const EnsembleShape& shape);

/// exp(-H/T)/Z for a fixed Hamiltonian, with the eigendecomposition reused
/// across temperatures.
class ThermalFamily {
 public:
  ThermalFamily(const EnsembleShape& shape, const CMatrix& hamiltonian);

  /// Throws InvalidArgument for T <= 0.
  QuantumState at(double temperature) const;
  const RVector& energies() const { return eig_.values; }

 private:
  EnsembleShape shape_;
  HermitianEigen eig_;
};

QuantumState thermal_state(const EnsembleShape& shape, const CMatrix& hamiltonian,
                           double temperature);

/// Normalized projector onto the ground space of H (eigenvalues within
/// `tol` of the minimum), stored as an equal-weight mixture.
QuantumState ground_state(const EnsembleShape& shape, const CMatrix& hamiltonian,
                          double tol = 1e-9);

/// (1 - p) rho + p identity/D. Throws InvalidArgument for p outside [0, 1].
QuantumState mix_with_white_noise(const QuantumState& state, double p);

/// u^{(x)N} rho u^{(x)N dagger} for a single-particle unitary u.
QuantumState apply_product_unitary(const QuantumState& state, const CMatrix& u);

/// Uniform average of exp(-i phi_k J_n) rho exp(+i phi_k J_n) over
/// phi_k = 2 pi k / steps. Throws InvalidArgument for steps < 2.
QuantumState rotated_average(const QuantumState& state, const Vec3& axis, int steps = 64);

/// (sqrt(alpha)|1> + sqrt(1 - alpha)|0>)^{(x)N} for spin-1 particles.
QuantumState qutrit_alpha_state(int particles, double alpha);

/// Parameters of the separable states sitting on the vertices of the
/// separable polytope for a given mean spin.
struct ExtremalSpec {
  EnsembleShape shape;
  Vec3 mean = Vec3::Zero();     // target <J>
  double kappa = 0.0;           // (N-1)/N
  Vec3 c = Vec3::Zero();        // c_l = sqrt(1 - (others^2)/(Nj)^2)
  Vec3 p = Vec3::Zero();        // mixing probability per axis
  Vec3 count = Vec3::Zero();    // M_l = N p_l
  Vec3 epsilon = Vec3::Zero();  // fractional part of M_l

  /// Throws InvalidArgument when |mean| > Nj.
  static ExtremalSpec make(const EnsembleShape& shape, const Vec3& mean);
  bool integer_count(Axis l) const;
};

enum class ExtremalKind { A, B, BPrime };

struct ExtremalChoice {
  ExtremalKind kind;
  Axis axis;
  /// Parses "A_x", "B_y", "Bprime_z".
  static ExtremalChoice parse(std::string_view text);
};

/// Separable state for vertex A_l, B_l or the approximation B'_l. B with a
/// non-integer N p_l throws InvalidArgument (request Bprime instead).
QuantumState extremal_state(const ExtremalSpec& spec, ExtremalKind kind, Axis l);

}  // namespace spinsq
