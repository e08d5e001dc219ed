#pragma once

#include <variant>
#include <vector>

#include "spinsq/half_int.hpp"
#include "spinsq/types.hpp"

namespace spinsq {

/// Dimension guards. `max_dim` bounds d^N for any state; `max_dense_dim`
/// bounds states that need a dense D x D matrix (mixed states, partial
/// transposes, thermal states).
struct Capacity {
  Index max_dim = Index{1} << 16;
  Index max_dense_dim = 4096;

  /// Defaults, with max_dim taken from SPINSQ_GUARD_DIM when set.
  static Capacity from_environment();
};

/// Process-wide guard used when no explicit Capacity is passed.
Capacity default_capacity();
void set_default_capacity(const Capacity& cap);

/// N spin-j particles; d = 2j+1 and D = d^N.
class EnsembleShape {
 public:
  /// Throws InvalidArgument for N < 1 or j <= 0, CapacityError when D
  /// exceeds cap.max_dim.
  static EnsembleShape make(int particles, HalfInt j, const Capacity& cap = default_capacity());

  int particles() const { return particles_; }
  HalfInt spin() const { return spin_; }
  double j() const { return spin_.value(); }
  int local_dim() const { return local_dim_; }
  Index dim() const { return dim_; }

  /// Throws CapacityError unless D <= cap.max_dense_dim.
  void require_dense(const Capacity& cap = default_capacity()) const;

  bool operator==(const EnsembleShape&) const = default;

 private:
  int particles_ = 1;
  HalfInt spin_ = HalfInt::from_twice(1);
  int local_dim_ = 2;
  Index dim_ = 2;
};

struct WeightedVector {
  double weight;
  CVector psi;
};

/// A state of an ensemble, stored as a pure vector, a dense density matrix
/// or a convex mixture of pure vectors.
class QuantumState {
 public:
  using Mixture = std::vector<WeightedVector>;

  /// Validates ||psi|| = 1 to 1e-10.
  static QuantumState pure(const EnsembleShape& shape, CVector psi);
  /// Validates Hermiticity and trace to 1e-10 and eigenvalues >= -1e-9.
  static QuantumState mixed(const EnsembleShape& shape, CMatrix rho);
  /// Validates weights (non-negative, summing to 1) and component norms.
  static QuantumState mixture(const EnsembleShape& shape, Mixture components);

  /// For matrices that are positive by construction; only the trace and
  /// Hermiticity checks run.
  static QuantumState mixed_trusted(const EnsembleShape& shape, CMatrix rho);

  const EnsembleShape& shape() const { return shape_; }

  bool is_pure() const { return std::holds_alternative<CVector>(repr_); }
  bool is_dense() const { return std::holds_alternative<CMatrix>(repr_); }
  bool is_mixture() const { return std::holds_alternative<Mixture>(repr_); }

  const CVector& vector() const { return std::get<CVector>(repr_); }
  const CMatrix& matrix() const { return std::get<CMatrix>(repr_); }
  const Mixture& components() const { return std::get<Mixture>(repr_); }

  /// Materializes the D x D density matrix (subject to the dense guard).
  CMatrix density_matrix(const Capacity& cap = default_capacity()) const;

  /// Calls f(weight, psi) for each pure component, or f(rho) for a dense state.
  template <typename PureFn, typename DenseFn>
  void visit(PureFn&& on_pure, DenseFn&& on_dense) const {
    if (const auto* v = std::get_if<CVector>(&repr_)) {
      on_pure(1.0, *v);
    } else if (const auto* m = std::get_if<CMatrix>(&repr_)) {
      on_dense(*m);
    } else {
      for (const auto& c : std::get<Mixture>(repr_)) on_pure(c.weight, c.psi);
    }
  }

 private:
  using Repr = std::variant<CVector, CMatrix, Mixture>;
  QuantumState(const EnsembleShape& shape, Repr repr) : shape_(shape), repr_(std::move(repr)) {}

  EnsembleShape shape_;
  Repr repr_;
};

}  // namespace spinsq
