#include "spinsq/ensemble.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

#include "spinsq/errors.hpp"
#include "spinsq/linalg.hpp"

namespace spinsq {

namespace {

std::mutex g_capacity_mutex;
bool g_capacity_set = false;
Capacity g_capacity;

}  // namespace

Capacity Capacity::from_environment() {
  Capacity cap;
  if (const char* env = std::getenv("SPINSQ_GUARD_DIM"); env && *env) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) cap.max_dim = v;
  }
  return cap;
}

Capacity default_capacity() {
  std::lock_guard lock(g_capacity_mutex);
  if (!g_capacity_set) {
    g_capacity = Capacity::from_environment();
    g_capacity_set = true;
  }
  return g_capacity;
}

void set_default_capacity(const Capacity& cap) {
  std::lock_guard lock(g_capacity_mutex);
  g_capacity = cap;
  g_capacity_set = true;
}

EnsembleShape EnsembleShape::make(int particles, HalfInt j, const Capacity& cap) {
  if (particles < 1) throw InvalidArgument("particle number N must be >= 1");
  if (j.twice() < 1) throw InvalidArgument("spin j must be >= 1/2");
  EnsembleShape s;
  s.particles_ = particles;
  s.spin_ = j;
  s.local_dim_ = j.twice() + 1;
  Index dim = 1;
  for (int n = 0; n < particles; ++n) {
    dim *= s.local_dim_;
    if (dim > cap.max_dim) {
      // Report the exact d^N when it is representable.
      const double full = std::pow(static_cast<double>(s.local_dim_), particles);
      const Index shown = full < 9e18 ? static_cast<Index>(full) : dim;
      throw CapacityError("ensemble N=" + std::to_string(particles) + ", j=" + j.to_string(), shown,
                          cap.max_dim);
    }
  }
  s.dim_ = dim;
  return s;
}

void EnsembleShape::require_dense(const Capacity& cap) const {
  if (dim_ > cap.max_dense_dim) {
    throw CapacityError("dense density matrix", dim_, cap.max_dense_dim);
  }
}

QuantumState QuantumState::pure(const EnsembleShape& shape, CVector psi) {
  if (psi.size() != shape.dim()) {
    throw InvalidArgument("state vector length " + std::to_string(psi.size()) +
                          " does not match dimension " + std::to_string(shape.dim()));
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("pure state is not normalized");
  }
  return QuantumState(shape, std::move(psi));
}

QuantumState QuantumState::mixed(const EnsembleShape& shape, CMatrix rho) {
  shape.require_dense();
  if (rho.rows() != shape.dim() || rho.cols() != shape.dim()) {
    throw InvalidArgument("density matrix does not match the ensemble dimension");
  }
  require_density_matrix(rho);
  return QuantumState(shape, std::move(rho));
}

QuantumState QuantumState::mixed_trusted(const EnsembleShape& shape, CMatrix rho) {
  shape.require_dense();
  if (rho.rows() != shape.dim() || rho.cols() != shape.dim()) {
    throw InvalidArgument("density matrix does not match the ensemble dimension");
  }
  if (hermiticity_defect(rho) > 1e-10) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) {
    throw InvalidArgument("density matrix is not unit trace");
  }
  return QuantumState(shape, std::move(rho));
}

QuantumState QuantumState::mixture(const EnsembleShape& shape, Mixture components) {
  if (components.empty()) throw InvalidArgument("empty mixture");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw InvalidArgument("negative mixture weight");
    if (c.psi.size() != shape.dim()) {
      throw InvalidArgument("mixture component has the wrong dimension");
    }
    if (std::abs(c.psi.norm() - 1.0) > 1e-10) {
      throw InvalidArgument("mixture component is not normalized");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw InvalidArgument("mixture weights sum to " + std::to_string(total));
  }
  if (components.size() == 1) {
    return QuantumState(shape, std::move(components.front().psi));
  }
  return QuantumState(shape, std::move(components));
}

CMatrix QuantumState::density_matrix(const Capacity& cap) const {
  shape_.require_dense(cap);
  CMatrix rho = CMatrix::Zero(shape_.dim(), shape_.dim());
  visit([&](double w, const CVector& psi) { rho.noalias() += w * psi * psi.adjoint(); },
        [&](const CMatrix& m) { rho = m; });
  return rho;
}

}  // namespace spinsq
