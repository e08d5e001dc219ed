#pragma once

#include <random>

#include "spinsq/ensemble.hpp"
#include "spinsq/linalg.hpp"

namespace spinsq::random {

using Rng = std::mt19937_64;

/// Haar-random unit vector.
CVector random_vector(Index dim, Rng& rng);
/// Gaussian entries, symmetrized.
CMatrix random_hermitian(Index dim, Rng& rng);
/// Mixture of `rank` Haar-random pure states with random weights.
CMatrix random_density_matrix(Index dim, int rank, Rng& rng);
Vec3 random_unit(Rng& rng);
/// Uniformly random right-handed orthonormal frame.
Frame random_frame(Rng& rng);

QuantumState random_pure_state(const EnsembleShape& shape, Rng& rng);
/// Mixture of `rank` random pure states.
QuantumState random_mixed_state(const EnsembleShape& shape, int rank, Rng& rng);
/// Product of independent Haar-random single-particle states.
QuantumState random_product_state(const EnsembleShape& shape, Rng& rng);
/// Random mixture of `terms` random product states.
QuantumState random_separable_state(const EnsembleShape& shape, int terms, Rng& rng);

}  // namespace spinsq::random
