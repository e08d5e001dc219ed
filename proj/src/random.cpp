#include "spinsq/random.hpp"

#include <cmath>

#include "spinsq/errors.hpp"

namespace spinsq::random {
namespace {

std::vector<double> random_weights(int n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = expo(rng));
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

CVector random_vector(Index dim, Rng& rng) {
  std::normal_distribution<double> g;
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

CMatrix random_hermitian(Index dim, Rng& rng) {
  std::normal_distribution<double> g;
  CMatrix a(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index k = 0; k < dim; ++k) a(i, k) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

CMatrix random_density_matrix(Index dim, int rank, Rng& rng) {
  if (rank < 1) throw InvalidArgument("rank must be positive");
  const auto w = random_weights(rank, rng);
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (int r = 0; r < rank; ++r) {
    const CVector v = random_vector(dim, rng);
    rho += w[r] * v * v.adjoint();
  }
  return rho;
}

Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> g;
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Frame random_frame(Rng& rng) {
  const Vec3 a = random_unit(rng);
  Vec3 b = random_unit(rng);
  b = (b - a.dot(b) * a).normalized();
  return Frame::from_axes(a, b, a.cross(b));
}

QuantumState random_pure_state(const EnsembleShape& shape, Rng& rng) {
  return QuantumState::pure(shape, random_vector(shape.dim(), rng));
}

QuantumState random_mixed_state(const EnsembleShape& shape, int rank, Rng& rng) {
  const auto w = random_weights(rank, rng);
  QuantumState::Mixture parts;
  for (int r = 0; r < rank; ++r) parts.push_back({w[r], random_vector(shape.dim(), rng)});
  return QuantumState::mixture(shape, std::move(parts));
}

namespace {
CVector random_product_vector(const EnsembleShape& shape, Rng& rng) {
  std::vector<CVector> sites;
  for (int n = 0; n < shape.particles(); ++n)
    sites.push_back(random_vector(shape.local_dim(), rng));
  return kron(sites);
}
}  // namespace

QuantumState random_product_state(const EnsembleShape& shape, Rng& rng) {
  return QuantumState::pure(shape, random_product_vector(shape, rng));
}

QuantumState random_separable_state(const EnsembleShape& shape, int terms, Rng& rng) {
  const auto w = random_weights(terms, rng);
  QuantumState::Mixture parts;
  for (int t = 0; t < terms; ++t) parts.push_back({w[t], random_product_vector(shape, rng)});
  return QuantumState::mixture(shape, std::move(parts));
}

}  // namespace spinsq::random
