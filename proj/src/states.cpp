#include "spinsq/states.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <shared_mutex>
#include <string>

#include "spinsq/errors.hpp"
#include "spinsq/kernels.hpp"

namespace spinsq {
namespace {

kernels::SiteLayout layout_of(const EnsembleShape& shape) {
  return kernels::SiteLayout::make(shape.particles(), shape.local_dim());
}

CMatrix symmetric_product(const SpinOperators& ops, Axis a, Axis b) {
  return 0.5 * (ops[a] * ops[b] + ops[b] * ops[a]);
}

constexpr std::array<std::pair<Axis, Axis>, 6> kLocalPairs{{
    {Axis::X, Axis::X},
    {Axis::Y, Axis::Y},
    {Axis::Z, Axis::Z},
    {Axis::X, Axis::Y},
    {Axis::X, Axis::Z},
    {Axis::Y, Axis::Z},
}};

// psi with site n carrying the digit that site perm[n] carried before.
CVector permute_sites(const kernels::SiteLayout& layout, const CVector& psi,
                      const std::vector<int>& perm) {
  CVector out(layout.dim);
  for (Index i = 0; i < layout.dim; ++i) {
    Index target = 0;
    for (int n = 0; n < layout.sites; ++n) {
      target += layout.digit(i, perm[n]) * layout.stride(n);
    }
    out(target) = psi(i);
  }
  return out;
}

CVector pair_singlet(int local_dim) {
  CVector s = CVector::Zero(local_dim * local_dim);
  for (int a = 0; a < local_dim; ++a) {
    s(a * local_dim + (local_dim - 1 - a)) = (a % 2 == 0) ? 1.0 : -1.0;
  }
  return s / std::sqrt(static_cast<double>(local_dim));
}

CVector pair_product_singlet(const EnsembleShape& shape) {
  if (shape.particles() % 2 != 0) {
    throw InvalidArgument("pair-product singlet needs an even number of particles");
  }
  std::vector<CVector> pairs(shape.particles() / 2, pair_singlet(shape.local_dim()));
  return kron(pairs);
}

QuantumState from_dense_trusted(const EnsembleShape& shape, CMatrix rho) {
  return QuantumState::mixed_trusted(shape, std::move(rho));
}

}  // namespace

int CollectiveOperators::local_index(Axis a, Axis b) {
  if (index_of(a) > index_of(b)) std::swap(a, b);
  for (int k = 0; k < 6; ++k) {
    if (kLocalPairs[k].first == a && kLocalPairs[k].second == b) return k;
  }
  return 0;
}

SparseOp embed_sum(const EnsembleShape& shape, const CMatrix& op) {
  const auto layout = layout_of(shape);
  const int d = shape.local_dim();
  if (op.rows() != d || op.cols() != d) {
    throw InvalidArgument("single-particle operator has the wrong dimension");
  }
  std::vector<Eigen::Triplet<Complex, std::int64_t>> triplets;
  triplets.reserve(static_cast<std::size_t>(layout.dim) * shape.particles());
  for (Index i = 0; i < layout.dim; ++i) {
    for (int n = 0; n < layout.sites; ++n) {
      const Index stride = layout.stride(n);
      const int a = layout.digit(i, n);
      for (int b = 0; b < d; ++b) {
        const Complex v = op(b, a);
        if (v == Complex(0.0, 0.0)) continue;
        triplets.emplace_back(i + (b - a) * stride, i, v);
      }
    }
  }
  SparseOp out(layout.dim, layout.dim);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

std::shared_ptr<const CollectiveOperators> collective_operators(const EnsembleShape& shape) {
  using Key = std::pair<int, int>;
  static std::shared_mutex mutex;
  static std::map<Key, std::shared_ptr<const CollectiveOperators>> cache;
  const Key key{shape.particles(), shape.spin().twice()};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto ops = std::make_shared<CollectiveOperators>(
      CollectiveOperators{shape, spin_operators(shape.spin()), {}, {}});
  for (Axis a : kAxes) ops->J[index_of(a)] = embed_sum(shape, ops->spin[a]);
  for (int k = 0; k < 6; ++k) {
    ops->local[k] =
        embed_sum(shape, symmetric_product(ops->spin, kLocalPairs[k].first, kLocalPairs[k].second));
  }
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(ops));
  return it->second;
}

SparseOp collective_operator(const EnsembleShape& shape, Axis l) {
  return (*collective_operators(shape))[l];
}

CMatrix total_spin_squared(const EnsembleShape& shape) {
  shape.require_dense();
  const auto ops = collective_operators(shape);
  SparseOp j2 = ops->J[0] * ops->J[0];
  j2 += SparseOp(ops->J[1] * ops->J[1]);
  j2 += SparseOp(ops->J[2] * ops->J[2]);
  return CMatrix(j2);
}

CMatrix bes_hamiltonian(const EnsembleShape& shape) { return total_spin_squared(shape); }

CMatrix h5_hamiltonian(const EnsembleShape& shape) {
  shape.require_dense();
  const auto ops = collective_operators(shape);
  const SparseOp& jx = (*ops)[Axis::X];
  const SparseOp& jz = (*ops)[Axis::Z];
  SparseOp h = jx * jx;
  h += SparseOp(0.25 * SparseOp(jz * jz));
  h += SparseOp(0.75 * jz);
  return CMatrix(h);
}

QuantumState product_state(const EnsembleShape& shape, std::span<const CVector> sites) {
  if (static_cast<int>(sites.size()) != shape.particles()) {
    throw InvalidArgument("product state needs one factor per particle");
  }
  for (const auto& s : sites) {
    if (s.size() != shape.local_dim()) {
      throw InvalidArgument("product factor has the wrong dimension");
    }
  }
  return QuantumState::pure(shape, kron(sites));
}

QuantumState coherent_ensemble(const EnsembleShape& shape, const Vec3& direction) {
  const CVector site = spin_coherent_state(shape.spin(), direction);
  std::vector<CVector> factors(shape.particles(), site);
  return QuantumState::pure(shape, kron(factors));
}

QuantumState dicke_state(const EnsembleShape& shape, HalfInt lambda_z) {
  const int twice_total = shape.particles() * shape.spin().twice();
  const int twice_lambda = lambda_z.twice();
  if (std::abs(twice_lambda) > twice_total || (twice_total - twice_lambda) % 2 != 0) {
    throw InvalidArgument("Dicke eigenvalue " + lambda_z.to_string() +
                          " is not allowed for total spin " +
                          HalfInt::from_twice(twice_total).to_string());
  }
  const auto ops = collective_operators(shape);
  const SparseOp lower = embed_sum(shape, ops->spin.lowering());
  CVector psi = CVector::Zero(shape.dim());
  psi(0) = 1.0;
  for (int k = 0; k < (twice_total - twice_lambda) / 2; ++k) {
    psi = kernels::sparse_times_vector(lower, psi);
    psi /= psi.norm();
  }
  return QuantumState::pure(shape, std::move(psi));
}

SingletVariant parse_singlet_variant(std::string_view name) {
  if (name == "pair_product") return SingletVariant::PairProduct;
  if (name == "permutation_invariant") return SingletVariant::PermutationInvariant;
  if (name == "spin1_pair") return SingletVariant::Spin1Pair;
  if (name == "projector") return SingletVariant::Projector;
  throw InvalidArgument("unknown singlet variant '" + std::string(name) + "'");
}

std::string_view to_string(SingletVariant v) {
  switch (v) {
    case SingletVariant::PairProduct:
      return "pair_product";
    case SingletVariant::PermutationInvariant:
      return "permutation_invariant";
    case SingletVariant::Spin1Pair:
      return "spin1_pair";
    case SingletVariant::Projector:
      return "projector";
  }
  return "?";
}

std::vector<CVector> singlet_basis(const EnsembleShape& shape) {
  const int twice_total = shape.particles() * shape.spin().twice();
  if (twice_total % 2 != 0) return {};
  const auto layout = layout_of(shape);
  const int target = twice_total / 2;  // digit sum of the M = 0 sector
  auto digit_sum = [&](Index i) {
    int s = 0;
    for (int n = 0; n < layout.sites; ++n) s += layout.digit(i, n);
    return s;
  };
  std::vector<Index> sector, upper;
  std::vector<int> upper_pos(static_cast<std::size_t>(layout.dim), -1);
  for (Index i = 0; i < layout.dim; ++i) {
    const int s = digit_sum(i);
    if (s == target) {
      sector.push_back(i);
    } else if (s == target - 1) {
      upper_pos[i] = static_cast<int>(upper.size());
      upper.push_back(i);
    }
  }
  const Index cols = static_cast<Index>(sector.size());
  if (cols > default_capacity().max_dense_dim) {
    throw CapacityError("singlet sector", cols, default_capacity().max_dense_dim);
  }
  // J_+ restricted to the M = 0 sector; the singlets are its kernel.
  const CMatrix raise = spin_operators(shape.spin()).raising();
  CMatrix a = CMatrix::Zero(static_cast<Index>(upper.size()), cols);
  for (Index c = 0; c < cols; ++c) {
    const Index i = sector[c];
    for (int n = 0; n < layout.sites; ++n) {
      const int digit = layout.digit(i, n);
      if (digit == 0) continue;
      const Index row = i - layout.stride(n);
      a(upper_pos[row], c) += raise(digit - 1, digit);
    }
  }
  const HermitianEigen eig = hermitian_eigen(a.adjoint() * a);
  std::vector<CVector> basis;
  for (Index k = 0; k < cols; ++k) {
    if (eig.values(k) > 1e-8) break;
    CVector v = CVector::Zero(layout.dim);
    for (Index c = 0; c < cols; ++c) v(sector[c]) = eig.vectors(c, k);
    basis.push_back(v / v.norm());
  }
  return basis;
}

QuantumState singlet_state(const EnsembleShape& shape, SingletVariant variant) {
  switch (variant) {
    case SingletVariant::PairProduct:
      return QuantumState::pure(shape, pair_product_singlet(shape));
    case SingletVariant::Spin1Pair: {
      if (shape.particles() != 2 || shape.spin().twice() != 2) {
        throw InvalidArgument("spin1_pair singlet needs N = 2 and j = 1");
      }
      CVector psi = CVector::Zero(9);
      psi(2) = 1.0;
      psi(4) = -1.0;
      psi(6) = 1.0;
      return QuantumState::pure(shape, psi / std::sqrt(3.0));
    }
    case SingletVariant::PermutationInvariant: {
      if (shape.particles() > 6) return singlet_state(shape, SingletVariant::Projector);
      const CVector base = pair_product_singlet(shape);
      const auto layout = layout_of(shape);
      std::vector<int> perm(shape.particles());
      std::iota(perm.begin(), perm.end(), 0);
      QuantumState::Mixture parts;
      do {
        parts.push_back({1.0, permute_sites(layout, base, perm)});
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (auto& p : parts) p.weight = 1.0 / static_cast<double>(parts.size());
      return QuantumState::mixture(shape, std::move(parts));
    }
    case SingletVariant::Projector: {
      auto basis = singlet_basis(shape);
      if (basis.empty()) {
        throw InvalidArgument("no singlet exists for N = " + std::to_string(shape.particles()) +
                              ", j = " + shape.spin().to_string());
      }
      QuantumState::Mixture parts;
      const double w = 1.0 / static_cast<double>(basis.size());
      for (auto& v : basis) parts.push_back({w, std::move(v)});
      return QuantumState::mixture(shape, std::move(parts));
    }
  }
  throw InvalidArgument("unknown singlet variant");
}

QuantumState completely_mixed(const EnsembleShape& shape) {
  shape.require_dense();
  const Index d = shape.dim();
  return from_dense_trusted(shape, CMatrix::Identity(d, d) / static_cast<double>(d));
}

ThermalFamily::ThermalFamily(const EnsembleShape& shape, const CMatrix& hamiltonian)
    : shape_(shape) {
  shape.require_dense();
  if (hamiltonian.rows() != shape.dim() || hamiltonian.cols() != shape.dim()) {
    throw InvalidArgument("Hamiltonian has the wrong dimension");
  }
  if (hermiticity_defect(hamiltonian) > 1e-9) {
    throw InvalidArgument("Hamiltonian is not Hermitian");
  }
  eig_ = hermitian_eigen(hamiltonian);
}

QuantumState ThermalFamily::at(double temperature) const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InvalidArgument("temperature must be positive and finite");
  }
  const double e0 = eig_.values(0);
  RVector w = (-(eig_.values.array() - e0) / temperature).exp();
  w /= w.sum();
  CMatrix rho = eig_.vectors * w.cast<Complex>().asDiagonal() * eig_.vectors.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return from_dense_trusted(shape_, std::move(rho));
}

QuantumState thermal_state(const EnsembleShape& shape, const CMatrix& hamiltonian,
                           double temperature) {
  return ThermalFamily(shape, hamiltonian).at(temperature);
}

QuantumState ground_state(const EnsembleShape& shape, const CMatrix& hamiltonian, double tol) {
  shape.require_dense();
  if (hamiltonian.rows() != shape.dim() || hamiltonian.cols() != shape.dim()) {
    throw InvalidArgument("Hamiltonian has the wrong dimension");
  }
  const HermitianEigen eig = hermitian_eigen(hamiltonian);
  const double e0 = eig.values(0);
  const double cut = tol * std::max(1.0, std::abs(e0));
  QuantumState::Mixture parts;
  for (Index k = 0; k < eig.values.size() && eig.values(k) - e0 <= cut; ++k) {
    parts.push_back({1.0, eig.vectors.col(k)});
  }
  for (auto& p : parts) p.weight = 1.0 / static_cast<double>(parts.size());
  return QuantumState::mixture(shape, std::move(parts));
}

QuantumState mix_with_white_noise(const QuantumState& state, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("noise fraction must lie in [0, 1]");
  if (p == 0.0) return state;
  const auto& shape = state.shape();
  shape.require_dense();
  const Index d = shape.dim();
  CMatrix rho = (1.0 - p) * state.density_matrix();
  rho.diagonal().array() += p / static_cast<double>(d);
  return from_dense_trusted(shape, std::move(rho));
}

QuantumState apply_product_unitary(const QuantumState& state, const CMatrix& u) {
  const auto& shape = state.shape();
  const auto layout = layout_of(shape);
  if (u.rows() != shape.local_dim() || u.cols() != shape.local_dim()) {
    throw InvalidArgument("single-particle unitary has the wrong dimension");
  }
  auto rotate = [&](CVector psi) {
    for (int n = 0; n < layout.sites; ++n) kernels::apply_site(layout, n, u, psi);
    return psi;
  };
  if (state.is_pure()) return QuantumState::pure(shape, rotate(state.vector()));
  if (state.is_mixture()) {
    QuantumState::Mixture parts;
    for (const auto& c : state.components()) parts.push_back({c.weight, rotate(c.psi)});
    return QuantumState::mixture(shape, std::move(parts));
  }
  CMatrix rho = state.matrix();
  const CMatrix ud = u.adjoint();
  for (int n = 0; n < layout.sites; ++n) {
    kernels::apply_site_left(layout, n, u, rho);
    kernels::apply_site_right(layout, n, ud, rho);
  }
  return from_dense_trusted(shape, std::move(rho));
}

QuantumState rotated_average(const QuantumState& state, const Vec3& axis, int steps) {
  if (steps < 2) throw InvalidArgument("rotated average needs at least 2 steps");
  if (!(axis.norm() > 0.0)) throw InvalidArgument("rotation axis must be non-zero");
  const auto& shape = state.shape();
  const SpinOperators ops = spin_operators(shape.spin());
  const Vec3 n = axis.normalized();
  std::vector<CMatrix> unitaries;
  for (int k = 0; k < steps; ++k) {
    unitaries.push_back(rotation_unitary(ops, n, 2.0 * std::numbers::pi * k / steps));
  }
  if (state.is_dense()) {
    CMatrix acc = CMatrix::Zero(shape.dim(), shape.dim());
    for (const auto& u : unitaries) acc += apply_product_unitary(state, u).matrix();
    acc /= static_cast<double>(steps);
    return from_dense_trusted(shape, std::move(acc));
  }
  QuantumState::Mixture parts;
  for (const auto& u : unitaries) {
    const QuantumState r = apply_product_unitary(state, u);
    r.visit([&](double w, const CVector& psi) { parts.push_back({w / steps, psi}); },
            [](const CMatrix&) {});
  }
  return QuantumState::mixture(shape, std::move(parts));
}

QuantumState qutrit_alpha_state(int particles, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  const auto shape = EnsembleShape::make(particles, HalfInt::from_int(1));
  CVector site = CVector::Zero(3);
  site(0) = std::sqrt(alpha);
  site(1) = std::sqrt(1.0 - alpha);
  std::vector<CVector> factors(particles, site);
  return product_state(shape, factors);
}

ExtremalSpec ExtremalSpec::make(const EnsembleShape& shape, const Vec3& mean) {
  const double total = shape.particles() * shape.j();
  if (mean.norm() > total * (1.0 + 1e-12)) {
    throw InvalidArgument("mean spin exceeds Nj");
  }
  ExtremalSpec s{shape};
  s.mean = mean;
  const int n = shape.particles();
  s.kappa = static_cast<double>(n - 1) / n;
  for (Axis l : kAxes) {
    const int i = index_of(l);
    const auto [a, b] = other_axes(l);
    const double ja = mean(index_of(a)) / total;
    const double jb = mean(index_of(b)) / total;
    const double c = std::sqrt(std::max(0.0, 1.0 - ja * ja - jb * jb));
    s.c(i) = c;
    double p = 0.5;
    if (c > 1e-12) p = 0.5 * (1.0 + mean(i) / (total * c));
    p = std::clamp(p, 0.0, 1.0);
    s.p(i) = p;
    double m = n * p;
    if (std::abs(m - std::round(m)) < 1e-9) m = std::round(m);
    s.count(i) = m;
    s.epsilon(i) = m - std::floor(m);
  }
  return s;
}

bool ExtremalSpec::integer_count(Axis l) const { return epsilon(index_of(l)) == 0.0; }

ExtremalChoice ExtremalChoice::parse(std::string_view text) {
  const auto us = text.rfind('_');
  if (us == std::string_view::npos) {
    throw InvalidArgument("extremal choice '" + std::string(text) + "' must look like A_x");
  }
  const auto kind = text.substr(0, us);
  const Axis axis = parse_axis(text.substr(us + 1));
  if (kind == "A") return {ExtremalKind::A, axis};
  if (kind == "B") return {ExtremalKind::B, axis};
  if (kind == "Bprime" || kind == "B'") return {ExtremalKind::BPrime, axis};
  throw InvalidArgument("unknown extremal kind '" + std::string(kind) + "'");
}

QuantumState extremal_state(const ExtremalSpec& spec, ExtremalKind kind, Axis l) {
  const auto& shape = spec.shape;
  const int n = shape.particles();
  const int i = index_of(l);
  const double total = n * shape.j();
  Vec3 plus = Vec3::Zero();
  for (Axis a : other_axes(l)) plus(index_of(a)) = spec.mean(index_of(a)) / total;
  Vec3 minus = plus;
  plus(i) = spec.c(i);
  minus(i) = -spec.c(i);
  plus.normalize();
  minus.normalize();
  const CVector up = spin_coherent_state(shape.spin(), plus);
  const CVector down = spin_coherent_state(shape.spin(), minus);
  auto split = [&](int m) {
    std::vector<CVector> f(n, down);
    for (int k = 0; k < m; ++k) f[k] = up;
    return kron(f);
  };
  switch (kind) {
    case ExtremalKind::A: {
      QuantumState::Mixture parts;
      const double p = spec.p(i);
      if (p > 0.0) parts.push_back({p, split(n)});
      if (p < 1.0) parts.push_back({1.0 - p, split(0)});
      return QuantumState::mixture(shape, std::move(parts));
    }
    case ExtremalKind::B: {
      if (!spec.integer_count(l)) {
        throw InvalidArgument(std::string("B_") + axis_name(l) +
                              " needs an integer N p; request Bprime instead");
      }
      return QuantumState::pure(shape, split(static_cast<int>(spec.count(i))));
    }
    case ExtremalKind::BPrime: {
      const int m = static_cast<int>(std::floor(spec.count(i)));
      const double eps = spec.epsilon(i);
      QuantumState::Mixture parts;
      parts.push_back({1.0 - eps, split(m)});
      if (eps > 0.0) parts.push_back({eps, split(m + 1)});
      return QuantumState::mixture(shape, std::move(parts));
    }
  }
  throw InvalidArgument("unknown extremal kind");
}

}  // namespace spinsq
