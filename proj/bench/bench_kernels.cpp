#include <benchmark/benchmark.h>

#include <random>

#include "spinsq/kernels.hpp"
#include "spinsq/types.hpp"

using namespace spinsq;

namespace {

// Qutrit registers; range(0) is the number of sites.
kernels::SiteLayout layout_for(const benchmark::State& state) {
  return kernels::SiteLayout::make(static_cast<int>(state.range(0)), 3);
}

CVector random_vector(Index dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
  return v.normalized();
}

CMatrix random_density(Index dim) {
  const CVector v = random_vector(dim);
  CMatrix rho = v * v.adjoint();
  rho.diagonal().array() += 1.0 / static_cast<double>(dim);
  return rho / rho.trace();
}

SparseOp random_sparse(Index dim) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Index> col(0, dim - 1);
  std::vector<Eigen::Triplet<Complex, Index>> t;
  for (Index i = 0; i < dim; ++i)
    for (int k = 0; k < 8; ++k) t.emplace_back(i, col(rng), Complex(1.0, 0.5));
  SparseOp a(dim, dim);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

CMatrix local_op() { return CMatrix::Random(3, 3); }

template <bool Parallel>
void BM_ApplySite(benchmark::State& state) {
  const auto layout = layout_for(state);
  const CMatrix op = local_op();
  CVector psi = random_vector(layout.dim);
  for (auto _ : state) {
    for (int n = 0; n < layout.sites; ++n) {
      if constexpr (Parallel)
        kernels::apply_site(layout, n, op, psi);
      else
        kernels::serial::apply_site(layout, n, op, psi);
    }
    psi.normalize();
    benchmark::DoNotOptimize(psi.data());
  }
}

template <bool Parallel>
void BM_ApplySiteDensity(benchmark::State& state) {
  const auto layout = layout_for(state);
  const CMatrix op = local_op();
  const CMatrix rho0 = random_density(layout.dim);
  for (auto _ : state) {
    CMatrix rho = rho0;
    if constexpr (Parallel) {
      kernels::apply_site_left(layout, 0, op, rho);
      kernels::apply_site_right(layout, 0, op.adjoint(), rho);
    } else {
      kernels::serial::apply_site_left(layout, 0, op, rho);
      kernels::serial::apply_site_right(layout, 0, op.adjoint(), rho);
    }
    benchmark::DoNotOptimize(rho.data());
  }
}

template <bool Parallel>
void BM_SparseTimesVector(benchmark::State& state) {
  const auto layout = layout_for(state);
  const SparseOp a = random_sparse(layout.dim);
  const CVector psi = random_vector(layout.dim);
  for (auto _ : state) {
    CVector out = Parallel ? kernels::sparse_times_vector(a, psi)
                           : kernels::serial::sparse_times_vector(a, psi);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_TraceProduct(benchmark::State& state) {
  const auto layout = layout_for(state);
  const SparseOp a = random_sparse(layout.dim);
  const CMatrix rho = random_density(layout.dim);
  for (auto _ : state) {
    Complex t = Parallel ? kernels::trace_product(a, rho) : kernels::serial::trace_product(a, rho);
    benchmark::DoNotOptimize(t);
  }
}

template <bool Parallel>
void BM_ReducedPair(benchmark::State& state) {
  const auto layout = layout_for(state);
  const CVector psi = random_vector(layout.dim);
  for (auto _ : state) {
    CMatrix r = Parallel ? kernels::reduced_pair(layout, 0, layout.sites - 1, psi)
                         : kernels::serial::reduced_pair(layout, 0, layout.sites - 1, psi);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_PartialTranspose(benchmark::State& state) {
  const auto layout = layout_for(state);
  const CMatrix rho = random_density(layout.dim);
  for (auto _ : state) {
    CMatrix r = Parallel ? kernels::partial_transpose(layout, rho, 1)
                         : kernels::serial::partial_transpose(layout, rho, 1);
    benchmark::DoNotOptimize(r.data());
  }
}

}  // namespace

BENCHMARK(BM_ApplySite<false>)->Name("apply_site/serial")->DenseRange(6, 10, 2);
BENCHMARK(BM_ApplySite<true>)->Name("apply_site/parallel")->DenseRange(6, 10, 2)->UseRealTime();
BENCHMARK(BM_ApplySiteDensity<false>)->Name("apply_site_density/serial")->DenseRange(4, 6, 1);
BENCHMARK(BM_ApplySiteDensity<true>)
    ->Name("apply_site_density/parallel")
    ->DenseRange(4, 6, 1)
    ->UseRealTime();
BENCHMARK(BM_SparseTimesVector<false>)->Name("sparse_times_vector/serial")->DenseRange(6, 10, 2);
BENCHMARK(BM_SparseTimesVector<true>)
    ->Name("sparse_times_vector/parallel")
    ->DenseRange(6, 10, 2)
    ->UseRealTime();
BENCHMARK(BM_TraceProduct<false>)->Name("trace_product/serial")->DenseRange(4, 6, 1);
BENCHMARK(BM_TraceProduct<true>)
    ->Name("trace_product/parallel")
    ->DenseRange(4, 6, 1)
    ->UseRealTime();
BENCHMARK(BM_ReducedPair<false>)->Name("reduced_pair/serial")->DenseRange(6, 10, 2);
BENCHMARK(BM_ReducedPair<true>)->Name("reduced_pair/parallel")->DenseRange(6, 10, 2)->UseRealTime();
BENCHMARK(BM_PartialTranspose<false>)->Name("partial_transpose/serial")->DenseRange(4, 6, 1);
BENCHMARK(BM_PartialTranspose<true>)
    ->Name("partial_transpose/parallel")
    ->DenseRange(4, 6, 1)
    ->UseRealTime();

BENCHMARK_MAIN();
