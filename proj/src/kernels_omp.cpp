#include <vector>

#include "spinsq/errors.hpp"
#include "spinsq/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spinsq::kernels {

namespace {

// Applies op to the d-dimensional fibre starting at index `base` with
// spacing st, of the vector stored at data[0], data[inc], data[2 inc], ...
inline void apply_fibre(const CMatrix& op, int d, Index st, Index base, Complex* data, Index inc,
                        Complex* tmp) {
  for (int b = 0; b < d; ++b) tmp[b] = data[(base + b * st) * inc];
  for (int a = 0; a < d; ++a) {
    Complex acc = 0.0;
    for (int b = 0; b < d; ++b) acc += op(a, b) * tmp[b];
    data[(base + a * st) * inc] = acc;
  }
}

// Visits every fibre of one column or row serially.
inline void apply_all_fibres(const CMatrix& op, int d, Index st, Index dim, Complex* data,
                             Index inc) {
  const Index block = st * d;
  Complex tmp[64];
  for (Index hi = 0; hi < dim; hi += block)
    for (Index low = 0; low < st; ++low) apply_fibre(op, d, st, hi + low, data, inc, tmp);
}

void check_local_dim(const SiteLayout& layout, const CMatrix& op) {
  if (op.rows() != layout.local_dim || op.cols() != layout.local_dim) {
    throw InvalidArgument("site operator does not match the local dimension");
  }
  if (layout.local_dim > 64) throw InvalidArgument("local dimension above 64");
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void apply_site(const SiteLayout& layout, int site, const CMatrix& op, CVector& psi) {
  check_local_dim(layout, op);
  const int d = layout.local_dim;
  const Index st = layout.stride(site);
  const Index blocks = layout.dim / (st * d);
  Complex* data = psi.data();
#pragma omp parallel
  {
    Complex tmp[64];
#pragma omp for collapse(2) schedule(static)
    for (Index hi = 0; hi < blocks; ++hi) {
      for (Index low = 0; low < st; ++low) {
        apply_fibre(op, d, st, hi * st * d + low, data, 1, tmp);
      }
    }
  }
}

void apply_site_left(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho) {
  check_local_dim(layout, op);
  const Index st = layout.stride(site);
  const Index cols = rho.cols();
  const Index ld = rho.rows();
  Complex* data = rho.data();
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < cols; ++c) {
    apply_all_fibres(op, layout.local_dim, st, layout.dim, data + c * ld, 1);
  }
}

void apply_site_right(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho) {
  check_local_dim(layout, op);
  const CMatrix opt = op.transpose();
  const Index st = layout.stride(site);
  const Index rows = rho.rows();
  Complex* data = rho.data();
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < rows; ++r) {
    apply_all_fibres(opt, layout.local_dim, st, layout.dim, data + r, rows);
  }
}

CVector sparse_times_vector(const SparseOp& a, const CVector& psi) {
  CVector out(a.rows());
  const Index rows = a.outerSize();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) {
    Complex acc = 0.0;
    for (SparseOp::InnerIterator it(a, i); it; ++it) acc += it.value() * psi(it.col());
    out(i) = acc;
  }
  return out;
}

CMatrix sparse_times_dense(const SparseOp& a, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(a.rows(), rho.cols());
  const Index cols = rho.cols();
  const Index rows = a.outerSize();
  // Column-parallel: each thread owns whole output columns.
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < cols; ++c) {
    for (Index i = 0; i < rows; ++i) {
      Complex acc = 0.0;
      for (SparseOp::InnerIterator it(a, i); it; ++it) acc += it.value() * rho(it.col(), c);
      out(i, c) = acc;
    }
  }
  return out;
}

Complex trace_product(const SparseOp& a, const CMatrix& rho) {
  double re = 0.0;
  double im = 0.0;
  const Index rows = a.outerSize();
#pragma omp parallel for reduction(+ : re, im) schedule(static)
  for (Index i = 0; i < rows; ++i) {
    Complex acc = 0.0;
    for (SparseOp::InnerIterator it(a, i); it; ++it) acc += it.value() * rho(it.col(), i);
    re += acc.real();
    im += acc.imag();
  }
  return {re, im};
}

Complex expectation(const SparseOp& a, const CVector& psi) {
  double re = 0.0;
  double im = 0.0;
  const Index rows = a.outerSize();
#pragma omp parallel for reduction(+ : re, im) schedule(static)
  for (Index i = 0; i < rows; ++i) {
    Complex row = 0.0;
    for (SparseOp::InnerIterator it(a, i); it; ++it) row += it.value() * psi(it.col());
    const Complex t = std::conj(psi(i)) * row;
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

namespace {

// Shared driver for the partial-trace kernels: `entry(i, j)` is rho_{ij}
// (or psi_i conj(psi_j)), and the kept sites are listed in `kept`.
template <typename Entry>
CMatrix reduce_sites(const SiteLayout& layout, const std::vector<int>& kept, Entry entry) {
  const int d = layout.local_dim;
  const int k = static_cast<int>(kept.size());
  Index small = 1;
  for (int s = 0; s < k; ++s) small *= d;
  std::vector<Index> strides(k);
  for (int s = 0; s < k; ++s) strides[s] = layout.stride(kept[s]);

  CMatrix out = CMatrix::Zero(small, small);
#pragma omp parallel
  {
    CMatrix local = CMatrix::Zero(small, small);
    std::vector<int> digits(k);
#pragma omp for schedule(static)
    for (Index i = 0; i < layout.dim; ++i) {
      Index row = 0;
      Index base = i;
      for (int s = 0; s < k; ++s) {
        digits[s] = static_cast<int>((i / strides[s]) % d);
        row = row * d + digits[s];
        base -= digits[s] * strides[s];
      }
      for (Index col = 0; col < small; ++col) {
        Index j = base;
        Index rem = col;
        for (int s = k - 1; s >= 0; --s) {
          j += (rem % d) * strides[s];
          rem /= d;
        }
        local(row, col) += entry(i, j);
      }
    }
#pragma omp critical(spinsq_reduce_sites)
    out += local;
  }
  return out;
}

}  // namespace

CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CVector& psi) {
  if (m == n) throw InvalidArgument("reduced_pair needs two distinct sites");
  return reduce_sites(layout, {m, n}, [&](Index i, Index j) { return psi(i) * std::conj(psi(j)); });
}

CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CMatrix& rho) {
  if (m == n) throw InvalidArgument("reduced_pair needs two distinct sites");
  return reduce_sites(layout, {m, n}, [&](Index i, Index j) { return rho(i, j); });
}

CMatrix reduced_site(const SiteLayout& layout, int n, const CVector& psi) {
  return reduce_sites(layout, {n}, [&](Index i, Index j) { return psi(i) * std::conj(psi(j)); });
}

CMatrix reduced_site(const SiteLayout& layout, int n, const CMatrix& rho) {
  return reduce_sites(layout, {n}, [&](Index i, Index j) { return rho(i, j); });
}

CMatrix partial_transpose(const SiteLayout& layout, const CMatrix& rho, std::uint64_t mask) {
  const Index dim = layout.dim;
  std::vector<Index> strides;
  for (int s = 0; s < layout.sites; ++s) {
    if ((mask >> s) & 1u) strides.push_back(layout.stride(s));
  }
  const int d = layout.local_dim;
  CMatrix out(dim, dim);
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < dim; ++k) {
    for (Index i = 0; i < dim; ++i) {
      Index ii = i;
      Index kk = k;
      for (const Index st : strides) {
        const Index a = (i / st) % d;
        const Index b = (k / st) % d;
        ii += (b - a) * st;
        kk += (a - b) * st;
      }
      out(i, k) = rho(ii, kk);
    }
  }
  return out;
}

}  // namespace spinsq::kernels
