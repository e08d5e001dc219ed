#include <string>

#include "spinsq/errors.hpp"
#include "spinsq/kernels.hpp"

namespace spinsq::kernels {

SiteLayout SiteLayout::make(int sites, int local_dim) {
  if (sites < 1 || local_dim < 2) throw InvalidArgument("invalid site layout");
  SiteLayout l;
  l.sites = sites;
  l.local_dim = local_dim;
  l.dim = 1;
  for (int s = 0; s < sites; ++s) l.dim *= local_dim;
  return l;
}

Index SiteLayout::stride(int site) const {
  Index s = 1;
  for (int k = site + 1; k < sites; ++k) s *= local_dim;
  return s;
}

namespace serial {

void apply_site(const SiteLayout& layout, int site, const CMatrix& op, CVector& psi) {
  const Index st = layout.stride(site);
  const int d = layout.local_dim;
  const Index block = st * d;
  CVector tmp(d);
  for (Index base = 0; base < layout.dim; base += block) {
    for (Index low = 0; low < st; ++low) {
      for (int a = 0; a < d; ++a) tmp(a) = psi(base + low + a * st);
      for (int a = 0; a < d; ++a) {
        Complex acc = 0.0;
        for (int b = 0; b < d; ++b) acc += op(a, b) * tmp(b);
        psi(base + low + a * st) = acc;
      }
    }
  }
}

void apply_site_left(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho) {
  for (Index c = 0; c < rho.cols(); ++c) {
    CVector col = rho.col(c);
    serial::apply_site(layout, site, op, col);
    rho.col(c) = col;
  }
}

void apply_site_right(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho) {
  // (rho op)^T = op^T rho^T, so act with op^T on each row.
  const CMatrix opt = op.transpose();
  for (Index r = 0; r < rho.rows(); ++r) {
    CVector row = rho.row(r).transpose();
    serial::apply_site(layout, site, opt, row);
    rho.row(r) = row.transpose();
  }
}

CVector sparse_times_vector(const SparseOp& a, const CVector& psi) {
  CVector out = CVector::Zero(a.rows());
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseOp::InnerIterator it(a, i); it; ++it) out(i) += it.value() * psi(it.col());
  }
  return out;
}

CMatrix sparse_times_dense(const SparseOp& a, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(a.rows(), rho.cols());
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseOp::InnerIterator it(a, i); it; ++it) {
      out.row(i) += it.value() * rho.row(it.col());
    }
  }
  return out;
}

Complex trace_product(const SparseOp& a, const CMatrix& rho) {
  Complex acc = 0.0;
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseOp::InnerIterator it(a, i); it; ++it) acc += it.value() * rho(it.col(), i);
  }
  return acc;
}

Complex expectation(const SparseOp& a, const CVector& psi) {
  Complex acc = 0.0;
  for (Index i = 0; i < a.outerSize(); ++i) {
    Complex row = 0.0;
    for (SparseOp::InnerIterator it(a, i); it; ++it) row += it.value() * psi(it.col());
    acc += std::conj(psi(i)) * row;
  }
  return acc;
}

CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CVector& psi) {
  if (m == n) throw InvalidArgument("reduced_pair needs two distinct sites");
  const int d = layout.local_dim;
  const Index sm = layout.stride(m);
  const Index sn = layout.stride(n);
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < layout.dim; ++i) {
    const int a = layout.digit(i, m);
    const int b = layout.digit(i, n);
    const Index base = i - a * sm - b * sn;
    for (int a2 = 0; a2 < d; ++a2) {
      for (int b2 = 0; b2 < d; ++b2) {
        out(a * d + b, a2 * d + b2) += psi(i) * std::conj(psi(base + a2 * sm + b2 * sn));
      }
    }
  }
  return out;
}

CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CMatrix& rho) {
  if (m == n) throw InvalidArgument("reduced_pair needs two distinct sites");
  const int d = layout.local_dim;
  const Index sm = layout.stride(m);
  const Index sn = layout.stride(n);
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < layout.dim; ++i) {
    const int a = layout.digit(i, m);
    const int b = layout.digit(i, n);
    const Index base = i - a * sm - b * sn;
    for (int a2 = 0; a2 < d; ++a2) {
      for (int b2 = 0; b2 < d; ++b2) {
        out(a * d + b, a2 * d + b2) += rho(i, base + a2 * sm + b2 * sn);
      }
    }
  }
  return out;
}

CMatrix reduced_site(const SiteLayout& layout, int n, const CVector& psi) {
  const int d = layout.local_dim;
  const Index sn = layout.stride(n);
  CMatrix out = CMatrix::Zero(d, d);
  for (Index i = 0; i < layout.dim; ++i) {
    const int a = layout.digit(i, n);
    const Index base = i - a * sn;
    for (int a2 = 0; a2 < d; ++a2) out(a, a2) += psi(i) * std::conj(psi(base + a2 * sn));
  }
  return out;
}

CMatrix reduced_site(const SiteLayout& layout, int n, const CMatrix& rho) {
  const int d = layout.local_dim;
  const Index sn = layout.stride(n);
  CMatrix out = CMatrix::Zero(d, d);
  for (Index i = 0; i < layout.dim; ++i) {
    const int a = layout.digit(i, n);
    const Index base = i - a * sn;
    for (int a2 = 0; a2 < d; ++a2) out(a, a2) += rho(i, base + a2 * sn);
  }
  return out;
}

CMatrix partial_transpose(const SiteLayout& layout, const CMatrix& rho, std::uint64_t mask) {
  CMatrix out(layout.dim, layout.dim);
  for (Index i = 0; i < layout.dim; ++i) {
    for (Index k = 0; k < layout.dim; ++k) {
      Index ii = i;
      Index kk = k;
      for (int s = 0; s < layout.sites; ++s) {
        if (!((mask >> s) & 1u)) continue;
        const Index st = layout.stride(s);
        const int a = layout.digit(i, s);
        const int b = layout.digit(k, s);
        ii += (b - a) * st;
        kk += (a - b) * st;
      }
      out(i, k) = rho(ii, kk);
    }
  }
  return out;
}

}  // namespace serial
}  // namespace spinsq::kernels
