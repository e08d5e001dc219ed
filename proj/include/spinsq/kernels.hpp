#pragma once

// Data-parallel kernels over tensor-product Hilbert spaces. Every kernel has
// a straightforward serial reference in kernels::serial and an OpenMP
// version in kernels; the unit tests compare the two and bench/ times them.
//
// Basis layout: site 0 is the most significant digit of the basis index, so
// the index of |a_0 a_1 ... a_{N-1}> is sum_n a_n d^(N-1-n).

#include <cstdint>

#include "spinsq/types.hpp"

namespace spinsq::kernels {

struct SiteLayout {
  int sites = 1;
  int local_dim = 2;
  Index dim = 2;

  static SiteLayout make(int sites, int local_dim);
  Index stride(int site) const;
  int digit(Index index, int site) const {
    return static_cast<int>((index / stride(site)) % local_dim);
  }
};

/// psi <- op_(site) psi
void apply_site(const SiteLayout& layout, int site, const CMatrix& op, CVector& psi);
/// rho <- op_(site) rho
void apply_site_left(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho);
/// rho <- rho op_(site)
void apply_site_right(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho);

/// A psi for a sparse operator.
CVector sparse_times_vector(const SparseOp& a, const CVector& psi);
/// A rho for a sparse operator.
CMatrix sparse_times_dense(const SparseOp& a, const CMatrix& rho);
/// Tr(A rho) = sum_{ik} A_ik rho_ki.
Complex trace_product(const SparseOp& a, const CMatrix& rho);
/// <psi| A |psi>.
Complex expectation(const SparseOp& a, const CVector& psi);

/// Two-site reduced density matrix of sites (m, n), m the first factor.
CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CVector& psi);
CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CMatrix& rho);
/// Single-site reduced density matrix.
CMatrix reduced_site(const SiteLayout& layout, int n, const CVector& psi);
CMatrix reduced_site(const SiteLayout& layout, int n, const CMatrix& rho);

/// Partial transpose on every site whose bit is set in `mask`.
CMatrix partial_transpose(const SiteLayout& layout, const CMatrix& rho, std::uint64_t mask);

namespace serial {

void apply_site(const SiteLayout& layout, int site, const CMatrix& op, CVector& psi);
void apply_site_left(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho);
void apply_site_right(const SiteLayout& layout, int site, const CMatrix& op, CMatrix& rho);
CVector sparse_times_vector(const SparseOp& a, const CVector& psi);
CMatrix sparse_times_dense(const SparseOp& a, const CMatrix& rho);
Complex trace_product(const SparseOp& a, const CMatrix& rho);
Complex expectation(const SparseOp& a, const CVector& psi);
CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CVector& psi);
CMatrix reduced_pair(const SiteLayout& layout, int m, int n, const CMatrix& rho);
CMatrix reduced_site(const SiteLayout& layout, int n, const CVector& psi);
CMatrix reduced_site(const SiteLayout& layout, int n, const CMatrix& rho);
CMatrix partial_transpose(const SiteLayout& layout, const CMatrix& rho, std::uint64_t mask);

}  // namespace serial

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace spinsq::kernels
