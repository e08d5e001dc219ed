#include "spinsq/moments.hpp"

#include "spinsq/errors.hpp"
#include "spinsq/kernels.hpp"
#include "spinsq/states.hpp"

namespace spinsq {
namespace {

double real_trace(const CMatrix& a, const CMatrix& b) { return (a * b).trace().real(); }

kernels::SiteLayout layout_of(const EnsembleShape& shape) {
  return kernels::SiteLayout::make(shape.particles(), shape.local_dim());
}

void symmetrize(Mat3& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace

RawMoments RawMoments::mix(const RawMoments& a, const RawMoments& b, double w) {
  if (!(a.shape == b.shape)) throw InvalidArgument("cannot mix moments of different shapes");
  RawMoments out{a.shape};
  out.mean = (1.0 - w) * a.mean + w * b.mean;
  out.second = (1.0 - w) * a.second + w * b.second;
  out.local = (1.0 - w) * a.local + w * b.local;
  return out;
}

RawMoments raw_moments(const QuantumState& state) {
  const auto& shape = state.shape();
  const auto ops = collective_operators(shape);
  RawMoments out{shape};
  state.visit(
      [&](double w, const CVector& psi) {
        std::array<CVector, 3> phi;
        for (int l = 0; l < 3; ++l) phi[l] = kernels::sparse_times_vector(ops->J[l], psi);
        for (int k = 0; k < 3; ++k) {
          out.mean(k) += w * psi.dot(phi[k]).real();
          for (int l = k; l < 3; ++l) {
            out.second(k, l) += w * phi[k].dot(phi[l]).real();
            out.local(k, l) +=
                w * kernels::expectation(ops->local_second(kAxes[k], kAxes[l]), psi).real();
          }
        }
      },
      [&](const CMatrix& rho) {
        std::array<CMatrix, 3> a;
        for (int l = 0; l < 3; ++l) a[l] = kernels::sparse_times_dense(ops->J[l], rho);
        for (int k = 0; k < 3; ++k) {
          out.mean(k) += a[k].trace().real();
          for (int l = k; l < 3; ++l) {
            out.second(k, l) += kernels::trace_product(ops->J[k], a[l]).real();
            out.local(k, l) +=
                kernels::trace_product(ops->local_second(kAxes[k], kAxes[l]), rho).real();
          }
        }
      });
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < k; ++l) {
      out.second(k, l) = out.second(l, k);
      out.local(k, l) = out.local(l, k);
    }
  }
  return out;
}

RawMoments completely_mixed_moments(const EnsembleShape& shape) {
  RawMoments out{shape};
  const double v = shape.particles() * shape.j() * (shape.j() + 1.0) / 3.0;
  out.second = v * Mat3::Identity();
  out.local = v * Mat3::Identity();
  return out;
}

MomentSet MomentSet::from_values(const EnsembleShape& shape, const Vec3& J, const Vec3& K,
                                 const Vec3& M, const Frame& frame) {
  MomentSet m{shape, frame};
  m.J = J;
  m.K = K;
  m.M = M;
  m.Ktilde = K - M;
  m.var = K - J.cwiseProduct(J);
  m.var_tilde = m.Ktilde - J.cwiseProduct(J);
  return m;
}

MomentSet moment_set(const RawMoments& raw, const Frame& frame) {
  Vec3 J, K, M;
  for (int i = 0; i < 3; ++i) {
    const Vec3 n = frame.axis(i);
    J(i) = n.dot(raw.mean);
    K(i) = n.dot(raw.second * n);
    M(i) = n.dot(raw.local * n);
  }
  return MomentSet::from_values(raw.shape, J, K, M, frame);
}

MomentSet moment_set(const QuantumState& state, const Frame& frame) {
  return moment_set(raw_moments(state), frame);
}

MomentMatrices moment_matrices(const RawMoments& raw, const Frame& frame) {
  const Mat3& f = frame.matrix();
  const double n = raw.shape.particles();
  const double j = raw.shape.j();
  MomentMatrices mm{raw.shape, frame};
  mm.mean = f.transpose() * raw.mean;
  mm.C = f.transpose() * raw.second * f;
  symmetrize(mm.C);
  mm.gamma = mm.C - mm.mean * mm.mean.transpose();
  Mat3 local = f.transpose() * raw.local * f;
  symmetrize(local);
  mm.Q.Q0 = j * (j + 1.0) / 3.0;
  mm.Q.Q = local / n - mm.Q.Q0 * Mat3::Identity();
  mm.X = (n - 1.0) * mm.gamma + mm.C - n * n * mm.Q.Q;
  return mm;
}

MomentMatrices moment_matrices(const QuantumState& state, const Frame& frame) {
  return moment_matrices(raw_moments(state), frame);
}

ReducedStates reduced_states_from_pair(const EnsembleShape& shape, const CMatrix& rho_av2) {
  const int d = shape.local_dim();
  if (rho_av2.rows() != d * d || rho_av2.cols() != d * d) {
    throw InvalidArgument("two-body matrix has the wrong dimension");
  }
  ReducedStates r{shape};
  r.rho_av2 = rho_av2;
  const auto pair_layout = kernels::SiteLayout::make(2, d);
  r.rho_av1 = kernels::reduced_site(pair_layout, 0, rho_av2);
  const SpinOperators ops = spin_operators(shape.spin());
  const CMatrix id = CMatrix::Identity(d, d);
  for (Axis a : kAxes) {
    const int l = index_of(a);
    r.corr(l) = real_trace(kron(ops[a], ops[a]), rho_av2);
    r.local_mean(l) = real_trace(kron(ops[a], id), rho_av2);
  }
  r.sigma = r.corr.sum();
  return r;
}

ReducedStates reduced_states(const QuantumState& state) {
  const auto& shape = state.shape();
  const int n = shape.particles();
  if (n < 2) throw InvalidArgument("reduced two-body states need N >= 2");
  const int d = shape.local_dim();
  const auto layout = layout_of(shape);
  CMatrix acc = CMatrix::Zero(d * d, d * d);
  auto add_pairs = [&](double w, auto const& data) {
    for (int m = 0; m < n; ++m) {
      for (int k = m + 1; k < n; ++k) acc += w * kernels::reduced_pair(layout, m, k, data);
    }
  };
  state.visit([&](double w, const CVector& psi) { add_pairs(w, psi); },
              [&](const CMatrix& rho) { add_pairs(1.0, rho); });
  // Add the swapped ordering so every ordered pair contributes once.
  CMatrix swapped(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) swapped(b * d + a, e * d + c) = acc(a * d + b, c * d + e);
  CMatrix rho_av2 = (acc + swapped) / (static_cast<double>(n) * (n - 1));
  return reduced_states_from_pair(shape, rho_av2);
}

RawMoments raw_moments(const ReducedStates& reduced) {
  const auto& shape = reduced.shape;
  const double n = shape.particles();
  const SpinOperators ops = spin_operators(shape.spin());
  RawMoments out{shape};
  for (Axis a : kAxes) {
    const int k = index_of(a);
    out.mean(k) = n * real_trace(ops[a], reduced.rho_av1);
    for (Axis b : kAxes) {
      const int l = index_of(b);
      const CMatrix sym = 0.5 * (ops[a] * ops[b] + ops[b] * ops[a]);
      out.local(k, l) = n * real_trace(sym, reduced.rho_av1);
      const double pair = real_trace(kron(ops[a], ops[b]), reduced.rho_av2);
      out.second(k, l) = out.local(k, l) + n * (n - 1.0) * pair;
    }
  }
  symmetrize(out.second);
  return out;
}

}  // namespace spinsq
