#include "spinsq/measurement.hpp"

#include <cmath>
#include <random>

#include "spinsq/errors.hpp"
#include "spinsq/kernels.hpp"

namespace spinsq {
namespace {

// Eigenvectors of j_axis ordered by descending eigenvalue.
CMatrix readout_basis(const SpinOperators& ops, Axis axis) {
  const HermitianEigen eig = hermitian_eigen(ops[axis]);
  return eig.vectors.rowwise().reverse();
}

Estimate sample_estimate(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

}  // namespace

RVector outcome_distribution(const QuantumState& state, Axis axis) {
  const auto& shape = state.shape();
  const auto layout = kernels::SiteLayout::make(shape.particles(), shape.local_dim());
  const SpinOperators ops = spin_operators(shape.spin());
  const CMatrix v = readout_basis(ops, axis);
  const CMatrix vd = v.adjoint();
  RVector p = RVector::Zero(shape.dim());
  state.visit(
      [&](double w, const CVector& psi) {
        CVector phi = psi;
        for (int n = 0; n < layout.sites; ++n) kernels::apply_site(layout, n, vd, phi);
        p += w * phi.cwiseAbs2();
      },
      [&](const CMatrix& rho) {
        CMatrix r = rho;
        for (int n = 0; n < layout.sites; ++n) {
          kernels::apply_site_left(layout, n, vd, r);
          kernels::apply_site_right(layout, n, v, r);
        }
        p += r.diagonal().real();
      });
  p = p.cwiseMax(0.0);
  return p / p.sum();
}

MeasurementRecord simulate_population_measurement(const QuantumState& state, Axis axis, int shots,
                                                  std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("shots must be positive");
  const auto& shape = state.shape();
  const auto layout = kernels::SiteLayout::make(shape.particles(), shape.local_dim());
  const RVector p = outcome_distribution(state, axis);
  MeasurementRecord rec{shape, axis, shots, seed};
  for (int a = 0; a < shape.local_dim(); ++a) rec.chi.push_back(shape.j() - a);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index_of(axis))};
  std::mt19937_64 rng(seq);
  std::discrete_distribution<Index> dist(p.data(), p.data() + p.size());
  rec.counts.assign(shots, std::vector<int>(shape.local_dim(), 0));
  for (int s = 0; s < shots; ++s) {
    const Index outcome = dist(rng);
    for (int n = 0; n < layout.sites; ++n) ++rec.counts[s][layout.digit(outcome, n)];
  }
  return rec;
}

void accumulate_estimates(const MeasurementRecord& record, EstimatedMoments& out) {
  const int l = index_of(record.axis);
  std::vector<double> total, second, local, tilde;
  for (const auto& row : record.counts) {
    double s = 0.0, m = 0.0;
    for (std::size_t a = 0; a < row.size(); ++a) {
      s += row[a] * record.chi[a];
      m += row[a] * record.chi[a] * record.chi[a];
    }
    total.push_back(s);
    second.push_back(s * s);
    local.push_back(m);
    tilde.push_back(s * s - m);
  }
  out.J[l] = sample_estimate(total);
  out.K[l] = sample_estimate(second);
  out.M[l] = sample_estimate(local);
  out.Ktilde[l] = sample_estimate(tilde);
}

EstimatedMoments estimate_moment_set(const QuantumState& state, int shots, std::uint64_t seed) {
  if (shots < 2) throw InvalidArgument("moment estimation needs at least 2 shots");
  EstimatedMoments out{state.shape(), shots};
  for (Axis a : kAxes) {
    accumulate_estimates(simulate_population_measurement(state, a, shots, seed), out);
  }
  return out;
}

MomentSet EstimatedMoments::to_moment_set() const {
  Vec3 j, k, m;
  for (int l = 0; l < 3; ++l) {
    j(l) = J[l].value;
    k(l) = K[l].value;
    m(l) = M[l].value;
  }
  return MomentSet::from_values(shape, j, k, m);
}

}  // namespace spinsq
