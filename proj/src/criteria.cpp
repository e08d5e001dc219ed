#include "spinsq/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinsq/errors.hpp"
#include "spinsq/kernels.hpp"
#include "spinsq/random.hpp"

namespace spinsq {
namespace {

double scale_of(double a, double b, double magnitude) {
  return std::max({1.0, magnitude, std::abs(a), std::abs(b)});
}

struct Consts {
  double n, j, nj2, nn1j2, njnj1;
  double mag;  // typical size of the terms compared, N (Nj)^2
};

Consts consts(const EnsembleShape& shape) {
  const double n = shape.particles();
  const double j = shape.j();
  return {n, j, n * j * j, n * (n - 1.0) * j * j, n * j * (n * j + 1.0), n * n * n * j * j};
}

std::string axis_str(Axis a) { return std::string(1, axis_name(a)); }

void check_same(const CriterionRecord& a, const CriterionRecord& b, double factor) {
  const double diff = std::abs(a.margin * factor - b.margin);
  const double scale =
      std::max({1.0, std::abs(a.lhs), std::abs(a.rhs), std::abs(b.lhs), std::abs(b.rhs)}) *
      std::max(1.0, std::abs(factor));
  if (diff > 1e-9 * scale) {
    throw ConsistencyError(a.key() + " and " + b.key() + " margins disagree by " +
                           std::to_string(diff));
  }
}

}  // namespace

CriterionRecord make_record(std::string name, std::string tag, double lhs, double rhs, Sense sense,
                            double magnitude) {
  CriterionRecord r;
  r.name = std::move(name);
  r.tag = std::move(tag);
  r.lhs = lhs;
  r.rhs = rhs;
  r.sense = sense;
  r.margin = sense == Sense::GreaterEqual ? lhs - rhs : rhs - lhs;
  const double scale = scale_of(lhs, rhs, magnitude);
  r.violated = r.margin < -kViolationTol * scale;
  r.saturated = std::abs(r.margin) <= kSaturationTol * scale;
  return r;
}

bool CriteriaReport::entangled() const {
  return std::any_of(records.begin(), records.end(), [](const auto& r) { return r.violated; });
}

const CriterionRecord* CriteriaReport::find(const std::string& key) const {
  for (const auto& r : records)
    if (r.key() == key) return &r;
  return nullptr;
}

const CriterionRecord& CriteriaReport::at(const std::string& key) const {
  if (const auto* r = find(key)) return *r;
  throw InvalidArgument("no criterion named '" + key + "'");
}

void CriteriaReport::append(const CriteriaReport& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

std::string IndexSubset::label() const {
  if (bits == 0) return "none";
  std::string s;
  for (Axis a : kAxes)
    if (contains(a)) s += axis_name(a);
  return s;
}

IndexSubset IndexSubset::parse(std::string_view text) {
  IndexSubset s;
  if (text.empty() || text == "none") return s;
  for (char c : text) s.bits |= 1u << index_of(parse_axis(std::string_view(&c, 1)));
  return s;
}

std::vector<IndexSubset> IndexSubset::all() {
  std::vector<IndexSubset> out;
  for (unsigned b = 0; b < 8; ++b) out.push_back(IndexSubset{b});
  return out;
}

std::string pair_label(Axis a, Axis b) {
  if (index_of(a) > index_of(b)) std::swap(a, b);
  return std::string{axis_name(a), axis_name(b)};
}

CriteriaReport evaluate_optimal_set(const MomentSet& m, bool check_consistency) {
  const auto c = consts(m.shape);
  CriteriaReport rep;
  rep.records.push_back(make_record("symmsatin", "", m.K.sum(), c.njnj1, Sense::LessEqual, c.mag));
  rep.records.push_back(
      make_record("isoin", "", m.var.sum(), c.n * c.j, Sense::GreaterEqual, c.mag));
  for (Axis k : kAxes) {
    const auto [l, mm] = other_axes(k);
    rep.records.push_back(make_record("betosp", axis_str(k), (c.n - 1.0) * m.vt(k),
                                      m.Kt(l) + m.Kt(mm) - c.nn1j2, Sense::GreaterEqual, c.mag));
  }
  for (Axis mm : kAxes) {
    const auto [k, l] = other_axes(mm);
    rep.records.push_back(make_record("twovar", pair_label(k, l), (c.n - 1.0) * (m.vt(k) + m.vt(l)),
                                      m.Kt(mm) - c.nn1j2, Sense::GreaterEqual, c.mag));
  }
  for (const auto& subset : IndexSubset::all()) {
    double lhs = 0.0;
    for (Axis a : kAxes) lhs += subset.contains(a) ? (c.n - 1.0) * m.vt(a) : -m.Kt(a);
    rep.records.push_back(
        make_record("ssij", subset.label(), lhs, -c.nn1j2, Sense::GreaterEqual, c.mag));
  }
  if (check_consistency) {
    check_same(rep.at("symmsatin"), rep.at("ssij_none"), 1.0);
    check_same(rep.at("isoin"), rep.at("ssij_xyz"), c.n - 1.0);
    for (Axis k : kAxes) {
      check_same(rep.at("betosp_" + axis_str(k)), rep.at("ssij_" + axis_str(k)), 1.0);
      const auto [l, mm] = other_axes(k);
      const std::string p = pair_label(l, mm);
      check_same(rep.at("twovar_" + p), rep.at("ssij_" + p), 1.0);
    }
  }
  return rep;
}

CriteriaReport evaluate_coordinate_free(const MomentMatrices& mm) {
  const auto c = consts(mm.shape);
  const double q0n2 = c.n * c.n * mm.Q0();
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(mm.X, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  const double lmax = eig.eigenvalues()(2);
  const double trc = mm.C.trace();
  const double trg = mm.gamma.trace();
  CriteriaReport rep;
  rep.records.push_back(make_record("symmsatin_ci", "", trc, c.njnj1, Sense::LessEqual, c.mag));
  rep.records.push_back(make_record("isoin_ci", "", trg, c.n * c.j, Sense::GreaterEqual, c.mag));
  rep.records.push_back(
      make_record("betosp_ci", "", lmin, trc - c.njnj1 + q0n2, Sense::GreaterEqual, c.mag));
  rep.records.push_back(make_record("twovar_ci", "", lmax,
                                    (c.n - 1.0) * trg - c.n * (c.n - 1.0) * c.j + q0n2,
                                    Sense::LessEqual, c.mag));
  return rep;
}

CriteriaReport rearranged_criteria(const MomentSet& m) {
  const auto c = consts(m.shape);
  auto K = [&](Axis a) { return m.K(index_of(a)); };
  auto M = [&](Axis a) { return m.M(index_of(a)); };
  auto var = [&](Axis a) { return m.var(index_of(a)); };
  CriteriaReport rep;
  for (Axis k : kAxes) {
    const auto [l, mm] = other_axes(k);
    const double lhs = m.K.sum() - c.n * var(k) - m.J_(k) * m.J_(k) + c.n * M(k);
    rep.records.push_back(
        make_record("betosp2", axis_str(k), lhs, c.njnj1, Sense::LessEqual, c.mag));
    rep.records.push_back(make_record("othtwo2", axis_str(k), (c.n - 1.0) * var(k) - c.n * M(k),
                                      -c.njnj1 + K(l) + K(mm), Sense::GreaterEqual, c.mag));
  }
  for (Axis mm : kAxes) {
    const auto [k, l] = other_axes(mm);
    const std::string p = pair_label(k, l);
    rep.records.push_back(make_record("othtwo1", p, (c.n - 1.0) * (var(k) + var(l)),
                                      c.n * (c.n - 1.0) * c.j + K(mm) - c.n * M(mm),
                                      Sense::GreaterEqual, c.mag));
    if (c.n >= 2.0) {
      rep.records.push_back(make_record("othtwo1bbb", p, var(k) + var(l),
                                        c.n * c.j + (K(mm) - c.n * M(mm)) / (c.n - 1.0),
                                        Sense::GreaterEqual, c.mag));
    }
  }
  return rep;
}

AxisPermutation AxisPermutation::parse(std::string_view text) {
  if (text.size() != 3) throw InvalidArgument("axis permutation must look like 'xyz'");
  AxisPermutation p{parse_axis(text.substr(0, 1)), parse_axis(text.substr(1, 1)),
                    parse_axis(text.substr(2, 1))};
  if (p.k == p.l || p.l == p.m || p.k == p.m) {
    throw InvalidArgument("axis permutation '" + std::string(text) + "' repeats an axis");
  }
  return p;
}

std::vector<AxisPermutation> AxisPermutation::all() {
  std::vector<AxisPermutation> out;
  for (Axis k : kAxes) {
    const auto [l, m] = other_axes(k);
    out.push_back({k, l, m});
    out.push_back({k, m, l});
  }
  return out;
}

std::string AxisPermutation::label() const {
  return std::string{axis_name(k), axis_name(l), axis_name(m)};
}

SqueezingReport squeezing_parameters(const MomentSet& m, const AxisPermutation& axes) {
  const auto c = consts(m.shape);
  const Axis k = axes.k, l = axes.l, mm = axes.m;
  auto ratio = [](double num, double den, const char* reason) {
    Parameter p;
    if (den > 1e-12 * std::max(1.0, std::abs(num))) {
      p.value = std::max(0.0, num / den);
    } else {
      p.reason = reason;
    }
    return p;
  };
  SqueezingReport r;
  r.axes = axes;
  const double perp = m.J_(l) * m.J_(l) + m.J_(mm) * m.J_(mm);
  r.xi_s2 = ratio(c.n * m.var(index_of(k)), perp, "zero perpendicular mean spin");
  r.xi_sj2 = ratio(c.n * (m.vt(k) + c.nj2), perp, "zero perpendicular mean spin");
  r.xi_os2 = ratio((c.n - 1.0) * (m.vt(k) + c.nj2), m.Kt(l) + m.Kt(mm),
                   "non-positive perpendicular modified second moments");
  r.xi_singlet2 = ratio(m.var.sum(), c.n * c.j, "zero spin");
  r.xi_planar2 = ratio((c.n - 1.0) * (m.vt(k) + m.vt(l) + c.nj2), m.Kt(mm),
                       "non-positive modified second moment");
  return r;
}

QubitMoments map_to_qubit(const MomentSet& m) {
  const double j = m.shape.j();
  return {m.shape.particles(), m.J / (2.0 * j), m.Ktilde / (4.0 * j * j)};
}

CriterionRecord mapped_condition(const MomentSet& m, const QubitCondition& condition) {
  return condition(map_to_qubit(m));
}

CriterionRecord qubit_pair_condition(const QubitMoments& q, Axis n) {
  const auto [k, l] = other_axes(n);
  const double nn = q.particles;
  const double s = q.Ktilde(index_of(k)) + q.Ktilde(index_of(l));
  const double jn = q.J(index_of(n));
  const double lhs = std::sqrt(s * s + (nn - 1.0) * (nn - 1.0) * jn * jn) - q.Ktilde(index_of(n));
  return make_record("kc05e", axis_str(n), lhs, nn * (nn - 1.0) / 4.0, Sense::LessEqual);
}

double planar_constant(HalfInt j) {
  if (j.twice() == 1) return 0.25;
  if (j.twice() == 2) return 7.0 / 16.0;
  throw UnsupportedConstant("planar constant for j = " + j.to_string() +
                            " is only known numerically");
}

CriterionRecord planar_criterion(const MomentSet& m, Axis k, Axis l) {
  const double cj = planar_constant(m.shape.spin());
  const auto c = consts(m.shape);
  return make_record("planar", pair_label(k, l), m.var(index_of(k)) + m.var(index_of(l)),
                     m.shape.particles() * cj, Sense::GreaterEqual, c.mag);
}

CriteriaReport mapped_criteria(const MomentSet& m) {
  const auto c = consts(m.shape);
  CriteriaReport rep;
  for (Axis n : kAxes) {
    const auto [k, l] = other_axes(n);
    const double s = m.Kt(k) + m.Kt(l);
    const double lhs =
        std::sqrt(s * s + 4.0 * (c.n - 1.0) * (c.n - 1.0) * c.j * c.j * m.J_(n) * m.J_(n)) -
        m.Kt(n);
    rep.records.push_back(
        make_record("qudkcl", axis_str(n), lhs, c.nn1j2, Sense::LessEqual, c.mag));
  }
  for (Axis n : kAxes) {
    const auto [k, l] = other_axes(n);
    rep.records.push_back(make_record("planarjj", pair_label(k, l), m.vt(k) + m.vt(l), -c.nj2,
                                      Sense::GreaterEqual, c.mag));
  }
  if (m.shape.spin().twice() <= 2) {
    for (Axis n : kAxes) {
      const auto [k, l] = other_axes(n);
      rep.records.push_back(planar_criterion(m, k, l));
    }
  }
  return rep;
}

CriterionRecord two_body_criterion(const ReducedStates& r, const IndexSubset& subset) {
  if (r.shape.particles() < 2) throw InvalidArgument("two-body criterion needs N >= 2");
  const double n = r.shape.particles();
  const double j = r.shape.j();
  double lhs = 0.0;
  for (Axis a : kAxes) {
    if (!subset.contains(a)) continue;
    const int l = index_of(a);
    lhs += r.corr(l) - r.local_mean(l) * r.local_mean(l);
  }
  return make_record("tq", subset.label(), n * lhs, r.sigma - j * j, Sense::GreaterEqual,
                     consts(r.shape).mag / (n * (n - 1.0)));
}

bool PptReport::any_npt() const {
  return std::any_of(cuts.begin(), cuts.end(), [](const auto& c) { return c.npt; });
}

double PptReport::min_eigenvalue() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& c : cuts) v = std::min(v, c.min_eigenvalue);
  return v;
}

std::vector<std::uint64_t> one_vs_rest_masks(int particles) {
  std::vector<std::uint64_t> out;
  if (particles < 2) return out;
  for (int n = 0; n < particles; ++n) out.push_back(std::uint64_t{1} << n);
  return out;
}

std::vector<std::uint64_t> all_bipartition_masks(int particles) {
  std::vector<std::uint64_t> out;
  if (particles < 2) return out;
  const std::uint64_t top = std::uint64_t{1} << (particles - 1);
  for (std::uint64_t m = 1; m < top; ++m) out.push_back(m);
  return out;
}

PptReport ppt_report(const QuantumState& state, const std::vector<std::uint64_t>& masks) {
  const auto& shape = state.shape();
  shape.require_dense();
  const auto layout = kernels::SiteLayout::make(shape.particles(), shape.local_dim());
  const std::uint64_t full = (std::uint64_t{1} << shape.particles()) - 1;
  const CMatrix rho = state.density_matrix();
  PptReport rep;
  for (auto mask : masks) {
    if (mask == 0 || (mask & ~full) != 0 || mask == full) {
      throw InvalidArgument("bipartition mask " + std::to_string(mask) + " is not a proper cut");
    }
    const double lmin = min_eigenvalue(kernels::partial_transpose(layout, rho, mask));
    rep.cuts.push_back({mask, lmin, lmin < -kNptTol});
  }
  return rep;
}

PairPptReport ppt_report_av2(const ReducedStates& r, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("sample count must be positive");
  const int d = r.shape.local_dim();
  const auto layout = kernels::SiteLayout::make(2, d);
  PairPptReport rep;
  rep.samples = samples;
  rep.min_eigenvalue = min_eigenvalue(kernels::partial_transpose(layout, r.rho_av2, 1));
  rep.npt = rep.min_eigenvalue < -kNptTol;
  random::Rng rng(seed);
  const CMatrix id = CMatrix::Identity(d, d);
  rep.min_witness = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const CMatrix a = random::random_hermitian(d, rng);
    const double aa = (kron(a, a) * r.rho_av2).trace().real();
    const double a1 = (kron(a, id) * r.rho_av2).trace().real();
    rep.min_witness = std::min(rep.min_witness, aa - a1 * a1);
  }
  return rep;
}

double dicke_local_moment(int particles, HalfInt j, HalfInt lambda_z) {
  const int twice_total = particles * j.twice();
  if (particles < 1 || j.twice() < 1) throw InvalidArgument("invalid ensemble");
  if (std::abs(lambda_z.twice()) > twice_total || (twice_total - lambda_z.twice()) % 2 != 0) {
    throw InvalidArgument("Dicke eigenvalue " + lambda_z.to_string() + " is not allowed");
  }
  const double n = particles;
  if (j.twice() == 1) return n / 4.0;
  const double jj = j.value();
  const double lz = lambda_z.value();
  return n * (n - 1.0) * jj * jj / (2.0 * jj * n - 1.0) +
         (2.0 * jj - 1.0) * lz * lz / (2.0 * n * jj - 1.0);
}

}  // namespace spinsq
