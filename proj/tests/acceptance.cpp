#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "spinsq/criteria.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/moments.hpp"
#include "spinsq/pipeline.hpp"
#include "spinsq/polytope.hpp"
#include "spinsq/random.hpp"
#include "spinsq/states.hpp"

using namespace spinsq;

namespace {

// Pinned tolerances.
constexpr double kTempTol = 0.02;
constexpr double kTempBudgetSeconds = 30.0;
constexpr double kNoiseTol = 1e-5;
constexpr double kGoldenTol = 0.01;
constexpr double kTableTol = 1e-10;
constexpr double kLocalMomentTol = 1e-9;
constexpr Index kConstructLimit = 4096;
constexpr double kAlphaXiS = 4.0 / 9.0;
constexpr double kAlphaTol = 1e-9;
constexpr int kSeparableStates = 10000;
constexpr double kSaturationTol = 1e-9;
constexpr double kVertexTol = 1e-9;
constexpr int kFrameStates = 100;
constexpr int kFramesPerState = 1000;
constexpr double kFrameTieTol = 1e-9;
constexpr double kRatioTarget = 10.0;
constexpr double kRatioFactor = 2.0;
constexpr int kRatioRepeats = 200;
constexpr double kUnbiasedSigmas = 5.0;
constexpr int kUnbiasedShots = 100000;
constexpr double kIdentityTol = 1e-9;
constexpr double kExactTol = 1e-12;

EnsembleShape shape(int n, int twice_j) {
  Capacity cap;
  cap.max_dim = Index{1} << 62;
  return EnsembleShape::make(n, HalfInt::from_twice(twice_j), cap);
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    failures += (failures.empty() ? "" : "; ") + what;
  }
  std::string text() const {
    return failures.empty() ? detail.str() : failures + " | " + detail.str();
  }
};

using Check = std::function<void(Outcome&)>;

void bound_entanglement(Outcome& o) {
  const auto s = shape(3, 2);
  const auto start = std::chrono::steady_clock::now();
  const auto t = temperature_thresholds(bes_hamiltonian(s), s, 1.0, 10.0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail << "T_s=" << t.T_s.threshold << " T_ppt=" << t.T_ppt.threshold << " in " << secs << " s";
  o.require(t.T_s.found && std::abs(t.T_s.threshold - 3.66) <= kTempTol, "T_s off");
  o.require(t.T_ppt.found && std::abs(t.T_ppt.threshold - 3.57) <= kTempTol, "T_ppt off");
  o.require(t.T_s.threshold > t.T_ppt.threshold, "empty window");
  o.require(secs < kTempBudgetSeconds, "too slow");
}

void singlet_noise(Outcome& o) {
  const std::vector<std::pair<int, int>> cases{{4, 1}, {2, 2}, {2, 3}};
  double worst = 0.0;
  for (auto [n, tj] : cases) {
    const auto s = shape(n, tj);
    const auto r = noise_threshold(singlet_state(s, SingletVariant::Projector),
                                   CriterionSelector::parse("isoin"));
    const double err = std::abs(r.threshold - 1.0 / (s.j() + 1.0));
    worst = std::max(worst, err);
    o.require(r.found && err <= kNoiseTol, "j=" + s.spin().to_string() + " threshold off");
  }
  o.detail << "max error " << worst;
}

void dicke_noise(Outcome& o) {
  const std::vector<std::pair<int, int>> cases{{4, 1}, {2, 2}, {3, 2}};
  double worst = 0.0;
  for (auto [n, tj] : cases) {
    const auto s = shape(n, tj);
    const auto r =
        noise_threshold(dicke_state(s, HalfInt::from_int(0)), CriterionSelector::parse("betosp:z"));
    const double expected = n / (n * (2.0 * s.j() + 1.0) - 1.0);
    const double err = std::abs(r.threshold - expected);
    worst = std::max(worst, err);
    o.require(r.found && err <= kNoiseTol, "N=" + std::to_string(n) + " threshold off");
  }
  o.detail << "max error " << worst;
}

void h5_golden(Outcome& o) {
  const auto s = shape(5, 1);
  const auto m = moment_set(ground_state(s, h5_hamiltonian(s)));
  const auto sq = squeezing_parameters(m, AxisPermutation::parse("xyz"));
  const bool present = sq.xi_s2.present() && sq.xi_os2.present();
  o.require(present, "parameters absent");
  if (!present) return;
  o.detail << "xi_s2=" << *sq.xi_s2.value << " xi_os2=" << *sq.xi_os2.value;
  o.require(std::abs(*sq.xi_s2.value - 0.97) <= kGoldenTol, "xi_s2 off");
  o.require(std::abs(*sq.xi_os2.value - 1.29) <= kGoldenTol, "xi_os2 off");
  o.require(evaluate_optimal_set(m).at("isoin").violated, "isoin not violated");
}

void table_one(Outcome& o) {
  double worst = 0.0;
  for (const auto& s : {shape(4, 1), shape(2, 2), shape(3, 2)}) {
    const auto rows = table1(s);
    o.require(rows.size() == 3, "missing rows");
    for (const auto& r : rows) worst = std::max(worst, r.max_error);
  }
  o.detail << "max error " << worst;
  o.require(worst <= kTableTol, "closed form mismatch");
}

void local_moment_formula(Outcome& o) {
  double worst = 0.0;
  int count = 0;
  for (int tj = 1; tj <= 3; ++tj)
    for (int n = 1; n <= 4; ++n) {
      const auto s = shape(n, tj);
      const int total = n * tj;
      for (int twice = -total; twice <= total; twice += 2) {
        const auto lz = HalfInt::from_twice(twice);
        const double brute = moment_set(dicke_state(s, lz)).M(2);
        worst = std::max(worst, std::abs(brute - dicke_local_moment(n, s.spin(), lz)));
        ++count;
      }
    }
  o.detail << count << " states, max error " << worst;
  o.require(worst <= kLocalMomentTol, "formula mismatch");
}

void singlet_twovar(Outcome& o) {
  int built = 0, closed = 0, skipped = 0;
  for (int n = 2; n <= 8; ++n)
    for (int tj : {1, 2, 3, 4}) {
      if ((n * tj) % 2 != 0) {
        ++skipped;
        continue;
      }
      const auto s = shape(n, tj);
      MomentSet m;
      if (s.dim() <= kConstructLimit) {
        m = moment_set(singlet_state(s, SingletVariant::Projector));
        ++built;
      } else {
        const double loc = n * s.j() * (s.j() + 1.0) / 3.0;
        m = MomentSet::from_values(s, Vec3::Zero(), Vec3::Zero(), Vec3::Constant(loc));
        ++closed;
      }
      const bool predicted = s.j() < (2.0 * n - 3.0) / n;
      const auto rep = evaluate_optimal_set(m);
      for (const char* k : {"twovar_xy", "twovar_xz", "twovar_yz"}) {
        o.require(
            rep.at(k).violated == predicted,
            std::string(k) + " disagrees at N=" + std::to_string(n) + " j=" + s.spin().to_string());
      }
    }
  o.detail << built << " constructed, " << closed << " closed form, " << skipped
           << " without a singlet";
}

void example_one(Outcome& o) {
  for (int n = 1; n <= 3; ++n) {
    const auto sq = squeezing_parameters(moment_set(qutrit_alpha_state(n, 0.75)),
                                         AxisPermutation::parse("xyz"));
    const bool present = sq.xi_s2.present() && sq.xi_sj2.present();
    o.require(present, "parameters absent");
    if (!present) return;
    o.require(*sq.xi_s2.value < 1.0 && std::abs(*sq.xi_s2.value - kAlphaXiS) <= kAlphaTol,
              "xi_s2 off at N=" + std::to_string(n));
    o.require(*sq.xi_sj2.value >= 1.0, "xi_sj2 below one at N=" + std::to_string(n));
    if (n == 3) o.detail << "xi_s2=" << *sq.xi_s2.value << " xi_sj2=" << *sq.xi_sj2.value;
  }
}

void soundness(Outcome& o) {
  random::Rng rng(2024);
  int violations = 0, records = 0, cuts = 0;
  for (int t = 0; t < kSeparableStates; ++t) {
    const auto s = shape(1 + t % 4, 1 + (t / 4) % 3);
    const auto st = random::random_separable_state(s, 1 + t % (2 * s.particles()), rng);
    const auto raw = raw_moments(st);
    const auto m = moment_set(raw, random::random_frame(rng));
    auto rep = evaluate_optimal_set(m);
    rep.append(evaluate_coordinate_free(moment_matrices(raw, m.frame)));
    rep.append(rearranged_criteria(m));
    rep.append(mapped_criteria(m));
    if (s.particles() >= 2) {
      const auto r = reduced_states(st);
      for (const auto& subset : IndexSubset::all())
        rep.records.push_back(two_body_criterion(r, subset));
      violations += ppt_report_av2(r, 4, t).npt;
      const auto ppt = ppt_report(st, all_bipartition_masks(s.particles()));
      violations += ppt.any_npt();
      cuts += static_cast<int>(ppt.cuts.size());
    }
    for (const auto& r : rep.records) violations += r.violated;
    records += static_cast<int>(rep.records.size());
  }
  o.detail << kSeparableStates << " states, " << records << " records, " << cuts << " PPT cuts, "
           << violations << " violations";
  o.require(violations == 0, "separable state flagged");
}

void saturation_geometry(Outcome& o) {
  random::Rng rng(7);
  double worst_sat = 0.0;
  for (int t = 0; t < 30; ++t) {
    const auto s = shape(1 + t % 5, 1 + t % 4);
    const auto rep =
        evaluate_optimal_set(moment_set(coherent_ensemble(s, random::random_unit(rng))));
    for (const char* k : {"symmsatin", "isoin", "betosp_x", "betosp_y", "betosp_z"})
      worst_sat = std::max(worst_sat, std::abs(rep.at(k).margin));
    o.require(!rep.entangled(), "coherent ensemble flagged");
  }
  o.require(worst_sat < kSaturationTol, "coherent ensemble not saturated");
  double worst_a = 0.0, worst_b = 0.0, worst_bp = 0.0;
  struct Config {
    int n, tj;
    Vec3 mean;
  };
  std::vector<Config> configs{{10, 2, Vec3(0, 0, 8)},  {4, 1, Vec3::Zero()},
                              {4, 2, Vec3(0, 0, 2)},   {4, 2, Vec3(1, 0.5, 1)},
                              {6, 1, Vec3(0.5, 0, 1)}, {3, 3, Vec3(1, 1, 1)}};
  for (const auto& c : configs) {
    const auto s = shape(c.n, c.tj);
    const auto spec = ExtremalSpec::make(s, c.mean);
    const auto v = vertices(s, c.mean);
    for (Axis l : kAxes) {
      const int i = index_of(l);
      const auto a = moment_set(extremal_state(spec, ExtremalKind::A, l)).Ktilde;
      worst_a = std::max(worst_a, (a - v.A[i]).cwiseAbs().maxCoeff());
      if (spec.integer_count(l)) {
        const auto b = moment_set(extremal_state(spec, ExtremalKind::B, l)).Ktilde;
        worst_b = std::max(worst_b, (b - v.B[i]).cwiseAbs().maxCoeff());
      }
      const auto bp = moment_set(extremal_state(spec, ExtremalKind::BPrime, l)).Ktilde;
      worst_bp = std::max(worst_bp, std::abs(bp(i) - v.B[i](i)) / (s.j() * s.j()));
    }
  }
  o.detail << "saturation " << worst_sat << ", A " << worst_a << ", B " << worst_b << ", B' "
           << worst_bp << " j^2";
  o.require(worst_a < kVertexTol, "A vertex mismatch");
  o.require(worst_b < kVertexTol, "B vertex mismatch");
  o.require(worst_bp <= 1.0, "B' farther than j^2");
}

void frame_independence(Outcome& o) {
  random::Rng rng(11);
  int agree = 0, ties = 0, violated_states = 0;
  for (int t = 0; t < kFrameStates; ++t) {
    const auto s = shape(2 + t % 3, 1 + t % 3);
    const auto raw = t % 4 == 3 ? testing::squeezed_samples(1, rng).front().raw
                                : raw_moments(random::random_mixed_state(s, 1 + t % 2, rng));
    const auto ci = evaluate_coordinate_free(moment_matrices(raw));
    bool one = false, two = false;
    for (int f = 0; f < kFramesPerState; ++f) {
      const auto rep = evaluate_optimal_set(moment_set(raw, random::random_frame(rng)), false);
      for (const char* k : {"betosp_x", "betosp_y", "betosp_z"}) one = one || rep.at(k).violated;
      for (const char* k : {"twovar_xy", "twovar_xz", "twovar_yz"}) two = two || rep.at(k).violated;
    }
    violated_states += one || two;
    const auto& b = ci.at("betosp_ci");
    const auto& w = ci.at("twovar_ci");
    // Frames miss violations whose margin is within rounding of zero.
    const bool tie = std::abs(b.margin) < kFrameTieTol || std::abs(w.margin) < kFrameTieTol;
    if (tie) {
      ++ties;
      continue;
    }
    const bool ok = one == b.violated && two == w.violated;
    agree += ok;
    o.require(ok, "disagreement on state " + std::to_string(t));
  }
  o.detail << agree << " agree, " << ties << " ties, " << violated_states
           << " states violated in some frame";
}

void measurement_protocol(Outcome& o) {
  const auto s = shape(3, 2);
  const auto st = dicke_state(s, HalfInt::from_int(0));
  const auto exact = moment_set(st);
  auto rms = [&](int shots) {
    double acc = 0.0;
    for (int r = 0; r < kRatioRepeats; ++r) {
      const auto est = estimate_moment_set(st, shots, 9000 + r);
      acc += std::pow(est.M[2].value - exact.M(2), 2) + std::pow(est.K[0].value - exact.K(0), 2);
    }
    return std::sqrt(acc / kRatioRepeats);
  };
  const double ratio = rms(100) / rms(10000);
  o.require(ratio >= kRatioTarget / kRatioFactor && ratio <= kRatioTarget * kRatioFactor,
            "error ratio out of band");
  double worst = 0.0;
  std::uint64_t seed = 1;
  for (const auto& sh : {shape(4, 1), shape(2, 2), shape(3, 2)}) {
    std::vector<QuantumState> states{completely_mixed(sh)};
    if ((sh.particles() * sh.spin().twice()) % 2 == 0) {
      states.push_back(singlet_state(sh, SingletVariant::Projector));
      states.push_back(dicke_state(sh, HalfInt::from_int(0)));
    }
    for (const auto& q : states) {
      const auto est = estimate_moment_set(q, kUnbiasedShots, seed++);
      const double target = moment_set(q).M(2);
      // Spin one half readouts give M_z with zero spread.
      const double diff = std::abs(est.M[2].value - target);
      const double z = est.M[2].std_error > 0.0 ? diff / est.M[2].std_error
                                                : (diff < kExactTol ? 0.0 : kUnbiasedSigmas + 1.0);
      worst = std::max(worst, z);
    }
  }
  o.detail << "error ratio " << ratio << ", worst M_z deviation " << worst << " stderr";
  o.require(worst <= kUnbiasedSigmas, "biased M_z estimate");
}

void identities(Outcome& o) {
  random::Rng rng(13);
  double worst = 0.0;
  auto track = [&](double diff) { worst = std::max(worst, std::abs(diff)); };
  for (const auto& smp : testing::squeezed_samples(200, rng)) {
    const auto m = moment_set(smp.raw, smp.frame);
    const double n = m.shape.particles(), j = m.shape.j();
    const auto sq = squeezing_parameters(m, AxisPermutation::parse("xyz"));
    const double xi = *sq.xi_sj2.value;
    const double den = m.J(1) * m.J(1) + m.J(2) * m.J(2) - n * j * (j + 1.0);
    if (std::abs(den) > 1e-6)
      track(xi - n * (m.var_tilde(0) + n * j * j - j * (j + 1.0) * xi) / den);
  }
  for (int t = 0; t < 300; ++t) {
    const auto s = shape(2 + t % 3, 1 + t % 3);
    const auto raw = raw_moments(random::random_mixed_state(s, 1 + t % 3, rng));
    const Frame f = random::random_frame(rng);
    const auto m = moment_set(raw, f);
    const auto mm = moment_matrices(raw, f);
    const double n = s.particles(), j = s.j();
    for (int i = 0; i < 3; ++i)
      track(mm.X(i, i) - ((n - 1.0) * m.var_tilde(i) + m.Ktilde(i) + n * n * mm.Q0()));
    track(m.K.sum() - m.Ktilde.sum() - n * j * (j + 1.0));
    const auto a = evaluate_optimal_set(m);
    const auto b = rearranged_criteria(m);
    for (Axis k : kAxes) {
      const std::string x(1, axis_name(k));
      track(b.at("betosp2_" + x).margin - a.at("betosp_" + x).margin);
      track(b.at("othtwo2_" + x).margin - a.at("betosp_" + x).margin);
    }
    for (const char* p : {"xy", "xz", "yz"}) {
      const std::string key(p);
      track(b.at("othtwo1_" + key).margin - a.at("twovar_" + key).margin);
    }
  }
  for (int t = 0; t < 30; ++t) {
    const auto s = shape(2 + t % 3, 1 + t % 2);
    const auto st = testing::twisted_state(s, 0.1 + 0.01 * t);
    const auto raw = raw_moments(st);
    const Frame f = testing::squeezing_frame(raw);
    const auto m = moment_set(raw, f);
    const auto base = squeezing_parameters(m);
    const double n = s.particles(), j = s.j();
    const double perp = m.J(1) * m.J(1) + m.J(2) * m.J(2);
    const double kt = m.Ktilde(1) + m.Ktilde(2);
    for (double p : {0.1, 0.3, 0.5}) {
      const auto sq = squeezing_parameters(moment_set(mix_with_white_noise(st, p), f));
      track(*sq.xi_sj2.value -
            (*base.xi_sj2.value / (1 - p) + p / ((1 - p) * (1 - p)) * n * n * j * j / perp));
      if (base.xi_os2.present())
        track(*sq.xi_os2.value - (*base.xi_os2.value + p / (1 - p) * n * (n - 1.0) * j * j / kt));
    }
  }
  o.detail << "max deviation " << worst;
  o.require(worst <= kIdentityTol, "identity broken");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, Check>> checks{
      {"bound-entanglement window", bound_entanglement},
      {"singlet noise threshold", singlet_noise},
      {"Dicke noise threshold", dicke_noise},
      {"five-qubit ground space golden numbers", h5_golden},
      {"reference state moments", table_one},
      {"Dicke local moment formula", local_moment_formula},
      {"singlet two-variance predicate", singlet_twovar},
      {"qutrit product squeezing example", example_one},
      {"separable soundness sweep", soundness},
      {"saturation and polytope vertices", saturation_geometry},
      {"frame independence", frame_independence},
      {"measurement protocol", measurement_protocol},
      {"exact algebraic identities", identities},
  };
  // Optional argument selects a single criterion by number.
  const std::size_t only = argc > 1 ? std::stoul(argv[1]) : 0;
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (only != 0 && only != i + 1) continue;
    Outcome o;
    try {
      checks[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s %2zu %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first.c_str(),
                o.text().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
