#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spinsq/moments.hpp"

namespace spinsq {

enum class Sense { GreaterEqual, LessEqual };

/// One inequality lhs >= rhs (or lhs <= rhs). The margin is oriented so that
/// a negative margin means the separability condition fails.
struct CriterionRecord {
  std::string name;
  std::string tag;  // axes or subset, empty when the condition has none
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool violated = false;
  bool saturated = false;
  Sense sense = Sense::GreaterEqual;

  std::string key() const { return tag.empty() ? name : name + "_" + tag; }
};

/// Violation threshold relative to the size of both sides, or to
/// `magnitude` (the typical size of the terms compared) when larger.
inline constexpr double kViolationTol = 1e-12;
inline constexpr double kSaturationTol = 1e-9;

CriterionRecord make_record(std::string name, std::string tag, double lhs, double rhs, Sense sense,
                            double magnitude = 1.0);

struct CriteriaReport {
  std::vector<CriterionRecord> records;

  bool entangled() const;
  /// nullptr when absent.
  const CriterionRecord* find(const std::string& key) const;
  /// Throws InvalidArgument when absent.
  const CriterionRecord& at(const std::string& key) const;
  void append(const CriteriaReport& other);
};

/// A subset I of {x, y, z}, stored as a bit mask (bit l for axis l).
struct IndexSubset {
  unsigned bits = 0;

  bool contains(Axis a) const { return (bits >> index_of(a)) & 1u; }
  /// "none", "x", "xy", ..., "xyz".
  std::string label() const;
  /// Parses a label as produced by label(); "" is also the empty set.
  static IndexSubset parse(std::string_view text);
  static std::vector<IndexSubset> all();
};

/// Canonical labels of axis pairs: "xy", "xz", "yz".
std::string pair_label(Axis a, Axis b);

/// The four optimal families for every axis choice (symmsatin, isoin,
/// betosp_k, twovar_kl) and the unified subset form ssij_I for all eight
/// subsets. When `check_consistency` is set (exact moments), the subset
/// form is compared against the families and a mismatch throws
/// ConsistencyError.
CriteriaReport evaluate_optimal_set(const MomentSet& m, bool check_consistency = true);

/// Frame-independent form using Tr C, Tr gamma, and the extreme eigenvalues of X.
CriteriaReport evaluate_coordinate_free(const MomentMatrices& mm);

/// The same conditions written with true second moments and a single local
/// moment: betosp2_k, othtwo2_k, othtwo1_kl and (N >= 2) othtwo1bbb_kl.
CriteriaReport rearranged_criteria(const MomentSet& m);

/// (k, l, m): k is the squeezed axis.
struct AxisPermutation {
  Axis k = Axis::X;
  Axis l = Axis::Y;
  Axis m = Axis::Z;
  /// Parses "xyz", "zxy", ...
  static AxisPermutation parse(std::string_view text);
  static std::vector<AxisPermutation> all();
  std::string label() const;
};

struct Parameter {
  std::optional<double> value;
  std::string reason;  // why the value is absent
  bool present() const { return value.has_value(); }
};

struct SqueezingReport {
  AxisPermutation axes;
  Parameter xi_s2;        // N var_k / (J_l^2 + J_m^2)
  Parameter xi_sj2;       // N (vt_k + Nj^2) / (J_l^2 + J_m^2)
  Parameter xi_os2;       // (N-1)(vt_k + Nj^2) / (Kt_l + Kt_m)
  Parameter xi_singlet2;  // sum var / (Nj)
  Parameter xi_planar2;   // (N-1)(vt_k + vt_l + Nj^2) / Kt_m
};

SqueezingReport squeezing_parameters(const MomentSet& m, const AxisPermutation& axes = {});

/// Moments rescaled to an ensemble of spin-1/2 particles: <J_l>/(2j) and
/// <Jt_l^2>/(4j^2).
struct QubitMoments {
  int particles = 1;
  Vec3 J = Vec3::Zero();
  Vec3 Ktilde = Vec3::Zero();
};

QubitMoments map_to_qubit(const MomentSet& m);

/// A separability condition for spin-1/2 ensembles written in first and
/// modified second moments.
using QubitCondition = std::function<CriterionRecord(const QubitMoments&)>;

/// Applies a qubit condition to a spin-j ensemble through map_to_qubit.
CriterionRecord mapped_condition(const MomentSet& m, const QubitCondition& condition);

/// The qubit two-body condition with axis n singled out (kc05e_n).
CriterionRecord qubit_pair_condition(const QubitMoments& q, Axis n);

/// Planar constant C_j for j = 1/2 and 1. Throws UnsupportedConstant otherwise.
double planar_constant(HalfInt j);

/// var_k + var_l >= N C_j. Throws UnsupportedConstant for j > 1.
CriterionRecord planar_criterion(const MomentSet& m, Axis k, Axis l);

/// qudkcl_n for the three axes, planarjj_kl for the three planes and
/// planar_kl when the constant is known.
CriteriaReport mapped_criteria(const MomentSet& m);

/// Two-body form of ssij_I (tq_I). Throws InvalidArgument for N = 1.
CriterionRecord two_body_criterion(const ReducedStates& r, const IndexSubset& subset);

struct BipartitionResult {
  std::uint64_t mask = 0;  // sites whose factor is transposed
  double min_eigenvalue = 0.0;
  bool npt = false;
};

inline constexpr double kNptTol = 1e-9;

struct PptReport {
  std::vector<BipartitionResult> cuts;
  bool any_npt() const;
  double min_eigenvalue() const;
};

/// Masks for every one-versus-rest cut.
std::vector<std::uint64_t> one_vs_rest_masks(int particles);
/// One mask per unordered nontrivial bipartition.
std::vector<std::uint64_t> all_bipartition_masks(int particles);

PptReport ppt_report(const QuantumState& state, const std::vector<std::uint64_t>& masks);

struct PairPptReport {
  double min_eigenvalue = 0.0;  // of the partial transpose of rho_av2
  bool npt = false;
  int samples = 0;
  double min_witness = 0.0;  // min over A of <A(x)A> - <A(x)1>^2
};

/// Throws InvalidArgument for samples < 1.
PairPptReport ppt_report_av2(const ReducedStates& r, int samples, std::uint64_t seed);

/// sum_n <(j_z^(n))^2> of the symmetric Dicke state |Nj, lambda_z>.
double dicke_local_moment(int particles, HalfInt j, HalfInt lambda_z);

}  // namespace spinsq
