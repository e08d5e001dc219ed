#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spinsq/criteria.hpp"
#include "spinsq/states.hpp"

namespace spinsq {

/// Picks the verdict a scan follows. Accepts "any" (every optimal-set
/// record), a key such as "isoin" or "betosp_z", or "name:tag" such as
/// "betosp:z" and "twovar:xy".
class CriterionSelector {
 public:
  static CriterionSelector parse(std::string_view text);

  /// True when the selected condition is violated. Throws InvalidArgument
  /// when the key names no record.
  bool violated(const MomentSet& m) const;
  /// Margin of the selected record (for "any", the smallest optimal-set margin).
  double margin(const MomentSet& m) const;
  const std::string& label() const { return key_; }
  bool is_any() const { return any_; }

 private:
  CriteriaReport evaluate(const MomentSet& m) const;
  std::string key_;
  bool any_ = false;
};

struct ScanOptions {
  int grid = 17;
  double tolerance = 1e-6;
  int max_iterations = 60;
  bool parallel = true;
};

struct ScanResult {
  std::string parameter;  // "p_n" or "T"
  std::string criterion;
  bool found = false;
  double lo = 0.0;  // verdict at lo differs from verdict at hi
  double hi = 0.0;
  double threshold = 0.0;  // bracket midpoint
  double tolerance = 0.0;  // achieved bracket width
  int evaluations = 0;
  bool verdict_lo = false;
  bool verdict_hi = false;
};

/// Finds where a boolean verdict flips on [lo, hi] with a grid pass
/// followed by bisection. The grid is evaluated concurrently when
/// `options.parallel` is set; the result does not depend on it. A verdict
/// that flips more than once on the grid throws ScanError.
ScanResult bisect_verdict(const std::function<bool(double)>& verdict, double lo, double hi,
                          const ScanOptions& options);

/// White-noise tolerance: largest p_n at which the criterion still fires.
/// Returns found = false when the verdicts at p_n = 0 and 1 agree; throws
/// ScanError when the criterion holds at 0 but fires at 1.
ScanResult noise_threshold(const QuantumState& state, const CriterionSelector& selector,
                           const ScanOptions& options = {});

struct TemperatureThresholds {
  ScanResult T_s;    // isoin
  ScanResult T_ppt;  // any bipartition NPT
};

/// Throws ScanError unless both verdicts hold at T_lo and fail at T_hi.
TemperatureThresholds temperature_thresholds(const CMatrix& hamiltonian, const EnsembleShape& shape,
                                             double T_lo, double T_hi, double tolerance = 1e-3);

struct Table1Row {
  std::string state;
  MomentSet computed;
  Vec3 J = Vec3::Zero();
  Vec3 K = Vec3::Zero();
  Vec3 M = Vec3::Zero();
  double max_error = 0.0;
};

/// Singlet, completely mixed and |D_{N,j}> rows, computed and closed form.
/// Rows whose state does not exist for (N, j) are skipped.
std::vector<Table1Row> table1(const EnsembleShape& shape);

/// Named-state mini-language "name:key=val,...". Names: singlet, dicke,
/// coherent, mixed, thermal, ground, psi_alpha, extremal, file. A trailing
/// noise=p mixes the result with white noise.
struct StateSpec {
  std::string name;
  std::map<std::string, std::string> params;

  static StateSpec parse(std::string_view text);
  const std::string* get(const std::string& key) const;
  std::string require(const std::string& key) const;
};

QuantumState build_state(const StateSpec& spec);
QuantumState build_state(std::string_view text);

/// Description of the mini-language for help output.
std::string state_spec_help();

}  // namespace spinsq
