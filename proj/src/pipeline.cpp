#include "spinsq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>

#include "spinsq/errors.hpp"
#include "spinsq/serialize.hpp"

namespace spinsq {
namespace {

const std::set<std::string, std::less<>> kFamilies{
    "symmsatin", "isoin",  "betosp",  "twovar",  "ssij",    "qudkcl",
    "planarjj",  "planar", "betosp2", "othtwo2", "othtwo1", "othtwo1bbb"};

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw InvalidArgument("parameter " + key + "='" + text + "' is not a number");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw InvalidArgument("parameter " + key + "='" + text + "' is not an integer");
  }
  return static_cast<int>(v);
}

Vec3 parse_vec3(const std::string& key, const std::string& text) {
  Vec3 v;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', start);
    if ((i < 2) != (comma != std::string::npos)) {
      throw InvalidArgument("parameter " + key + "='" + text + "' must be three numbers a,b,c");
    }
    v(i) =
        parse_number(key, text.substr(start, comma == std::string::npos ? comma : comma - start));
    start = comma + 1;
  }
  return v;
}

CMatrix named_hamiltonian(const std::string& name, const EnsembleShape& shape) {
  if (name == "bes") return bes_hamiltonian(shape);
  if (name == "h5") return h5_hamiltonian(shape);
  throw InvalidArgument("unknown Hamiltonian '" + name + "' (expected bes or h5)");
}

// Evaluates f on every grid point; exceptions are rethrown after the loop.
std::vector<char> evaluate_grid(const std::function<bool(double)>& f, const std::vector<double>& xs,
                                bool parallel) {
  std::vector<char> out(xs.size(), 0);
  std::exception_ptr error;
  const long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = f(xs[i]) ? 1 : 0;
    } catch (...) {
#pragma omp critical(spinsq_grid_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace

CriterionSelector CriterionSelector::parse(std::string_view text) {
  CriterionSelector s;
  if (text == "any") {
    s.any_ = true;
    s.key_ = "any";
    return s;
  }
  std::string key(text);
  std::replace(key.begin(), key.end(), ':', '_');
  const std::string family = key.substr(0, key.find('_'));
  if (!kFamilies.count(family) || key.empty()) {
    throw InvalidArgument("unknown criterion '" + std::string(text) + "'");
  }
  // Axis tags are stored in sorted order ("yx" -> "xy").
  const auto sep = key.find('_');
  if (sep != std::string::npos && key.find_first_not_of("xyz", sep + 1) == std::string::npos) {
    std::sort(key.begin() + static_cast<std::ptrdiff_t>(sep) + 1, key.end());
  }
  s.key_ = key;
  return s;
}

CriteriaReport CriterionSelector::evaluate(const MomentSet& m) const {
  CriteriaReport rep = evaluate_optimal_set(m, false);
  if (any_) return rep;
  if (rep.find(key_)) return rep;
  rep.append(mapped_criteria(m));
  rep.append(rearranged_criteria(m));
  return rep;
}

bool CriterionSelector::violated(const MomentSet& m) const {
  const CriteriaReport rep = evaluate(m);
  return any_ ? rep.entangled() : rep.at(key_).violated;
}

double CriterionSelector::margin(const MomentSet& m) const {
  const CriteriaReport rep = evaluate(m);
  if (!any_) return rep.at(key_).margin;
  double v = rep.records.front().margin;
  for (const auto& r : rep.records) v = std::min(v, r.margin);
  return v;
}

ScanResult bisect_verdict(const std::function<bool(double)>& verdict, double lo, double hi,
                          const ScanOptions& options) {
  if (options.grid < 2) throw InvalidArgument("scan grid needs at least 2 points");
  std::vector<double> xs(options.grid);
  for (int i = 0; i < options.grid; ++i) xs[i] = lo + (hi - lo) * i / (options.grid - 1);
  const auto v = evaluate_grid(verdict, xs, options.parallel);
  ScanResult r;
  r.evaluations = options.grid;
  r.verdict_lo = v.front();
  r.verdict_hi = v.back();
  int flips = 0;
  std::size_t at = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] != v[i + 1]) {
      ++flips;
      at = i;
    }
  }
  if (flips > 1) {
    throw ScanError("verdict flips " + std::to_string(flips) + " times on the scan grid");
  }
  if (flips == 0) {
    r.lo = lo;
    r.hi = hi;
    r.tolerance = hi - lo;
    return r;
  }
  double a = xs[at], b = xs[at + 1];
  const bool va = v[at];
  for (int it = 0; it < options.max_iterations && b - a > options.tolerance; ++it) {
    const double mid = 0.5 * (a + b);
    ++r.evaluations;
    (verdict(mid) == va ? a : b) = mid;
  }
  r.found = true;
  r.lo = a;
  r.hi = b;
  r.threshold = 0.5 * (a + b);
  r.tolerance = b - a;
  return r;
}

ScanResult noise_threshold(const QuantumState& state, const CriterionSelector& selector,
                           const ScanOptions& options) {
  const RawMoments raw = raw_moments(state);
  const RawMoments cm = completely_mixed_moments(state.shape());
  auto verdict = [&](double p) {
    return selector.violated(moment_set(RawMoments::mix(raw, cm, p)));
  };
  const bool v0 = verdict(0.0);
  const bool v1 = verdict(1.0);
  if (!v0 && v1) {
    throw ScanError("criterion " + selector.label() +
                    " holds without noise but fails for the completely mixed state");
  }
  ScanResult r;
  if (v0 == v1) {
    r.lo = 0.0;
    r.hi = 1.0;
    r.tolerance = 1.0;
    r.evaluations = 2;
    r.verdict_lo = v0;
    r.verdict_hi = v1;
  } else {
    r = bisect_verdict(verdict, 0.0, 1.0, options);
  }
  r.parameter = "p_n";
  r.criterion = selector.label();
  return r;
}

TemperatureThresholds temperature_thresholds(const CMatrix& hamiltonian, const EnsembleShape& shape,
                                             double T_lo, double T_hi, double tolerance) {
  if (!(T_lo > 0.0 && T_hi > T_lo))
    throw InvalidArgument("temperature range must satisfy 0 < lo < hi");
  const ThermalFamily family(shape, hamiltonian);
  const auto masks = all_bipartition_masks(shape.particles());
  auto isoin = [&](double t) {
    return evaluate_optimal_set(moment_set(family.at(t)), false).at("isoin").violated;
  };
  auto npt = [&](double t) { return ppt_report(family.at(t), masks).any_npt(); };
  ScanOptions opts;
  opts.tolerance = tolerance;
  auto scan = [&](const std::function<bool(double)>& f, const char* name) {
    if (!f(T_lo) || f(T_hi)) {
      throw ScanError(std::string(name) + " verdict does not change across [" +
                      std::to_string(T_lo) + ", " + std::to_string(T_hi) + "]");
    }
    ScanResult r = bisect_verdict(f, T_lo, T_hi, opts);
    r.parameter = "T";
    r.criterion = name;
    return r;
  };
  return {scan(isoin, "isoin"), scan(npt, "ppt")};
}

std::vector<Table1Row> table1(const EnsembleShape& shape) {
  const double n = shape.particles();
  const double j = shape.j();
  const Vec3 third = Vec3::Constant(n * j * (j + 1.0) / 3.0);
  std::vector<Table1Row> rows;
  auto add = [&](std::string name, const QuantumState& s, const Vec3& J, const Vec3& K,
                 const Vec3& M) {
    Table1Row row{std::move(name), moment_set(s), J, K, M};
    row.max_error = std::max({(row.computed.J - J).cwiseAbs().maxCoeff(),
                              (row.computed.K - K).cwiseAbs().maxCoeff(),
                              (row.computed.M - M).cwiseAbs().maxCoeff()});
    rows.push_back(std::move(row));
  };
  if (!singlet_basis(shape).empty()) {
    add("singlet", singlet_state(shape, SingletVariant::Projector), Vec3::Zero(), Vec3::Zero(),
        third);
  }
  if (shape.dim() <= default_capacity().max_dense_dim) {
    add("completely_mixed", completely_mixed(shape), Vec3::Zero(), third, third);
  }
  if ((shape.particles() * shape.spin().twice()) % 2 == 0) {
    const double mz = n * (n - 1.0) * j * j / (2.0 * j * n - 1.0);
    const double kxy = n * j * (n * j + 1.0) / 2.0;
    const double mxy = n * j * (j + 1.0) / 2.0 - mz / 2.0;
    add("dicke", dicke_state(shape, HalfInt::from_int(0)), Vec3::Zero(), Vec3(kxy, kxy, 0.0),
        Vec3(mxy, mxy, mz));
  }
  return rows;
}

StateSpec StateSpec::parse(std::string_view text) {
  StateSpec s;
  const auto colon = text.find(':');
  s.name = std::string(text.substr(0, colon));
  if (s.name.empty()) throw InvalidArgument("state spec has no name");
  if (colon == std::string_view::npos) return s;
  std::string last;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string token(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      // A bare value continues the previous one, as in dir=0,0,1.
      if (last.empty()) throw InvalidArgument("state spec token '" + token + "' has no key");
      s.params[last] += "," + token;
      continue;
    }
    last = token.substr(0, eq);
    if (last.empty()) throw InvalidArgument("state spec token '" + token + "' has no key");
    if (s.params.count(last)) throw InvalidArgument("state spec repeats key '" + last + "'");
    s.params[last] = token.substr(eq + 1);
  }
  return s;
}

const std::string* StateSpec::get(const std::string& key) const {
  const auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

std::string StateSpec::require(const std::string& key) const {
  if (const auto* v = get(key)) return *v;
  throw InvalidArgument("state '" + name + "' needs parameter " + key);
}

QuantumState build_state(const StateSpec& spec) {
  static const std::map<std::string, std::set<std::string>> allowed{
      {"singlet", {"j", "N", "variant"}},
      {"dicke", {"j", "N", "mz"}},
      {"coherent", {"j", "N", "dir"}},
      {"mixed", {"j", "N"}},
      {"thermal", {"j", "N", "H", "T"}},
      {"ground", {"j", "N", "H"}},
      {"psi_alpha", {"N", "alpha"}},
      {"extremal", {"j", "N", "J", "which"}},
      {"file", {"path"}},
  };
  const auto it = allowed.find(spec.name);
  if (it == allowed.end()) throw InvalidArgument("unknown state '" + spec.name + "'");
  for (const auto& [k, v] : spec.params) {
    if (k != "noise" && !it->second.count(k)) {
      throw InvalidArgument("state '" + spec.name + "' does not take parameter " + k);
    }
  }
  auto shape = [&] {
    return EnsembleShape::make(parse_int("N", spec.require("N")),
                               HalfInt::parse(spec.require("j")));
  };
  auto make = [&]() -> QuantumState {
    const std::string& n = spec.name;
    if (n == "singlet") {
      const auto* v = spec.get("variant");
      return singlet_state(shape(), v ? parse_singlet_variant(*v) : SingletVariant::Projector);
    }
    if (n == "dicke") {
      const auto* mz = spec.get("mz");
      return dicke_state(shape(), mz ? HalfInt::parse(*mz) : HalfInt::from_int(0));
    }
    if (n == "coherent") {
      const Vec3 dir = parse_vec3("dir", spec.require("dir"));
      if (!(dir.norm() > 0.0)) throw InvalidArgument("coherent direction must be non-zero");
      return coherent_ensemble(shape(), dir.normalized());
    }
    if (n == "mixed") return completely_mixed(shape());
    if (n == "thermal") {
      const auto s = shape();
      return thermal_state(s, named_hamiltonian(spec.require("H"), s),
                           parse_number("T", spec.require("T")));
    }
    if (n == "ground") {
      const auto s = shape();
      return ground_state(s, named_hamiltonian(spec.require("H"), s));
    }
    if (n == "psi_alpha") {
      return qutrit_alpha_state(parse_int("N", spec.require("N")),
                                parse_number("alpha", spec.require("alpha")));
    }
    if (n == "extremal") {
      const auto s = shape();
      const auto choice = ExtremalChoice::parse(spec.require("which"));
      return extremal_state(ExtremalSpec::make(s, parse_vec3("J", spec.require("J"))), choice.kind,
                            choice.axis);
    }
    return load_state(spec.require("path"));
  };
  QuantumState state = make();
  if (const auto* p = spec.get("noise"))
    state = mix_with_white_noise(state, parse_number("noise", *p));
  return state;
}

QuantumState build_state(std::string_view text) { return build_state(StateSpec::parse(text)); }

std::string state_spec_help() {
  return "State specs have the form name:key=value,...\n"
         "  singlet:j=1,N=2[,variant=projector|pair_product|permutation_invariant|spin1_pair]\n"
         "  dicke:j=1,N=3[,mz=0]\n"
         "  coherent:j=1,N=4,dir=0,0,1\n"
         "  mixed:j=1,N=3\n"
         "  thermal:j=1,N=3,H=bes|h5,T=3.6\n"
         "  ground:j=1/2,N=5,H=h5\n"
         "  psi_alpha:N=3,alpha=0.75\n"
         "  extremal:j=1,N=10,J=0,0,8,which=A_x|B_x|Bprime_x\n"
         "  file:path=state.json\n"
         "Any spec also takes noise=p to mix in white noise.\n";
}

}  // namespace spinsq
