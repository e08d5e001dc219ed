#include "spinsq/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "spinsq/errors.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/pipeline.hpp"
#include "spinsq/polytope.hpp"
#include "spinsq/serialize.hpp"

namespace spinsq {
namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string json_path;
  Index guard_dim = 0;
};

Json envelope(const std::string& command) { return {{"schema", 1}, {"command", command}}; }

void emit_json(const Json& j, const Globals& g, std::ostream& out, bool to_stdout = true) {
  if (to_stdout) out << j.dump(2) << '\n';
  if (!g.json_path.empty()) {
    std::ofstream f(g.json_path);
    if (!f) throw InvalidArgument("cannot write '" + g.json_path + "'");
    f << j.dump(2) << '\n';
  }
}

Json scan_json(const ScanResult& r) {
  Json j{{"parameter", r.parameter},   {"criterion", r.criterion},  {"found", r.found},
         {"bracket", {r.lo, r.hi}},    {"tolerance", r.tolerance},  {"evaluations", r.evaluations},
         {"verdict_lo", r.verdict_lo}, {"verdict_hi", r.verdict_hi}};
  j["threshold"] = r.found ? Json(r.threshold) : Json(nullptr);
  return j;
}

Vec3 parse_triplet(const std::string& text) {
  Vec3 v;
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i == 3) break;
    try {
      std::size_t used = 0;
      v(i) = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("'" + text + "' must be three numbers a,b,c");
    }
    ++i;
  }
  if (i != 3 || std::getline(ss, item, ',')) {
    throw InvalidArgument("'" + text + "' must be three numbers a,b,c");
  }
  return v;
}

Json analyze(const std::string& spec, const std::string& axes) {
  const QuantumState state = build_state(spec);
  const MomentSet m = moment_set(state);
  CriteriaReport all = evaluate_optimal_set(m);
  all.append(mapped_criteria(m));
  all.append(rearranged_criteria(m));
  Json j = envelope("analyze");
  j["state"] = spec;
  j["shape"] = shape_to_json(state.shape());
  j["moments"] = to_json(m);
  j["criteria"] = to_json(all);
  const CriteriaReport ci = evaluate_coordinate_free(moment_matrices(state));
  j["coordinate_free"] = to_json(ci);
  j["squeezing"] = to_json(squeezing_parameters(m, AxisPermutation::parse(axes)));
  Json perms = Json::object();
  for (const auto& p : AxisPermutation::all())
    perms[p.label()] = to_json(squeezing_parameters(m, p));
  j["squeezing_all"] = perms;
  j["polytope"] = to_json(membership(m));
  j["entangled"] = all.entangled() || ci.entangled();
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-squeezing entanglement criteria for ensembles of spin-j particles"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for sampling commands");
  app.add_option("--json", g.json_path, "Also write the JSON report to this file");
  app.add_option("--guard-dim", g.guard_dim, "Largest Hilbert-space dimension allowed");
  app.footer(state_spec_help());

  std::string spec, axes = "xyz";
  auto* an = app.add_subcommand("analyze", "Criteria and squeezing parameters of a state");
  an->add_option("--state", spec, "State spec")->required();
  an->add_option("--axes", axes, "Axis permutation k,l,m for the squeezing parameters");

  std::string criterion = "any";
  auto* sn = app.add_subcommand("scan-noise", "White-noise threshold of a criterion");
  sn->add_option("--state", spec, "State spec")->required();
  sn->add_option("--criterion", criterion, "Criterion key, name:tag or 'any'");

  std::string ham = "bes", j_text = "1";
  int particles = 3;
  double t_lo = 1.0, t_hi = 10.0, t_tol = 1e-3;
  auto* st = app.add_subcommand("scan-temperature", "Temperature thresholds of a thermal family");
  st->add_option("--H", ham, "Hamiltonian: bes or h5");
  st->add_option("--j", j_text, "Spin quantum number");
  st->add_option("--N", particles, "Particle count");
  st->add_option("--tmin", t_lo, "Lower end of the temperature range");
  st->add_option("--tmax", t_hi, "Upper end of the temperature range");
  st->add_option("--tol", t_tol, "Bisection tolerance");

  std::string mean_text = "0,0,0", csv_path;
  int resolution = 4;
  auto* po = app.add_subcommand("polytope", "Vertices and facet mesh as CSV");
  po->add_option("--j", j_text, "Spin quantum number")->required();
  po->add_option("--N", particles, "Particle count")->required();
  po->add_option("--J", mean_text, "Mean spin a,b,c");
  po->add_option("--resolution", resolution, "Mesh subdivisions per facet edge");
  po->add_option("--csv", csv_path, "Write the CSV here instead of stdout");

  std::string axis_text = "z";
  int shots = 1000;
  auto* me = app.add_subcommand("measure", "Simulated population readout as CSV");
  me->add_option("--state", spec, "State spec")->required();
  me->add_option("--axis", axis_text, "Readout axis x, y or z");
  me->add_option("--shots", shots, "Number of shots");
  me->add_option("--csv", csv_path, "Write the CSV here instead of stdout");

  std::vector<std::string> table_j;
  std::vector<int> table_n;
  auto* t1 = app.add_subcommand("table1", "Moments of the reference states against closed forms");
  t1->add_option("--j", table_j, "Spin quantum numbers");
  t1->add_option("--N", table_n, "Particle counts, paired with --j");

  for (auto* sub : {an, sn, st, po, me, t1}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  const Capacity saved = default_capacity();
  try {
    if (g.guard_dim > 0) {
      Capacity cap = saved;
      cap.max_dim = g.guard_dim;
      cap.max_dense_dim = std::min(cap.max_dense_dim, g.guard_dim);
      set_default_capacity(cap);
    }
    if (an->parsed()) {
      emit_json(analyze(spec, axes), g, out);
    } else if (sn->parsed()) {
      Json j = envelope("scan-noise");
      j["state"] = spec;
      j["result"] =
          scan_json(noise_threshold(build_state(spec), CriterionSelector::parse(criterion)));
      emit_json(j, g, out);
    } else if (st->parsed()) {
      const auto shape = EnsembleShape::make(particles, HalfInt::parse(j_text));
      const CMatrix h = ham == "bes"  ? bes_hamiltonian(shape)
                        : ham == "h5" ? h5_hamiltonian(shape)
                                      : throw InvalidArgument("unknown Hamiltonian '" + ham + "'");
      const auto t = temperature_thresholds(h, shape, t_lo, t_hi, t_tol);
      Json j = envelope("scan-temperature");
      j["hamiltonian"] = ham;
      j["shape"] = shape_to_json(shape);
      j["T_s"] = scan_json(t.T_s);
      j["T_ppt"] = scan_json(t.T_ppt);
      emit_json(j, g, out);
    } else if (po->parsed()) {
      const auto shape = EnsembleShape::make(particles, HalfInt::parse(j_text));
      const auto v = vertices(shape, parse_triplet(mean_text));
      if (csv_path.empty()) {
        write_csv(out, v, resolution);
      } else {
        std::ofstream f(csv_path);
        if (!f) throw InvalidArgument("cannot write '" + csv_path + "'");
        write_csv(f, v, resolution);
      }
      if (!g.json_path.empty()) {
        Json j = envelope("polytope");
        j["vertices"] = to_json(v);
        emit_json(j, g, out, false);
      }
    } else if (me->parsed()) {
      const QuantumState state = build_state(spec);
      const auto rec = simulate_population_measurement(state, parse_axis(axis_text), shots, g.seed);
      if (csv_path.empty()) {
        write_csv(out, rec);
      } else {
        std::ofstream f(csv_path);
        if (!f) throw InvalidArgument("cannot write '" + csv_path + "'");
        write_csv(f, rec);
      }
      if (!g.json_path.empty()) {
        EstimatedMoments est{state.shape(), shots};
        accumulate_estimates(rec, est);
        Json j = envelope("measure");
        j["state"] = spec;
        j["axis"] = axis_text;
        j["seed"] = g.seed;
        const int l = index_of(rec.axis);
        j["estimate"] = {{"J", {est.J[l].value, est.J[l].std_error}},
                         {"K", {est.K[l].value, est.K[l].std_error}},
                         {"M", {est.M[l].value, est.M[l].std_error}},
                         {"Ktilde", {est.Ktilde[l].value, est.Ktilde[l].std_error}}};
        emit_json(j, g, out, false);
      }
    } else if (t1->parsed()) {
      if (table_j.size() != table_n.size()) throw InvalidArgument("--j and --N must pair up");
      if (table_j.empty()) {
        table_j = {"1/2", "1", "1"};
        table_n = {4, 2, 3};
      }
      Json rows = Json::array();
      for (std::size_t i = 0; i < table_j.size(); ++i) {
        const auto shape = EnsembleShape::make(table_n[i], HalfInt::parse(table_j[i]));
        for (const auto& r : table1(shape)) {
          rows.push_back({{"shape", shape_to_json(shape)},
                          {"state", r.state},
                          {"computed", to_json(r.computed)},
                          {"closed_form",
                           {{"J", {r.J(0), r.J(1), r.J(2)}},
                            {"K", {r.K(0), r.K(1), r.K(2)}},
                            {"M", {r.M(0), r.M(1), r.M(2)}}}},
                          {"max_error", r.max_error}});
        }
      }
      Json j = envelope("table1");
      j["rows"] = rows;
      emit_json(j, g, out);
    }
  } catch (const CapacityError& e) {
    set_default_capacity(saved);
    err << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const InvalidArgument& e) {
    set_default_capacity(saved);
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedConstant& e) {
    set_default_capacity(saved);
    err << "unsupported: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    set_default_capacity(saved);
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  set_default_capacity(saved);
  return kExitOk;
}

}  // namespace spinsq
