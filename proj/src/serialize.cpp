#include "spinsq/serialize.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "spinsq/errors.hpp"

namespace spinsq {
namespace {

Json vec3(const Vec3& v) { return Json::array({v(0), v(1), v(2)}); }

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const char* sense_name(Sense s) { return s == Sense::GreaterEqual ? ">=" : "<="; }

}  // namespace

Json shape_to_json(const EnsembleShape& shape) {
  return {{"N", shape.particles()}, {"two_j", shape.spin().twice()}};
}

Json state_to_json(const QuantumState& state) {
  Json out;
  out["shape"] = shape_to_json(state.shape());
  Json data = Json::array();
  if (state.is_pure()) {
    out["kind"] = "pure";
    for (const auto& z : state.vector()) data.push_back({z.real(), z.imag()});
  } else {
    out["kind"] = "mixed";
    const CMatrix rho = state.density_matrix();
    for (Index r = 0; r < rho.rows(); ++r)
      for (Index c = 0; c < rho.cols(); ++c) data.push_back({rho(r, c).real(), rho(r, c).imag()});
  }
  out["data"] = std::move(data);
  return out;
}

QuantumState state_from_json(const Json& j) {
  try {
    const auto& sh = j.at("shape");
    const auto shape =
        EnsembleShape::make(sh.at("N").get<int>(), HalfInt::from_twice(sh.at("two_j").get<int>()));
    const std::string kind = j.at("kind").get<std::string>();
    const auto& data = j.at("data");
    auto entry = [&](std::size_t i) {
      return Complex(data.at(i).at(0).get<double>(), data.at(i).at(1).get<double>());
    };
    const Index d = shape.dim();
    if (kind == "pure") {
      if (data.size() != static_cast<std::size_t>(d)) throw InvalidArgument("pure state length");
      CVector psi(d);
      for (Index i = 0; i < d; ++i) psi(i) = entry(i);
      return QuantumState::pure(shape, std::move(psi));
    }
    if (kind == "mixed") {
      shape.require_dense();
      if (data.size() != static_cast<std::size_t>(d * d)) {
        throw InvalidArgument("mixed state length");
      }
      CMatrix rho(d, d);
      for (Index r = 0; r < d; ++r)
        for (Index c = 0; c < d; ++c) rho(r, c) = entry(r * d + c);
      return QuantumState::mixed(shape, std::move(rho));
    }
    throw InvalidArgument("state kind must be 'pure' or 'mixed'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed state JSON: ") + e.what());
  }
}

QuantumState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open state file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("state file '" + path + "' is not JSON: " + e.what());
  }
  return state_from_json(j);
}

void save_state(const QuantumState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write state file '" + path + "'");
  out << state_to_json(state).dump() << '\n';
}

Json to_json(const MomentSet& m) {
  return {{"shape", shape_to_json(m.shape)},
          {"frame", {vec3(m.frame.axis(0)), vec3(m.frame.axis(1)), vec3(m.frame.axis(2))}},
          {"J", vec3(m.J)},
          {"K", vec3(m.K)},
          {"M", vec3(m.M)},
          {"Ktilde", vec3(m.Ktilde)},
          {"var", vec3(m.var)},
          {"var_tilde", vec3(m.var_tilde)}};
}

Json to_json(const CriterionRecord& r) {
  return {{"name", r.name},
          {"tag", r.tag},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"sense", sense_name(r.sense)},
          {"margin", r.margin},
          {"violated", r.violated},
          {"saturated", r.saturated}};
}

Json to_json(const CriteriaReport& r) {
  Json out = Json::object();
  for (const auto& rec : r.records) out[rec.key()] = to_json(rec);
  return out;
}

Json to_json(const Parameter& p) {
  Json out{{"value", optional_number(p.value)}};
  if (!p.present()) out["reason"] = p.reason;
  return out;
}

Json to_json(const SqueezingReport& r) {
  return {{"axes", r.axes.label()},
          {"xi_s2", to_json(r.xi_s2)},
          {"xi_sj2", to_json(r.xi_sj2)},
          {"xi_os2", to_json(r.xi_os2)},
          {"xi_singlet2", to_json(r.xi_singlet2)},
          {"xi_planar2", to_json(r.xi_planar2)}};
}

Json to_json(const FacetMargins& f) {
  Json facets = Json::array();
  for (const auto& x : f.facets) {
    facets.push_back({{"facet", x.facet}, {"criterion", x.criterion}, {"margin", x.margin}});
  }
  Json out{{"member", f.member}, {"facets", facets}, {"nearest", f.facets.at(f.nearest).facet}};
  out["violated"] = f.violated ? Json(f.facets.at(*f.violated).facet) : Json(nullptr);
  return out;
}

Json to_json(const PolytopeVertices& v) {
  Json out{{"shape", shape_to_json(v.shape)}, {"mean", vec3(v.mean)}, {"kappa", v.kappa}};
  for (Axis a : kAxes) {
    out[std::string("A_") + axis_name(a)] = vec3(v.A[index_of(a)]);
    out[std::string("B_") + axis_name(a)] = vec3(v.B[index_of(a)]);
  }
  return out;
}

Json to_json(const EstimatedMoments& e) {
  auto arr = [](const std::array<Estimate, 3>& x) {
    Json out = Json::object();
    for (Axis a : kAxes) {
      const auto& v = x[index_of(a)];
      out[std::string(1, axis_name(a))] = {{"value", v.value}, {"stderr", v.std_error}};
    }
    return out;
  };
  return {{"shape", shape_to_json(e.shape)},
          {"shots", e.shots},
          {"J", arr(e.J)},
          {"K", arr(e.K)},
          {"M", arr(e.M)},
          {"Ktilde", arr(e.Ktilde)}};
}

Json to_json(const PptReport& p) {
  Json cuts = Json::array();
  for (const auto& c : p.cuts) {
    cuts.push_back({{"mask", c.mask}, {"min_eigenvalue", c.min_eigenvalue}, {"npt", c.npt}});
  }
  return {{"cuts", cuts}, {"any_npt", p.any_npt()}};
}

void write_csv(std::ostream& out, const MeasurementRecord& record) {
  out << "shot";
  for (double chi : record.chi)
    out << ",N_" << HalfInt::from_twice(static_cast<int>(std::lround(2 * chi))).to_string();
  out << '\n';
  for (std::size_t s = 0; s < record.counts.size(); ++s) {
    out << s;
    for (int c : record.counts[s]) out << ',' << c;
    out << '\n';
  }
}

void write_csv(std::ostream& out, const PolytopeVertices& v, int resolution) {
  out << "kind,label,x,y,z\n";
  auto row = [&](const char* kind, const std::string& label, const Vec3& p) {
    out << kind << ',' << label << ',' << p(0) << ',' << p(1) << ',' << p(2) << '\n';
  };
  for (Axis a : kAxes) {
    row("vertex", std::string("A_") + axis_name(a), v.A[index_of(a)]);
    row("vertex", std::string("B_") + axis_name(a), v.B[index_of(a)]);
  }
  for (const auto& p : facet_mesh(v, resolution)) row("mesh", p.facet, p.point);
}

}  // namespace spinsq
