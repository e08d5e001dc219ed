#include "spinsq/polytope.hpp"

#include "spinsq/errors.hpp"

namespace spinsq {
namespace {

std::string vname(char kind, Axis a) { return std::string{kind, '_', axis_name(a)}; }

}  // namespace

PolytopeVertices vertices(const EnsembleShape& shape, const Vec3& mean) {
  const double n = shape.particles();
  const double j = shape.j();
  if (mean.norm() > n * j * (1.0 + 1e-12)) throw InvalidArgument("mean spin exceeds Nj");
  PolytopeVertices v{shape, mean, (n - 1.0) / n};
  const Vec3 sq = mean.cwiseProduct(mean);
  for (Axis k : kAxes) {
    const int i = index_of(k);
    Vec3 a = v.kappa * sq;
    Vec3 b = v.kappa * sq;
    const double others = sq.sum() - sq(i);
    a(i) = n * (n - 1.0) * j * j - v.kappa * others;
    b(i) = sq(i) + others / n - n * j * j;
    v.A[i] = a;
    v.B[i] = b;
  }
  return v;
}

FacetMargins membership(const MomentSet& m) {
  const CriteriaReport rep = evaluate_optimal_set(m, false);
  FacetMargins out;
  out.facets.push_back({"A_x-A_y-A_z", "symmsatin", rep.at("symmsatin").margin});
  out.facets.push_back({"B_x-B_y-B_z", "isoin", rep.at("isoin").margin});
  for (Axis k : kAxes) {
    const auto [l, mm] = other_axes(k);
    out.facets.push_back({vname('B', k) + "-" + vname('A', l) + "-" + vname('A', mm),
                          std::string("betosp_") + axis_name(k),
                          rep.at(std::string("betosp_") + axis_name(k)).margin});
  }
  for (Axis mm : kAxes) {
    const auto [k, l] = other_axes(mm);
    const std::string key = "twovar_" + pair_label(k, l);
    const Axis a = index_of(k) < index_of(l) ? k : l;
    const Axis b = index_of(k) < index_of(l) ? l : k;
    out.facets.push_back(
        {vname('B', a) + "-" + vname('B', b) + "-" + vname('A', mm), key, rep.at(key).margin});
  }
  for (std::size_t i = 0; i < out.facets.size(); ++i) {
    if (out.facets[i].margin < out.facets[out.nearest].margin) out.nearest = i;
    if (rep.at(out.facets[i].criterion).violated) {
      out.member = false;
      if (!out.violated || out.facets[i].margin < out.facets[*out.violated].margin) {
        out.violated = i;
      }
    }
  }
  return out;
}

FacetMargins facet_margins(const EnsembleShape& shape, const Vec3& mean, const Vec3& point) {
  // Only the sum of the local moments enters the facets, so spread it evenly.
  const double j = shape.j();
  const Vec3 local = Vec3::Constant(shape.particles() * j * (j + 1.0) / 3.0);
  return membership(MomentSet::from_values(shape, mean, point + local, local));
}

std::vector<std::pair<std::string, std::array<Vec3, 3>>> facet_triangles(
    const PolytopeVertices& v) {
  std::vector<std::pair<std::string, std::array<Vec3, 3>>> out;
  out.push_back({"A_x-A_y-A_z", {v.A[0], v.A[1], v.A[2]}});
  out.push_back({"B_x-B_y-B_z", {v.B[0], v.B[1], v.B[2]}});
  for (Axis k : kAxes) {
    const auto [l, m] = other_axes(k);
    out.push_back({vname('B', k) + "-" + vname('A', l) + "-" + vname('A', m),
                   {v.B[index_of(k)], v.A[index_of(l)], v.A[index_of(m)]}});
  }
  for (Axis m : kAxes) {
    auto [k, l] = other_axes(m);
    if (index_of(k) > index_of(l)) std::swap(k, l);
    out.push_back({vname('B', k) + "-" + vname('B', l) + "-" + vname('A', m),
                   {v.B[index_of(k)], v.B[index_of(l)], v.A[index_of(m)]}});
  }
  return out;
}

std::vector<MeshPoint> facet_mesh(const PolytopeVertices& v, int resolution) {
  if (resolution < 1) throw InvalidArgument("mesh resolution must be positive");
  std::vector<MeshPoint> out;
  for (const auto& [name, tri] : facet_triangles(v)) {
    for (int a = 0; a <= resolution; ++a) {
      for (int b = 0; a + b <= resolution; ++b) {
        const double u = static_cast<double>(a) / resolution;
        const double w = static_cast<double>(b) / resolution;
        out.push_back({name, (1.0 - u - w) * tri[0] + u * tri[1] + w * tri[2]});
      }
    }
  }
  return out;
}

}  // namespace spinsq
