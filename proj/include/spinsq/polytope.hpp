#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinsq/criteria.hpp"

namespace spinsq {

/// Extreme points of the separable region in (<Jt_x^2>, <Jt_y^2>, <Jt_z^2>)
/// space for a fixed mean spin.
struct PolytopeVertices {
  EnsembleShape shape;
  Vec3 mean = Vec3::Zero();
  double kappa = 0.0;  // (N-1)/N
  std::array<Vec3, 3> A;
  std::array<Vec3, 3> B;
};

/// Throws InvalidArgument when |mean| > Nj.
PolytopeVertices vertices(const EnsembleShape& shape, const Vec3& mean);

struct FacetMargin {
  std::string facet;      // e.g. "B_x-A_y-A_z"
  std::string criterion;  // matching criterion key, e.g. "betosp_x"
  double margin = 0.0;
};

struct FacetMargins {
  std::vector<FacetMargin> facets;
  bool member = true;
  /// Facet with the smallest margin.
  std::size_t nearest = 0;
  /// Most violated facet, when the point lies outside.
  std::optional<std::size_t> violated;
};

/// The eight facets: A_x-A_y-A_z (symmsatin), B_x-B_y-B_z (isoin),
/// B_k-A_l-A_m (betosp_k) and B_k-B_l-A_m (twovar_kl).
FacetMargins membership(const MomentSet& m);

/// Margins of an arbitrary point in modified-second-moment space.
FacetMargins facet_margins(const EnsembleShape& shape, const Vec3& mean, const Vec3& point);

/// The three vertices spanning each facet, keyed by facet name.
std::vector<std::pair<std::string, std::array<Vec3, 3>>> facet_triangles(const PolytopeVertices& v);

struct MeshPoint {
  std::string facet;
  Vec3 point;
};

/// Barycentric grid with `resolution` subdivisions per edge on every facet.
std::vector<MeshPoint> facet_mesh(const PolytopeVertices& v, int resolution);

}  // namespace spinsq
