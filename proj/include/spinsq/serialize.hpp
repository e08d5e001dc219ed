#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "spinsq/criteria.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/polytope.hpp"

namespace spinsq {

using Json = nlohmann::json;

/// {"shape":{"N","two_j"},"kind":"pure"|"mixed","data":[[re,im],...]},
/// with mixed data in row-major order.
Json state_to_json(const QuantumState& state);
/// Throws InvalidArgument on malformed input.
QuantumState state_from_json(const Json& j);
QuantumState load_state(const std::string& path);
void save_state(const QuantumState& state, const std::string& path);

Json shape_to_json(const EnsembleShape& shape);
Json to_json(const MomentSet& m);
Json to_json(const CriterionRecord& r);
/// Records keyed by criterion key.
Json to_json(const CriteriaReport& r);
Json to_json(const Parameter& p);
Json to_json(const SqueezingReport& r);
Json to_json(const FacetMargins& f);
Json to_json(const PolytopeVertices& v);
Json to_json(const EstimatedMoments& e);
Json to_json(const PptReport& p);

/// One row per shot, one column per outcome chi.
void write_csv(std::ostream& out, const MeasurementRecord& record);
/// kind,facet,x,y,z rows for the vertices followed by the facet mesh.
void write_csv(std::ostream& out, const PolytopeVertices& v, int resolution);

}  // namespace spinsq
