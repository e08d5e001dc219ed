#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spinsq/moments.hpp"

namespace spinsq {

/// Population readout after rotating `axis` onto z.
struct MeasurementRecord {
  EnsembleShape shape;
  Axis axis = Axis::Z;
  int shots = 0;
  std::uint64_t seed = 0;
  std::vector<double> chi;               // outcome labels j, j-1, ..., -j
  std::vector<std::vector<int>> counts;  // counts[shot][outcome], each row sums to N
};

/// Joint distribution over the D product outcomes of the local j_axis readout.
RVector outcome_distribution(const QuantumState& state, Axis axis);

/// Deterministic for a fixed (seed, axis). Throws InvalidArgument for shots < 1.
MeasurementRecord simulate_population_measurement(const QuantumState& state, Axis axis, int shots,
                                                  std::uint64_t seed);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EstimatedMoments {
  EnsembleShape shape;
  int shots = 0;
  std::array<Estimate, 3> J;
  std::array<Estimate, 3> K;
  std::array<Estimate, 3> M;
  std::array<Estimate, 3> Ktilde;

  MomentSet to_moment_set() const;
};

/// Per-axis estimates from one record: total projection mean, its second
/// moment, and the population estimator sum_chi N_chi chi^2.
void accumulate_estimates(const MeasurementRecord& record, EstimatedMoments& out);

/// Simulates x, y and z readouts with independent streams. Throws
/// InvalidArgument for shots < 2.
EstimatedMoments estimate_moment_set(const QuantumState& state, int shots, std::uint64_t seed);

}  // namespace spinsq
