#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vsl/highway.hpp"

namespace vsl {

/// One realization of all uncertain inputs over the horizon:
/// mainstream inflow, initial densities and ramp fractions.
struct ScenarioSample {
  std::vector<double> omega;                // length T, veh/h
  std::vector<double> rho0;                 // length n, veh/km
  std::vector<std::vector<double>> r_in;    // n x T, in [0,1)
  std::vector<std::vector<double>> r_out;   // n x T, in [0,1)
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Uniform sampling boxes for every random quantity. rho0 ranges are
/// per-edge so the MPC loop can pin them to the measured plant state.
struct SampleSpec {
  Range omega;
  std::vector<Range> rho0;   // per edge; a single entry broadcasts
  Range r_in;
  Range r_out;
  std::uint64_t seed = 0;
};

/// Per-edge rho0 range, broadcasting a single entry.
Range rho0_range(const SampleSpec& spec, int e);

/// Throws std::invalid_argument on invalid ranges for this config.
void validate(const SampleSpec& spec, const HighwayConfig& cfg);

/// Throws std::invalid_argument when the sample violates an invariant
/// (dimensions, fraction bounds, rho0 vs jam density, ramp flags).
void validate(const ScenarioSample& sample, const HighwayConfig& cfg);

/// Draws `count` i.i.d. samples. Deterministic given (spec.seed, stream);
/// distinct streams are independent (validation sets use a disjoint stream).
std::vector<ScenarioSample> generate_samples(const HighwayConfig& cfg,
                                             const SampleSpec& spec, int count,
                                             std::uint64_t stream = 0);

/// JSON sample file: top-level array of {omega, rho0, r_in, r_out}.
std::vector<ScenarioSample> load_samples(const std::string& path,
                                         const HighwayConfig& cfg);
std::vector<ScenarioSample> parse_samples(const std::string& json_text,
                                          const HighwayConfig& cfg);
std::string samples_to_json(const std::vector<ScenarioSample>& samples);
void save_samples(const std::string& path,
                  const std::vector<ScenarioSample>& samples);
/// CSV mirror of the JSON layout, one row per (sample, edge).
std::string samples_to_csv(const std::vector<ScenarioSample>& samples);

}  // namespace vsl
