#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evgap/manifest.hpp"
#include "evgap/types.hpp"

namespace evgap {

inline constexpr double kTrainFraction = 0.85;
inline constexpr double kDefaultOppositeRatio = 0.25;

struct TemporalSplitResult {
  std::vector<Sample> train;  // first floor(0.85 n), tagged TRAIN
  std::vector<Sample> test;   // remainder, tagged TEST
};

// Chronological per-recording split; samples must be sorted by t.
TemporalSplitResult temporal_split(std::span<const Sample> recording_samples);

// All target samples plus min(|opposite|, floor(ratio * |target|)) opposite
// samples, selected without replacement by per-id seeded keys; the chosen
// set does not depend on input order.
std::vector<Sample> build_biased_set(std::span<const Sample> target,
                                     std::span<const Sample> opposite,
                                     double ratio, std::uint64_t seed);

// Target samples only; rejects mixed-lighting input.
std::vector<Sample> build_pure_set(std::span<const Sample> target);

// Emission-time checks: per-recording max TRAIN t < min TEST t, single
// lighting in the test set, opposite count within the floor(ratio * target)
// bound. Throws ValidationError.
void validate_split_outputs(std::span<const Sample> train,
                            std::span<const Sample> test, BiasSet bias,
                            double ratio);

}  // namespace evgap
