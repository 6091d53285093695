#pragma once

#include <cstdint>
#include <vector>

#include "evgap/image.hpp"
#include "evgap/types.hpp"

namespace evgap {

struct HistogramPair {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> on;   // row-major counts
  std::vector<std::uint32_t> off;

  bool operator==(const HistogramPair&) const = default;
};

struct EventFrame {
  ImageU8 pixels;
  std::uint64_t t_start = 0;
  std::uint64_t period_us = kDefaultPeriodUs;

  bool operator==(const EventFrame&) const = default;
};

inline constexpr int kDefaultGain = 3;

// Counts events with t in [t_start, t_start + period_us). The sum of both
// grids equals the number of in-window events.
HistogramPair accumulate_histograms(const EventStream& stream,
                                    std::uint64_t t_start,
                                    std::uint64_t period_us);

// pixel = clamp(128 + gain * (on - off), 0, 255)
EventFrame combine_to_frame(const HistogramPair& hist, int gain,
                            std::uint64_t t_start, std::uint64_t period_us);

// Number of half-open windows tiling [first.t, last.t], anchored at the
// first event timestamp.
std::uint64_t window_count(const EventStream& stream, std::uint64_t period_us);

// One frame per window, empty windows included, ordered by t_start.
// Windows are processed in parallel; output is identical to the serial
// reference in ref/.
std::vector<EventFrame> frame_recording(const EventStream& stream,
                                        std::uint64_t period_us, int gain);

}  // namespace evgap
