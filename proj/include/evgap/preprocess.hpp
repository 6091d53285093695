#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "evgap/image.hpp"
#include "evgap/manifest.hpp"
#include "evgap/types.hpp"

namespace evgap {

struct TimeRange {
  std::uint64_t t_from = 0;
  std::uint64_t t_to = 0;  // inclusive
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  double low_speed_kmh = 15.0;
  double low_angle_deg = 5.0;
  double low_angle_prune_prob = 0.7;
  double max_angle_deg = 180.0;
  int target_width = 224;
  int target_height = 224;
  // Recordings without an entry are kept whole; an entry with no ranges
  // removes the recording entirely.
  std::map<std::string, std::vector<TimeRange>> keep_ranges;
};

PipelineConfig parse_pipeline_config(std::string_view json_text);
std::string pipeline_config_json(const PipelineConfig& cfg);

struct PruneReport {
  std::size_t input = 0;
  std::size_t trim = 0;
  std::size_t low_speed = 0;
  std::size_t low_steering = 0;
  std::size_t extreme_steering = 0;
  std::size_t output = 0;

  std::size_t removed() const {
    return trim + low_speed + low_steering + extreme_steering;
  }
};

std::string prune_report_json(const PruneReport& report);

// Keeps samples whose t lies inside any range (inclusive bounds; overlapping
// ranges union).
std::vector<Sample> trim_recording(std::span<const Sample> samples,
                                   std::span<const TimeRange> keep_ranges);

// Keeps speed >= threshold ("below" is strict: the threshold itself stays).
std::vector<Sample> prune_low_speed(std::span<const Sample> samples,
                                    double threshold_kmh = 15.0);

// |steering| >= angle_deg always kept; smaller angles dropped with the given
// probability, decided per sample id so the outcome is order-independent.
std::vector<Sample> prune_low_steering(std::span<const Sample> samples,
                                       std::uint64_t seed,
                                       double angle_deg = 5.0,
                                       double prune_prob = 0.7);

// Keeps |steering| <= max_angle_deg ("over" is strict: the bound stays).
std::vector<Sample> prune_extreme_steering(std::span<const Sample> samples,
                                           double max_angle_deg = 180.0);

// steering_deg / 180; requires |steering_deg| <= 180.
double rescale_steering(double steering_deg);

// Divides every pixel by 255.
ImageF normalize_pixels(const ImageU8& img);

// Half-pixel-center bilinear: src = (dst + 0.5) * scale - 0.5, edge-clamped.
// Output values never leave the input's [min, max]. Parallel across rows.
ImageF resize_bilinear(const ImageF& img, int out_height, int out_width);

struct FilterResult {
  std::vector<Sample> samples;
  PruneReport report;
};

// Metadata stages in order: trim, low speed, low steering, extreme angle;
// then steering_scaled is filled in. Frame payloads go through
// process_frame separately.
FilterResult run_pipeline_filters(std::span<const Sample> samples,
                                  const PipelineConfig& cfg);

// normalize then resize to the configured target size
ImageF process_frame(const ImageU8& img, const PipelineConfig& cfg);

}  // namespace evgap
