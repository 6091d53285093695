#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgap/types.hpp"

namespace evgap {

// One dataset entry. Manifests are JSONL, one entry per line; frame_path is
// stored relative to the manifest file's directory so output trees stay
// relocatable. steering/speed are null until telemetry has been aligned,
// steering_scaled/split/bias_set appear as the pipeline advances.
struct Sample {
  std::string sample_id;
  std::string recording_id;
  Sensor sensor = Sensor::Dvs;
  std::optional<Lighting> lighting;
  std::uint64_t t = 0;  // microseconds
  std::optional<double> steering_deg;
  std::optional<double> speed_kmh;
  std::optional<double> steering_scaled;
  std::string frame_path;
  std::optional<SplitTag> split;
  std::optional<BiasSet> bias_set;
};

std::string manifest_line(const Sample& s);
Sample parse_manifest_line(std::string_view line, std::size_t line_no);

std::vector<Sample> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    std::span<const Sample> samples);

// Absolute location of a sample's frame given the manifest it came from.
std::filesystem::path resolve_frame_path(
    const std::filesystem::path& manifest_path, const Sample& s);

}  // namespace evgap
