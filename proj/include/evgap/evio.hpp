#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "evgap/types.hpp"

namespace evgap {

// EVT1 container, little-endian throughout:
//   magic "EVT1" (4) | width u16 | height u16 | count u64
// followed by `count` 13-byte records: t u64 | x u16 | y u16 | polarity u8
// (0 = OFF, 1 = ON, anything else invalid).
inline constexpr std::size_t kEvtHeaderBytes = 16;
inline constexpr std::size_t kEvtRecordBytes = 13;
inline constexpr char kEvtMagic[4] = {'E', 'V', 'T', '1'};

EventStream parse_evt(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_evt(const EventStream& stream);

EventStream read_evt_file(const std::filesystem::path& path);
void write_evt_file(const std::filesystem::path& path, const EventStream& stream);

// Bounds, timestamp order and polarity values; throws ValidationError naming
// the first offending record.
void validate_stream(const EventStream& stream);

// CSV, header exactly "t_us,steering_deg,speed_kmh". Timestamps strictly
// increasing, speeds non-negative.
std::vector<TelemetryRecord> parse_telemetry(std::string_view text);
std::vector<TelemetryRecord> read_telemetry_file(const std::filesystem::path& path);

struct AlignedTelemetry {
  double steering_deg = 0.0;
  double speed_kmh = 0.0;
  bool aligned = false;  // false when no record lies within kAlignMaxGapUs
};

inline constexpr std::uint64_t kAlignMaxGapUs = 100000;

// Nearest record by |dt| for each frame timestamp, ties toward the earlier
// record. Depends only on the timestamp values, not their order.
std::vector<AlignedTelemetry> align_telemetry(
    std::span<const std::uint64_t> frame_ts,
    std::span<const TelemetryRecord> telemetry);

}  // namespace evgap
