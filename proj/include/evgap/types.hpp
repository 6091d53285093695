#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evgap {

inline constexpr int kDefaultSensorWidth = 346;
inline constexpr int kDefaultSensorHeight = 260;
inline constexpr std::uint64_t kDefaultPeriodUs = 50000;

// Error taxonomy: FormatError for malformed input, TruncationError when a
// payload does not match its declared length, ValidationError for
// well-formed data that breaks an invariant.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

enum class Polarity : std::uint8_t { Off = 0, On = 1 };

struct Event {
  std::uint64_t t = 0;  // microseconds
  std::uint16_t x = 0;  // column
  std::uint16_t y = 0;  // row
  Polarity polarity = Polarity::Off;

  bool operator==(const Event&) const = default;
};

// Events are sorted by t (non-decreasing) and bounded by width/height.
struct EventStream {
  std::uint16_t width = kDefaultSensorWidth;
  std::uint16_t height = kDefaultSensorHeight;
  std::vector<Event> events;

  bool operator==(const EventStream&) const = default;
};

// Timestamps within a series are strictly increasing.
struct TelemetryRecord {
  std::uint64_t t = 0;  // microseconds
  double steering_deg = 0.0;
  double speed_kmh = 0.0;

  bool operator==(const TelemetryRecord&) const = default;
};

enum class Sensor { Dvs, Aps };
enum class Lighting { Day, Night };
enum class SplitTag { Train, Test };
enum class BiasSet { DayBiased, NightBiased, PureDay, PureNight };

inline std::string to_string(Sensor s) {
  return s == Sensor::Dvs ? "DVS" : "APS";
}

inline std::string to_string(Lighting l) {
  return l == Lighting::Day ? "DAY" : "NIGHT";
}

inline std::string to_string(SplitTag s) {
  return s == SplitTag::Train ? "TRAIN" : "TEST";
}

inline std::string to_string(BiasSet b) {
  switch (b) {
    case BiasSet::DayBiased: return "DAY_BIASED";
    case BiasSet::NightBiased: return "NIGHT_BIASED";
    case BiasSet::PureDay: return "PURE_DAY";
    case BiasSet::PureNight: return "PURE_NIGHT";
  }
  return "";
}

inline Sensor sensor_from_string(std::string_view s) {
  if (s == "DVS") return Sensor::Dvs;
  if (s == "APS") return Sensor::Aps;
  throw FormatError("unknown sensor: " + std::string(s));
}

inline Lighting lighting_from_string(std::string_view s) {
  if (s == "DAY") return Lighting::Day;
  if (s == "NIGHT") return Lighting::Night;
  throw FormatError("unknown lighting: " + std::string(s));
}

inline SplitTag split_from_string(std::string_view s) {
  if (s == "TRAIN") return SplitTag::Train;
  if (s == "TEST") return SplitTag::Test;
  throw FormatError("unknown split: " + std::string(s));
}

inline BiasSet bias_from_string(std::string_view s) {
  if (s == "DAY_BIASED") return BiasSet::DayBiased;
  if (s == "NIGHT_BIASED") return BiasSet::NightBiased;
  if (s == "PURE_DAY") return BiasSet::PureDay;
  if (s == "PURE_NIGHT") return BiasSet::PureNight;
  throw FormatError("unknown bias set: " + std::string(s));
}

// Target lighting of a biased or pure training set.
inline Lighting bias_target(BiasSet b) {
  return (b == BiasSet::DayBiased || b == BiasSet::PureDay) ? Lighting::Day
                                                            : Lighting::Night;
}

}  // namespace evgap
