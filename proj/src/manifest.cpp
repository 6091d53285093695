#include "evgap/manifest.hpp"

#include <fstream>

#include "json.hpp"

namespace evgap {

namespace {

using nlohmann::json;

json optional_num(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> get_optional_num(const json& j, const char* key,
                                       std::size_t line_no) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number()) {
    throw FormatError("manifest line " + std::to_string(line_no) + ": " + key +
                      " must be a number or null");
  }
  return j[key].get<double>();
}

std::string get_string(const json& j, const char* key, std::size_t line_no) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw FormatError("manifest line " + std::to_string(line_no) +
                      ": missing string field " + key);
  }
  return j[key].get<std::string>();
}

}  // namespace

std::string manifest_line(const Sample& s) {
  // nlohmann::json keeps object keys sorted, which makes lines reproducible
  json j;
  j["sample_id"] = s.sample_id;
  j["recording_id"] = s.recording_id;
  j["sensor"] = to_string(s.sensor);
  j["lighting"] = s.lighting ? json(to_string(*s.lighting)) : json(nullptr);
  j["t"] = s.t;
  j["steering_deg"] = optional_num(s.steering_deg);
  j["speed_kmh"] = optional_num(s.speed_kmh);
  j["steering_scaled"] = optional_num(s.steering_scaled);
  j["frame_path"] = s.frame_path;
  j["split"] = s.split ? json(to_string(*s.split)) : json(nullptr);
  j["bias_set"] = s.bias_set ? json(to_string(*s.bias_set)) : json(nullptr);
  return j.dump();
}

Sample parse_manifest_line(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError("manifest line " + std::to_string(line_no) +
                      ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw FormatError("manifest line " + std::to_string(line_no) +
                      ": expected an object");
  }
  Sample s;
  s.sample_id = get_string(j, "sample_id", line_no);
  s.recording_id = get_string(j, "recording_id", line_no);
  try {
    s.sensor = sensor_from_string(get_string(j, "sensor", line_no));
    if (j.contains("lighting") && !j["lighting"].is_null()) {
      s.lighting = lighting_from_string(get_string(j, "lighting", line_no));
    }
    if (j.contains("split") && !j["split"].is_null()) {
      s.split = split_from_string(get_string(j, "split", line_no));
    }
    if (j.contains("bias_set") && !j["bias_set"].is_null()) {
      s.bias_set = bias_from_string(get_string(j, "bias_set", line_no));
    }
  } catch (const FormatError& e) {
    throw FormatError("manifest line " + std::to_string(line_no) + ": " +
                      e.what());
  }
  if (!j.contains("t") || !j["t"].is_number_unsigned()) {
    throw FormatError("manifest line " + std::to_string(line_no) +
                      ": t must be a non-negative integer");
  }
  s.t = j["t"].get<std::uint64_t>();
  s.steering_deg = get_optional_num(j, "steering_deg", line_no);
  s.speed_kmh = get_optional_num(j, "speed_kmh", line_no);
  s.steering_scaled = get_optional_num(j, "steering_scaled", line_no);
  s.frame_path = get_string(j, "frame_path", line_no);
  if (s.sample_id.empty()) {
    throw FormatError("manifest line " + std::to_string(line_no) +
                      ": empty sample_id");
  }
  return s;
}

std::vector<Sample> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Sample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(parse_manifest_line(line, line_no));
  }
  return out;
}

void write_manifest(const std::filesystem::path& path,
                    std::span<const Sample> samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const Sample& s : samples) {
    out << manifest_line(s) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

std::filesystem::path resolve_frame_path(
    const std::filesystem::path& manifest_path, const Sample& s) {
  std::filesystem::path frame(s.frame_path);
  if (frame.is_absolute()) return frame;
  return manifest_path.parent_path() / frame;
}

}  // namespace evgap
