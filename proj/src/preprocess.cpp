#include "evgap/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "evgap/rng.hpp"
#include "json.hpp"

namespace evgap {

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw FormatError(std::string("config field ") + key +
                      " must be a number");
  }
  return j[key].get<double>();
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("config must be a JSON object");

  PipelineConfig cfg;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw FormatError("config field seed must be a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.low_speed_kmh = get_number(j, "low_speed_kmh", cfg.low_speed_kmh);
  cfg.low_angle_deg = get_number(j, "low_angle_deg", cfg.low_angle_deg);
  cfg.low_angle_prune_prob =
      get_number(j, "low_angle_prune_prob", cfg.low_angle_prune_prob);
  cfg.max_angle_deg = get_number(j, "max_angle_deg", cfg.max_angle_deg);
  cfg.target_width =
      static_cast<int>(get_number(j, "target_width", cfg.target_width));
  cfg.target_height =
      static_cast<int>(get_number(j, "target_height", cfg.target_height));
  if (cfg.low_angle_prune_prob < 0.0 || cfg.low_angle_prune_prob > 1.0) {
    throw ValidationError("low_angle_prune_prob must be in [0, 1]");
  }
  if (cfg.target_width < 1 || cfg.target_height < 1) {
    throw ValidationError("target size must be positive");
  }

  if (j.contains("keep_ranges")) {
    if (!j["keep_ranges"].is_object()) {
      throw FormatError("keep_ranges must map recording ids to range lists");
    }
    for (const auto& [rec, ranges] : j["keep_ranges"].items()) {
      if (!ranges.is_array()) {
        throw FormatError("keep_ranges." + rec + " must be an array");
      }
      std::vector<TimeRange>& out = cfg.keep_ranges[rec];
      for (const auto& r : ranges) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_unsigned() ||
            !r[1].is_number_unsigned()) {
          throw FormatError("keep_ranges." + rec +
                            " entries must be [t_from, t_to] pairs");
        }
        TimeRange range{r[0].get<std::uint64_t>(), r[1].get<std::uint64_t>()};
        if (range.t_to < range.t_from) {
          throw ValidationError("keep_ranges." + rec + " has t_to < t_from");
        }
        out.push_back(range);
      }
    }
  }
  return cfg;
}

std::string pipeline_config_json(const PipelineConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["low_speed_kmh"] = cfg.low_speed_kmh;
  j["low_angle_deg"] = cfg.low_angle_deg;
  j["low_angle_prune_prob"] = cfg.low_angle_prune_prob;
  j["max_angle_deg"] = cfg.max_angle_deg;
  j["target_width"] = cfg.target_width;
  j["target_height"] = cfg.target_height;
  json ranges = json::object();
  for (const auto& [rec, list] : cfg.keep_ranges) {
    json arr = json::array();
    for (const TimeRange& r : list) {
      arr.push_back(json::array({r.t_from, r.t_to}));
    }
    ranges[rec] = arr;
  }
  j["keep_ranges"] = ranges;
  return j.dump(2);
}

std::string prune_report_json(const PruneReport& report) {
  json j;
  j["input"] = report.input;
  j["removed_trim"] = report.trim;
  j["removed_low_speed"] = report.low_speed;
  j["removed_low_steering"] = report.low_steering;
  j["removed_extreme_steering"] = report.extreme_steering;
  j["output"] = report.output;
  return j.dump(2);
}

std::vector<Sample> trim_recording(std::span<const Sample> samples,
                                   std::span<const TimeRange> keep_ranges) {
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    for (const TimeRange& r : keep_ranges) {
      if (s.t >= r.t_from && s.t <= r.t_to) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

std::vector<Sample> prune_low_speed(std::span<const Sample> samples,
                                    double threshold_kmh) {
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    if (!s.speed_kmh) {
      throw ValidationError("sample " + s.sample_id + " has no speed");
    }
    if (*s.speed_kmh >= threshold_kmh) out.push_back(s);
  }
  return out;
}

std::vector<Sample> prune_low_steering(std::span<const Sample> samples,
                                       std::uint64_t seed, double angle_deg,
                                       double prune_prob) {
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    if (!s.steering_deg) {
      throw ValidationError("sample " + s.sample_id + " has no steering");
    }
    if (std::abs(*s.steering_deg) >= angle_deg) {
      out.push_back(s);
      continue;
    }
    DerivedRng rng(seed, RngPurpose::Prune, s.sample_id);
    if (rng.next_unit() >= prune_prob) out.push_back(s);
  }
  return out;
}

std::vector<Sample> prune_extreme_steering(std::span<const Sample> samples,
                                           double max_angle_deg) {
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    if (!s.steering_deg) {
      throw ValidationError("sample " + s.sample_id + " has no steering");
    }
    if (std::abs(*s.steering_deg) <= max_angle_deg) out.push_back(s);
  }
  return out;
}

double rescale_steering(double steering_deg) {
  if (std::abs(steering_deg) > 180.0) {
    throw ValidationError("steering angle out of range: " +
                          std::to_string(steering_deg));
  }
  return steering_deg / 180.0;
}

ImageF normalize_pixels(const ImageU8& img) {
  ImageF out(img.height, img.width);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    out.data[i] = img.data[i] / 255.0;
  }
  return out;
}

ImageF resize_bilinear(const ImageF& img, int out_height, int out_width) {
  if (img.width < 1 || img.height < 1) {
    throw ValidationError("cannot resize an empty image");
  }
  if (out_width < 1 || out_height < 1) {
    throw ValidationError("target size must be positive");
  }
  ImageF out(out_height, out_width);
  const double scale_y = static_cast<double>(img.height) / out_height;
  const double scale_x = static_cast<double>(img.width) / out_width;

#pragma omp parallel for schedule(static)
  for (int oy = 0; oy < out_height; ++oy) {
    const double sy = (oy + 0.5) * scale_y - 0.5;
    const double syc = std::clamp(sy, 0.0, static_cast<double>(img.height - 1));
    const int y0 = static_cast<int>(std::floor(syc));
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fy = syc - y0;
    for (int ox = 0; ox < out_width; ++ox) {
      const double sx = (ox + 0.5) * scale_x - 0.5;
      const double sxc =
          std::clamp(sx, 0.0, static_cast<double>(img.width - 1));
      const int x0 = static_cast<int>(std::floor(sxc));
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double fx = sxc - x0;
      const double top =
          img.at(y0, x0) * (1.0 - fx) + img.at(y0, x1) * fx;
      const double bot =
          img.at(y1, x0) * (1.0 - fx) + img.at(y1, x1) * fx;
      out.at(oy, ox) = top * (1.0 - fy) + bot * fy;
    }
  }
  return out;
}

FilterResult run_pipeline_filters(std::span<const Sample> samples,
                                  const PipelineConfig& cfg) {
  FilterResult result;
  result.report.input = samples.size();

  std::vector<Sample> stage(samples.begin(), samples.end());
  if (!cfg.keep_ranges.empty()) {
    std::vector<Sample> trimmed;
    for (const Sample& s : stage) {
      auto it = cfg.keep_ranges.find(s.recording_id);
      if (it == cfg.keep_ranges.end()) {
        trimmed.push_back(s);
        continue;
      }
      for (const TimeRange& r : it->second) {
        if (s.t >= r.t_from && s.t <= r.t_to) {
          trimmed.push_back(s);
          break;
        }
      }
    }
    stage = std::move(trimmed);
  }
  result.report.trim = result.report.input - stage.size();

  std::size_t before = stage.size();
  stage = prune_low_speed(stage, cfg.low_speed_kmh);
  result.report.low_speed = before - stage.size();

  before = stage.size();
  stage = prune_low_steering(stage, cfg.seed, cfg.low_angle_deg,
                             cfg.low_angle_prune_prob);
  result.report.low_steering = before - stage.size();

  before = stage.size();
  stage = prune_extreme_steering(stage, cfg.max_angle_deg);
  result.report.extreme_steering = before - stage.size();

  for (Sample& s : stage) {
    s.steering_scaled = rescale_steering(*s.steering_deg);
  }
  result.report.output = stage.size();
  result.samples = std::move(stage);
  return result;
}

ImageF process_frame(const ImageU8& img, const PipelineConfig& cfg) {
  return resize_bilinear(normalize_pixels(img), cfg.target_height,
                         cfg.target_width);
}

}  // namespace evgap
