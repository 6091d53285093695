#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evgap/framing.hpp"
#include "evgap/split.hpp"
#include "evgap/types.hpp"

namespace evgap {

// Batch commands behind the CLI. Each run writes its outputs plus a
// run.json echoing the resolved configuration, the tool version and input
// digests. Errors are reported by throwing evgap::Error subclasses; the CLI
// maps them to a nonzero exit.

struct CommonOptions {
  std::optional<std::uint64_t> seed;  // overrides any config-file seed
  int threads = 0;                    // 0 = library default
  std::filesystem::path out_dir;
};

struct FrameOptions {
  CommonOptions common;
  std::filesystem::path evt_path;
  std::uint64_t period_us = kDefaultPeriodUs;
  int gain = kDefaultGain;
  std::string recording_id;  // defaults to the EVT file stem
  std::optional<Lighting> lighting;
};
void run_frame(const FrameOptions& opts);

struct PreprocessOptions {
  CommonOptions common;
  std::filesystem::path manifest_path;
  std::filesystem::path telemetry_path;
  std::optional<std::filesystem::path> config_path;
};
void run_preprocess(const PreprocessOptions& opts);

struct SplitOptions {
  CommonOptions common;
  std::vector<std::filesystem::path> manifest_paths;
  BiasSet bias = BiasSet::DayBiased;
  double ratio = kDefaultOppositeRatio;
  std::string name;  // defaults to the bias set name, lower-case
};
void run_split(const SplitOptions& opts);

struct AugmentOptions {
  CommonOptions common;
  std::filesystem::path manifest_path;
  std::optional<std::filesystem::path> config_path;
};
void run_augment(const AugmentOptions& opts);

struct StatsOptions {
  CommonOptions common;
  std::filesystem::path manifest_path;
};
void run_stats(const StatsOptions& opts);

struct EvalOptions {
  CommonOptions common;
  std::filesystem::path manifest_path;
  std::optional<std::filesystem::path> predictions_path;
  bool baseline_mean = false;
  std::optional<std::filesystem::path> train_manifest_path;
  std::string train_bias_label;  // stored in the eval result's labels
};
void run_eval(const EvalOptions& opts);

struct ReportOptions {
  CommonOptions common;
  std::vector<std::filesystem::path> eval_paths;
};
void run_report(const ReportOptions& opts);

}  // namespace evgap
