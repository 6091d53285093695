#include <cstdint>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "evgap/commands.hpp"
#include "evgap/version.hpp"

namespace {

struct SeedHolder {
  std::uint64_t value = 0;
  CLI::Option* opt = nullptr;
};

void add_common(CLI::App* cmd, evgap::CommonOptions& common,
                SeedHolder& seed) {
  seed.opt = cmd->add_option("--seed", seed.value, "base seed");
  cmd->add_option("--threads", common.threads,
                  "worker threads (0 = library default)");
  cmd->add_option("--out", common.out_dir, "output directory")->required();
}

void finish_common(evgap::CommonOptions& common, const SeedHolder& seed) {
  if (seed.opt && seed.opt->count() > 0) common.seed = seed.value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-camera dataset preparation and domain-gap analysis"};
  app.set_version_flag("--version",
                       std::string(evgap::kToolName) + " " +
                           evgap::kToolVersion);
  app.require_subcommand(1);

  const std::map<std::string, evgap::Lighting> lighting_map{
      {"day", evgap::Lighting::Day}, {"night", evgap::Lighting::Night}};
  const std::map<std::string, evgap::BiasSet> bias_map{
      {"day", evgap::BiasSet::DayBiased},
      {"night", evgap::BiasSet::NightBiased},
      {"pure-day", evgap::BiasSet::PureDay},
      {"pure-night", evgap::BiasSet::PureNight}};

  evgap::FrameOptions frame;
  SeedHolder frame_seed;
  evgap::Lighting frame_lighting{};
  CLI::App* cmd_frame =
      app.add_subcommand("frame", "aggregate an event stream into frames");
  add_common(cmd_frame, frame.common, frame_seed);
  cmd_frame->add_option("evt", frame.evt_path, "input event stream")
      ->required();
  cmd_frame->add_option("--period-us", frame.period_us,
                        "window length in microseconds");
  cmd_frame->add_option("--gain", frame.gain, "count-to-intensity gain");
  cmd_frame->add_option("--recording-id", frame.recording_id,
                        "recording id (default: file stem)");
  CLI::Option* lighting_opt =
      cmd_frame
          ->add_option("--lighting", frame_lighting,
                       "lighting label for the manifest")
          ->transform(CLI::CheckedTransformer(lighting_map, CLI::ignore_case));

  evgap::PreprocessOptions preprocess;
  SeedHolder preprocess_seed;
  std::string preprocess_config;
  CLI::App* cmd_preprocess = app.add_subcommand(
      "preprocess", "align telemetry, prune, rescale and resize");
  add_common(cmd_preprocess, preprocess.common, preprocess_seed);
  cmd_preprocess
      ->add_option("manifest", preprocess.manifest_path, "frame manifest")
      ->required();
  cmd_preprocess
      ->add_option("telemetry", preprocess.telemetry_path, "telemetry CSV")
      ->required();
  CLI::Option* preprocess_config_opt = cmd_preprocess->add_option(
      "--config", preprocess_config, "pipeline config JSON");

  evgap::SplitOptions split;
  SeedHolder split_seed;
  CLI::App* cmd_split =
      app.add_subcommand("split", "build train/test manifests");
  add_common(cmd_split, split.common, split_seed);
  cmd_split
      ->add_option("manifests", split.manifest_paths, "input manifests")
      ->required();
  cmd_split->add_option("--bias", split.bias, "training-set composition")
      ->transform(CLI::CheckedTransformer(bias_map, CLI::ignore_case))
      ->required();
  cmd_split->add_option("--ratio", split.ratio,
                        "opposite-lighting cap as a fraction of the target "
                        "count");
  cmd_split->add_option("--name", split.name,
                        "output name (default: bias set name)");

  evgap::AugmentOptions augment;
  SeedHolder augment_seed;
  std::string augment_config;
  CLI::App* cmd_augment =
      app.add_subcommand("augment", "apply seeded training-time transforms");
  add_common(cmd_augment, augment.common, augment_seed);
  cmd_augment
      ->add_option("manifest", augment.manifest_path, "normalized manifest")
      ->required();
  CLI::Option* augment_config_opt = cmd_augment->add_option(
      "--config", augment_config, "augmentation config JSON");

  evgap::StatsOptions stats;
  SeedHolder stats_seed;
  CLI::App* cmd_stats = app.add_subcommand(
      "stats", "pixel statistics and lighting effect sizes");
  add_common(cmd_stats, stats.common, stats_seed);
  cmd_stats->add_option("manifest", stats.manifest_path, "frame manifest")
      ->required();

  evgap::EvalOptions eval;
  SeedHolder eval_seed;
  std::string eval_predictions;
  std::string eval_train;
  CLI::App* cmd_eval =
      app.add_subcommand("eval", "score predictions against a test manifest");
  add_common(cmd_eval, eval.common, eval_seed);
  cmd_eval->add_option("manifest", eval.manifest_path, "test manifest")
      ->required();
  CLI::Option* eval_pred_opt = cmd_eval->add_option(
      "--predictions", eval_predictions,
      "CSV with header sample_id,prediction_deg");
  cmd_eval->add_flag("--baseline-mean", eval.baseline_mean,
                     "score the training-mean constant predictor");
  CLI::Option* eval_train_opt = cmd_eval->add_option(
      "--train", eval_train, "training manifest (baseline fit, bias label)");
  cmd_eval->add_option("--train-bias", eval.train_bias_label,
                       "bias label when the training manifest is untagged");

  evgap::ReportOptions report;
  SeedHolder report_seed;
  CLI::App* cmd_report = app.add_subcommand(
      "report", "domain-shift penalty tables and trace charts");
  add_common(cmd_report, report.common, report_seed);
  cmd_report->add_option("evals", report.eval_paths, "evaluation JSON files")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_frame->parsed()) {
      finish_common(frame.common, frame_seed);
      if (lighting_opt->count() > 0) frame.lighting = frame_lighting;
      evgap::run_frame(frame);
    } else if (cmd_preprocess->parsed()) {
      finish_common(preprocess.common, preprocess_seed);
      if (preprocess_config_opt->count() > 0) {
        preprocess.config_path = preprocess_config;
      }
      evgap::run_preprocess(preprocess);
    } else if (cmd_split->parsed()) {
      finish_common(split.common, split_seed);
      evgap::run_split(split);
    } else if (cmd_augment->parsed()) {
      finish_common(augment.common, augment_seed);
      if (augment_config_opt->count() > 0) {
        augment.config_path = augment_config;
      }
      evgap::run_augment(augment);
    } else if (cmd_stats->parsed()) {
      finish_common(stats.common, stats_seed);
      evgap::run_stats(stats);
    } else if (cmd_eval->parsed()) {
      finish_common(eval.common, eval_seed);
      if (eval_pred_opt->count() > 0) eval.predictions_path = eval_predictions;
      if (eval_train_opt->count() > 0) eval.train_manifest_path = eval_train;
      evgap::run_eval(eval);
    } else if (cmd_report->parsed()) {
      finish_common(report.common, report_seed);
      evgap::run_report(report);
    }
  } catch (const std::exception& e) {
    std::cerr << "evgap: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
