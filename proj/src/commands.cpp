#include "evgap/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "evgap/augment.hpp"
#include "evgap/evio.hpp"
#include "evgap/image.hpp"
#include "evgap/manifest.hpp"
#include "evgap/metrics.hpp"
#include "evgap/preprocess.hpp"
#include "evgap/report.hpp"
#include "evgap/rng.hpp"
#include "evgap/version.hpp"
#include "json.hpp"

namespace evgap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

std::string read_file_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::string digest_hex(std::span<const std::uint8_t> bytes) {
  const std::uint64_t h = fnv1a64(std::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest_hex(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return digest_hex(bytes);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void apply_common(const CommonOptions& common) {
  if (common.threads < 0) {
    throw ValidationError("--threads must be positive");
  }
  if (common.threads > 0) omp_set_num_threads(common.threads);
  if (common.out_dir.empty()) {
    throw ValidationError("an output directory is required");
  }
  fs::create_directories(common.out_dir);
}

void write_run_json(const CommonOptions& common, const std::string& command,
                    const json& resolved_config,
                    const std::vector<fs::path>& inputs) {
  json j;
  j["command"] = command;
  j["resolved_config"] = resolved_config;
  j["tool_version"] = std::string(kToolName) + " " + kToolVersion;
  json digests = json::object();
  for (const fs::path& p : inputs) {
    digests[p.generic_string()] = file_digest_hex(p);
  }
  j["input_digests"] = digests;
  j["timestamp_utc"] = utc_timestamp();
  write_text_file(common.out_dir / "run.json", j.dump(2) + "\n");
}

// Path stored in a manifest written to out_dir, pointing at an existing
// file. Pure string arithmetic so two runs rooted at different directories
// still write identical bytes.
std::string manifest_relative(const fs::path& file,
                              const fs::path& out_dir) {
  const fs::path abs_file = fs::absolute(file).lexically_normal();
  const fs::path abs_dir = fs::absolute(out_dir).lexically_normal();
  const fs::path rel = abs_file.lexically_relative(abs_dir);
  if (rel.empty()) return abs_file.generic_string();
  return rel.generic_string();
}

std::string frame_basename(const std::string& recording_id,
                           std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06llu",
                static_cast<unsigned long long>(index));
  return recording_id + buf;
}

void require_frames_exist(const fs::path& manifest_path,
                          std::span<const Sample> samples) {
  std::vector<std::string> missing;
  for (const Sample& s : samples) {
    const fs::path p = resolve_frame_path(manifest_path, s);
    if (!fs::exists(p)) missing.push_back(s.sample_id + ": " + p.string());
  }
  if (missing.empty()) return;
  std::string msg =
      std::to_string(missing.size()) + " missing frame file(s):";
  const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + missing[i];
  if (shown < missing.size()) {
    msg += "\n  ... and " + std::to_string(missing.size() - shown) + " more";
  }
  throw ValidationError(msg);
}

// Runs fn(i) over [0, n) in parallel and rethrows the first failure by
// index, since exceptions must not cross the parallel region.
template <typename Fn>
void parallel_for_samples(std::size_t n, Fn&& fn) {
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw Error(e);
  }
}

std::vector<std::pair<std::string, double>> parse_predictions(
    std::string_view text) {
  std::vector<std::pair<std::string, double>> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!saw_header) {
      if (line != "sample_id,prediction_deg") {
        throw FormatError(
            "predictions line 1: expected header "
            "\"sample_id,prediction_deg\"");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) {
      if (pos >= text.size()) break;
      throw FormatError("predictions line " + std::to_string(line_no) +
                        ": blank line");
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || comma == 0) {
      throw FormatError("predictions line " + std::to_string(line_no) +
                        ": expected sample_id,value");
    }
    const std::string_view value = line.substr(comma + 1);
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw FormatError("predictions line " + std::to_string(line_no) +
                        ": bad number \"" + std::string(value) + "\"");
    }
    out.emplace_back(std::string(line.substr(0, comma)), v);
  }
  if (!saw_header) throw FormatError("predictions file is empty");
  return out;
}

}  // namespace

void run_frame(const FrameOptions& opts) {
  apply_common(opts.common);
  if (opts.period_us == 0) throw ValidationError("period must be positive");
  if (opts.gain < 1) throw ValidationError("gain must be positive");

  const EventStream stream = read_evt_file(opts.evt_path);
  const std::string recording_id = opts.recording_id.empty()
                                       ? opts.evt_path.stem().string()
                                       : opts.recording_id;

  const std::vector<EventFrame> frames =
      frame_recording(stream, opts.period_us, opts.gain);

  const fs::path frames_dir = opts.common.out_dir / "frames";
  fs::create_directories(frames_dir);

  std::vector<Sample> samples(frames.size());
  parallel_for_samples(frames.size(), [&](std::size_t i) {
    const std::string base = frame_basename(recording_id, i);
    write_pgm(frames_dir / (base + ".pgm"), frames[i].pixels);
    Sample s;
    s.sample_id = base;
    s.recording_id = recording_id;
    s.sensor = Sensor::Dvs;
    s.lighting = opts.lighting;
    s.t = frames[i].t_start;
    s.frame_path = "frames/" + base + ".pgm";
    samples[i] = std::move(s);
  });

  write_manifest(opts.common.out_dir / "manifest.jsonl", samples);

  json cfg;
  cfg["seed"] = opts.common.seed.value_or(0);
  cfg["threads"] = opts.common.threads;
  cfg["period_us"] = opts.period_us;
  cfg["gain"] = opts.gain;
  cfg["recording_id"] = recording_id;
  cfg["lighting"] =
      opts.lighting ? json(to_string(*opts.lighting)) : json(nullptr);
  write_run_json(opts.common, "frame", cfg, {opts.evt_path});
  std::cerr << "frame: wrote " << frames.size() << " frame(s) to "
            << opts.common.out_dir.string() << "\n";
}

void run_preprocess(const PreprocessOptions& opts) {
  apply_common(opts.common);

  PipelineConfig cfg;
  if (opts.config_path) {
    cfg = parse_pipeline_config(read_file_text(*opts.config_path));
  }
  if (opts.common.seed) cfg.seed = *opts.common.seed;

  std::vector<Sample> samples = read_manifest(opts.manifest_path);
  const std::size_t input_count = samples.size();
  require_frames_exist(opts.manifest_path, samples);

  const std::vector<TelemetryRecord> telemetry =
      read_telemetry_file(opts.telemetry_path);
  std::vector<std::uint64_t> frame_ts(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) frame_ts[i] = samples[i].t;
  const std::vector<AlignedTelemetry> aligned =
      align_telemetry(frame_ts, telemetry);

  std::vector<Sample> with_labels;
  with_labels.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!aligned[i].aligned) continue;
    Sample s = samples[i];
    s.steering_deg = aligned[i].steering_deg;
    s.speed_kmh = aligned[i].speed_kmh;
    with_labels.push_back(std::move(s));
  }
  const std::size_t unaligned = input_count - with_labels.size();

  FilterResult filtered = run_pipeline_filters(with_labels, cfg);

  const fs::path frames_dir = opts.common.out_dir / "frames";
  fs::create_directories(frames_dir);
  parallel_for_samples(filtered.samples.size(), [&](std::size_t i) {
    Sample& s = filtered.samples[i];
    const ImageU8 img =
        read_pgm(resolve_frame_path(opts.manifest_path, s));
    write_pfm(frames_dir / (s.sample_id + ".pfm"), process_frame(img, cfg));
    s.frame_path = "frames/" + s.sample_id + ".pfm";
  });

  write_manifest(opts.common.out_dir / "manifest.jsonl", filtered.samples);

  json report;
  report["input"] = input_count;
  report["removed_unaligned"] = unaligned;
  report["removed_trim"] = filtered.report.trim;
  report["removed_low_speed"] = filtered.report.low_speed;
  report["removed_low_steering"] = filtered.report.low_steering;
  report["removed_extreme_steering"] = filtered.report.extreme_steering;
  report["output"] = filtered.report.output;
  write_text_file(opts.common.out_dir / "report.json",
                  report.dump(2) + "\n");

  json rc = json::parse(pipeline_config_json(cfg));
  rc["threads"] = opts.common.threads;
  std::vector<fs::path> inputs = {opts.manifest_path, opts.telemetry_path};
  if (opts.config_path) inputs.push_back(*opts.config_path);
  write_run_json(opts.common, "preprocess", rc, inputs);
  std::cerr << "preprocess: kept " << filtered.report.output << " of "
            << input_count << " sample(s)\n";
}

void run_split(const SplitOptions& opts) {
  apply_common(opts.common);
  if (opts.manifest_paths.empty()) {
    throw ValidationError("at least one manifest is required");
  }
  const std::uint64_t seed = opts.common.seed.value_or(0);
  std::string name = opts.name;
  if (name.empty()) {
    name = std::string(to_string(opts.bias));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
  }

  // load everything, rewriting frame paths relative to the output directory
  std::vector<Sample> all;
  for (const fs::path& mp : opts.manifest_paths) {
    for (Sample s : read_manifest(mp)) {
      s.frame_path = manifest_relative(resolve_frame_path(mp, s),
                                       opts.common.out_dir);
      all.push_back(std::move(s));
    }
  }
  for (const Sample& s : all) {
    if (!s.lighting) {
      throw ValidationError("sample " + s.sample_id +
                            " has no lighting label");
    }
  }

  std::set<std::string> ids;
  for (const Sample& s : all) {
    if (!ids.insert(s.sample_id).second) {
      throw ValidationError("duplicate sample id " + s.sample_id);
    }
  }

  // group by recording, preserving first-seen order for reproducible output
  std::vector<std::string> rec_order;
  std::map<std::string, std::vector<Sample>> by_recording;
  for (Sample& s : all) {
    auto [it, inserted] = by_recording.try_emplace(s.recording_id);
    if (inserted) rec_order.push_back(s.recording_id);
    it->second.push_back(std::move(s));
  }

  std::vector<Sample> train_pool;
  std::vector<Sample> test_pool;
  for (const std::string& rec : rec_order) {
    std::vector<Sample>& group = by_recording[rec];
    std::stable_sort(group.begin(), group.end(),
                     [](const Sample& a, const Sample& b) { return a.t < b.t; });
    TemporalSplitResult split = temporal_split(group);
    train_pool.insert(train_pool.end(),
                      std::make_move_iterator(split.train.begin()),
                      std::make_move_iterator(split.train.end()));
    test_pool.insert(test_pool.end(),
                     std::make_move_iterator(split.test.begin()),
                     std::make_move_iterator(split.test.end()));
  }

  const Lighting target = bias_target(opts.bias);
  std::vector<Sample> target_train;
  std::vector<Sample> opposite_train;
  for (Sample& s : train_pool) {
    (*s.lighting == target ? target_train : opposite_train)
        .push_back(std::move(s));
  }

  const bool pure =
      opts.bias == BiasSet::PureDay || opts.bias == BiasSet::PureNight;
  std::vector<Sample> train =
      pure ? build_pure_set(target_train)
           : build_biased_set(target_train, opposite_train, opts.ratio, seed);
  for (Sample& s : train) s.bias_set = opts.bias;

  std::vector<Sample> test;
  for (Sample& s : test_pool) {
    if (*s.lighting == target) test.push_back(std::move(s));
  }

  validate_split_outputs(train, test, opts.bias, opts.ratio);

  write_manifest(opts.common.out_dir / (name + ".train.jsonl"), train);
  write_manifest(opts.common.out_dir / (name + ".test.jsonl"), test);

  json cfg;
  cfg["seed"] = seed;
  cfg["threads"] = opts.common.threads;
  cfg["bias"] = to_string(opts.bias);
  cfg["ratio"] = opts.ratio;
  cfg["name"] = name;
  write_run_json(opts.common, "split", cfg, opts.manifest_paths);
  std::cerr << "split: " << train.size() << " train / " << test.size()
            << " test sample(s) as " << name << ".*.jsonl\n";
}

void run_augment(const AugmentOptions& opts) {
  apply_common(opts.common);

  AugmentConfig cfg;
  if (opts.config_path) {
    cfg = parse_augment_config(read_file_text(*opts.config_path));
  }
  if (opts.common.seed) cfg.seed = *opts.common.seed;
  cfg.validate();

  std::vector<Sample> samples = read_manifest(opts.manifest_path);
  require_frames_exist(opts.manifest_path, samples);

  const fs::path frames_dir = opts.common.out_dir / "frames";
  fs::create_directories(frames_dir);
  parallel_for_samples(samples.size(), [&](std::size_t i) {
    Sample& s = samples[i];
    const ImageF img = read_pfm(resolve_frame_path(opts.manifest_path, s));
    write_pfm(frames_dir / (s.sample_id + ".pfm"),
              augment_sample(img, s.sample_id, cfg));
    s.frame_path = "frames/" + s.sample_id + ".pfm";
  });

  write_manifest(opts.common.out_dir / "manifest.jsonl", samples);

  json rc = json::parse(augment_config_json(cfg));
  rc["threads"] = opts.common.threads;
  std::vector<fs::path> inputs = {opts.manifest_path};
  if (opts.config_path) inputs.push_back(*opts.config_path);
  write_run_json(opts.common, "augment", rc, inputs);
  std::cerr << "augment: transformed " << samples.size() << " frame(s)\n";
}

void run_stats(const StatsOptions& opts) {
  apply_common(opts.common);

  const std::vector<Sample> samples = read_manifest(opts.manifest_path);
  if (samples.empty()) throw ValidationError("manifest is empty");
  require_frames_exist(opts.manifest_path, samples);
  for (const Sample& s : samples) {
    if (!s.lighting) {
      throw ValidationError("sample " + s.sample_id +
                            " has no lighting label");
    }
  }

  // exact integer accumulation per (sensor, lighting)
  std::map<std::pair<Sensor, Lighting>, std::pair<PixelAccumulator,
                                                  std::uint64_t>>
      groups;
  for (const Sample& s : samples) {
    const fs::path p = resolve_frame_path(opts.manifest_path, s);
    if (p.extension() != ".pgm") {
      throw ValidationError("stats expects 8-bit PGM frames, got " +
                            p.string());
    }
    auto& [acc, n_frames] = groups[{s.sensor, *s.lighting}];
    acc.add(read_pgm(p));
    n_frames += 1;
  }

  json out;
  out["groups"] = json::array();
  std::map<Sensor, std::map<Lighting, SensorStats>> by_sensor;
  for (const auto& [key, value] : groups) {
    const SensorStats st = value.first.finalize();
    by_sensor[key.first][key.second] = st;
    json g;
    g["sensor"] = to_string(key.first);
    g["lighting"] = to_string(key.second);
    g["mu"] = st.mu;
    g["sigma"] = st.sigma;
    g["n_pixels"] = st.n;
    g["n_frames"] = value.second;
    out["groups"].push_back(g);
  }

  out["pairs"] = json::array();
  for (const auto& [sensor, lit] : by_sensor) {
    json p;
    p["sensor"] = to_string(sensor);
    const auto day = lit.find(Lighting::Day);
    const auto night = lit.find(Lighting::Night);
    if (day == lit.end() || night == lit.end()) {
      std::cerr << "stats: " << to_string(sensor)
                << " has a single lighting group, effect size omitted\n";
      continue;
    }
    try {
      p["cohens_d"] = cohens_d(day->second.mu, day->second.sigma,
                               night->second.mu, night->second.sigma);
      p["rel_mean_change_pct"] =
          rel_mean_change(day->second.mu, night->second.mu);
    } catch (const ValidationError& e) {
      p["error"] = e.what();
      std::cerr << "stats: " << to_string(sensor) << ": " << e.what() << "\n";
    }
    out["pairs"].push_back(p);
  }

  const std::string text = out.dump(2) + "\n";
  write_text_file(opts.common.out_dir / "stats.json", text);
  std::cout << text;

  json cfg;
  cfg["threads"] = opts.common.threads;
  write_run_json(opts.common, "stats", cfg, {opts.manifest_path});
}

void run_eval(const EvalOptions& opts) {
  apply_common(opts.common);
  if (opts.baseline_mean == opts.predictions_path.has_value()) {
    throw ValidationError(
        "pass exactly one of a predictions file or --baseline-mean");
  }
  if (opts.baseline_mean && !opts.train_manifest_path) {
    throw ValidationError("--baseline-mean needs a training manifest");
  }

  const std::vector<Sample> samples = read_manifest(opts.manifest_path);
  if (samples.size() < 2) {
    throw ValidationError("evaluation needs at least two samples");
  }
  std::map<std::string, const Sample*> by_id;
  for (const Sample& s : samples) {
    if (!s.steering_deg) {
      throw ValidationError("sample " + s.sample_id +
                            " has no steering ground truth");
    }
    by_id[s.sample_id] = &s;
  }

  // bias label for the result: flag wins, else the training manifest's tags
  std::string train_bias = opts.train_bias_label;
  std::vector<Sample> train;
  if (opts.train_manifest_path) {
    train = read_manifest(*opts.train_manifest_path);
    if (train.empty()) throw ValidationError("training manifest is empty");
  }
  if (train_bias.empty()) {
    if (train.empty()) {
      throw ValidationError(
          "training bias unknown: pass --train-bias or a training manifest "
          "with bias_set tags");
    }
    for (const Sample& s : train) {
      if (!s.bias_set) {
        throw ValidationError("training sample " + s.sample_id +
                              " has no bias_set tag; pass --train-bias");
      }
      const std::string tag(to_string(*s.bias_set));
      if (train_bias.empty()) {
        train_bias = tag;
      } else if (train_bias != tag) {
        throw ValidationError("training manifest mixes bias_set tags");
      }
    }
  } else {
    bias_from_string(train_bias);  // reject unknown labels early
  }

  struct Row {
    const Sample* sample;
    double y_hat;
  };
  std::vector<Row> rows;
  if (opts.baseline_mean) {
    std::vector<double> train_y;
    for (const Sample& s : train) {
      if (!s.steering_deg) {
        throw ValidationError("training sample " + s.sample_id +
                              " has no steering ground truth");
      }
      train_y.push_back(*s.steering_deg);
    }
    const MeanBaseline baseline = MeanBaseline::fit(train_y);
    for (const Sample& s : samples) {
      rows.push_back({&s, baseline.predict()});
    }
  } else {
    const auto predictions =
        parse_predictions(read_file_text(*opts.predictions_path));
    std::vector<std::string> unknown;
    std::set<std::string> seen;
    for (const auto& [id, value] : predictions) {
      if (!seen.insert(id).second) {
        throw ValidationError("duplicate prediction for sample " + id);
      }
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        unknown.push_back(id);
        continue;
      }
      rows.push_back({it->second, value});
    }
    if (!unknown.empty()) {
      std::string msg = std::to_string(unknown.size()) +
                        " prediction(s) without a manifest entry:";
      const std::size_t shown = std::min<std::size_t>(unknown.size(), 20);
      for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + unknown[i];
      if (shown < unknown.size()) {
        msg += "\n  ... and " + std::to_string(unknown.size() - shown) +
               " more";
      }
      throw ValidationError(msg);
    }
    if (rows.size() < samples.size()) {
      std::cerr << "eval: " << samples.size() - rows.size()
                << " manifest sample(s) lack predictions and are skipped\n";
    }
    if (rows.size() < 2) {
      throw ValidationError("evaluation needs at least two predictions");
    }
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.sample->t != b.sample->t) return a.sample->t < b.sample->t;
    return a.sample->sample_id < b.sample->sample_id;
  });

  EvalFile ef;
  ef.result.by.train_bias = train_bias;
  const Sample* first = rows.front().sample;
  if (!first->lighting) {
    throw ValidationError("sample " + first->sample_id +
                          " has no lighting label");
  }
  ef.result.by.lighting = *first->lighting;
  ef.result.by.sensor = first->sensor;
  for (const Row& r : rows) {
    if (!r.sample->lighting || *r.sample->lighting != ef.result.by.lighting ||
        r.sample->sensor != ef.result.by.sensor) {
      throw ValidationError(
          "evaluation set mixes lighting or sensor conditions at sample " +
          r.sample->sample_id);
    }
  }

  std::vector<double> y(rows.size());
  std::vector<double> y_hat(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y[i] = *rows[i].sample->steering_deg;
    y_hat[i] = rows[i].y_hat;
    ef.trace.push_back({rows[i].sample->t, y[i], y_hat[i]});
  }
  ef.result.n = rows.size();
  ef.result.rmse = rmse(y, y_hat);
  ef.result.eva = eva(y, y_hat);

  write_text_file(opts.common.out_dir / "eval.json",
                  eval_file_json(ef) + "\n");

  json cfg;
  cfg["threads"] = opts.common.threads;
  cfg["baseline_mean"] = opts.baseline_mean;
  cfg["train_bias"] = train_bias;
  std::vector<fs::path> inputs = {opts.manifest_path};
  if (opts.predictions_path) inputs.push_back(*opts.predictions_path);
  if (opts.train_manifest_path) inputs.push_back(*opts.train_manifest_path);
  write_run_json(opts.common, "eval", cfg, inputs);
  std::cerr << "eval: n=" << ef.result.n << " rmse=" << ef.result.rmse
            << " eva=" << ef.result.eva << "\n";
}

void run_report(const ReportOptions& opts) {
  apply_common(opts.common);
  if (opts.eval_paths.empty()) {
    throw ValidationError("at least one evaluation file is required");
  }

  std::vector<EvalFile> evals;
  for (const fs::path& p : opts.eval_paths) {
    evals.push_back(read_eval_file(p));
  }

  std::vector<std::string> skipped;
  const std::vector<PenaltyRow> rows = build_penalty_rows(evals, &skipped);
  for (const std::string& s : skipped) {
    std::cerr << "report: skipped " << s << "\n";
  }

  write_text_file(opts.common.out_dir / "penalty.md",
                  penalty_table_markdown(rows));
  write_text_file(opts.common.out_dir / "penalty.csv",
                  penalty_table_csv(rows));

  for (const EvalFile& e : evals) {
    std::string tag = std::string(to_string(e.result.by.lighting)) + "_" +
                      std::string(to_string(e.result.by.sensor)) + "_" +
                      e.result.by.train_bias;
    std::transform(tag.begin(), tag.end(), tag.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    write_trace_chart(opts.common.out_dir / ("trace_" + tag + ".svg"), e);
  }

  json cfg;
  cfg["threads"] = opts.common.threads;
  write_run_json(opts.common, "report", cfg, opts.eval_paths);
  std::cerr << "report: " << rows.size() << " penalty pair(s), "
            << evals.size() << " chart(s)\n";
}

}  // namespace evgap
