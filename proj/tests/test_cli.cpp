#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "evgap/augment.hpp"
#include "evgap/evio.hpp"
#include "evgap/framing.hpp"
#include "evgap/image.hpp"
#include "evgap/manifest.hpp"
#include "evgap/metrics.hpp"
#include "evgap/preprocess.hpp"
#include "evgap/report.hpp"
#include "evgap/rng.hpp"
#include "evgap/split.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace evgap;
using nlohmann::json;
using testsup::run_cli;
using testsup::TempDir;

namespace {

std::string str(const std::filesystem::path& p) { return p.string(); }

// six windows, one event at each period boundary
EventStream six_window_stream() {
  EventStream s;
  s.width = 32;
  s.height = 24;
  for (std::uint64_t k = 0; k < 6; ++k) {
    s.events.push_back({k * 200000, static_cast<std::uint16_t>(k), 3,
                        Polarity::On});
  }
  return s;
}

std::vector<Sample> label_samples(const std::string& rec, std::size_t n,
                                  Lighting lighting,
                                  std::uint64_t t_step = 1000) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%06zu", rec.c_str(), i);
    s.sample_id = buf;
    s.recording_id = rec;
    s.sensor = Sensor::Dvs;
    s.lighting = lighting;
    s.t = t_step * i;
    s.steering_deg = 5.0 + 0.25 * static_cast<double>(i % 40);
    s.frame_path = "frames/" + s.sample_id + ".pgm";
    out.push_back(std::move(s));
  }
  return out;
}

json load_json(const std::filesystem::path& p) {
  return json::parse(testsup::slurp_text(p));
}

}  // namespace

TEST_CASE("version flag exits cleanly") {
  CHECK(run_cli({"--version"}) == 0);
}

TEST_CASE("missing required output directory fails the parse") {
  TempDir dir;
  std::string err;
  CHECK(run_cli({"frame", str(dir.path / "x.evt")}, &err) != 0);
}

TEST_CASE("frame splits a stream into period windows") {
  TempDir dir;
  EventStream s;
  s.width = 8;
  s.height = 8;
  s.events = {{0, 1, 1, Polarity::On}, {50000, 2, 2, Polarity::Off}};
  const auto evt = dir.path / "rec.evt";
  write_evt_file(evt, s);

  const auto out = dir.path / "out";
  std::string err;
  REQUIRE(run_cli({"frame", str(evt), "--out", str(out), "--lighting", "day"},
                  &err) == 0);

  const auto samples = read_manifest(out / "manifest.jsonl");
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].sample_id == "rec_000000");
  CHECK(samples[1].sample_id == "rec_000001");
  CHECK(samples[0].t == 0);
  CHECK(samples[1].t == 50000);
  CHECK(samples[0].lighting == Lighting::Day);
  CHECK(samples[0].frame_path == "frames/rec_000000.pgm");

  const ImageU8 f0 = read_pgm(out / "frames/rec_000000.pgm");
  CHECK(f0.width == 8);
  CHECK(f0.height == 8);
  CHECK(f0.at(1, 1) == 131);  // 128 + gain 3
  CHECK(f0.at(0, 0) == 128);
  const ImageU8 f1 = read_pgm(out / "frames/rec_000001.pgm");
  CHECK(f1.at(2, 2) == 125);  // off event

  const json run = load_json(out / "run.json");
  CHECK(run["command"] == "frame");
  CHECK(run["resolved_config"]["period_us"] == 50000);
  CHECK(run["resolved_config"]["gain"] == 3);
  const std::string version = run["tool_version"].get<std::string>();
  CHECK(version.find("evgap") == 0);
  CHECK(run["timestamp_utc"].get<std::string>().size() == 20);

  const auto bytes = testsup::slurp_bytes(evt);
  const std::uint64_t h = fnv1a64(std::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  char want[17];
  std::snprintf(want, sizeof(want), "%016llx",
                static_cast<unsigned long long>(h));
  CHECK(run["input_digests"][evt.generic_string()] == want);
}

TEST_CASE("frame refuses an empty stream") {
  TempDir dir;
  EventStream s;
  const auto evt = dir.path / "empty.evt";
  write_evt_file(evt, s);
  std::string err;
  CHECK(run_cli({"frame", str(evt), "--out", str(dir.path / "out")}, &err) ==
        1);
  CHECK(err.find("evgap: error:") != std::string::npos);
}

TEST_CASE("frame output matches the library kernels") {
  TempDir dir;
  std::mt19937_64 g(71);
  const EventStream s = testsup::gen_stream(g, 3000, 64, 48);
  const auto evt = dir.path / "r1.evt";
  write_evt_file(evt, s);

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"frame", str(evt), "--out", str(out), "--period-us",
                   "40000", "--gain", "2", "--recording-id", "xyz"}) == 0);

  const auto frames = frame_recording(s, 40000, 2);
  const auto samples = read_manifest(out / "manifest.jsonl");
  REQUIRE(samples.size() == frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(samples[i].t == frames[i].t_start);
    CHECK(samples[i].recording_id == "xyz");
    CHECK_FALSE(samples[i].lighting.has_value());
    const ImageU8 img =
        read_pgm(resolve_frame_path(out / "manifest.jsonl", samples[i]));
    CHECK(img == frames[i].pixels);
  }
}

TEST_CASE("preprocess aligns telemetry and filters stage by stage") {
  TempDir dir;
  const auto evt = dir.path / "drive.evt";
  write_evt_file(evt, six_window_stream());
  const auto framed = dir.path / "framed";
  REQUIRE(run_cli({"frame", str(evt), "--out", str(framed), "--period-us",
                   "200000", "--lighting", "night"}) == 0);
  REQUIRE(read_manifest(framed / "manifest.jsonl").size() == 6);

  // frame 0 (t=0) has no telemetry within 100 ms; the others sit exactly on
  // a row: low speed, low steering, extreme steering, then two keepers
  const auto csv = dir.path / "drive.csv";
  testsup::spit(csv,
                "t_us,steering_deg,speed_kmh\n"
                "200000,50.0,5.0\n"
                "400000,0.5,20.0\n"
                "600000,200.0,20.0\n"
                "800000,30.0,20.0\n"
                "1000000,-40.0,20.0\n");
  const auto cfg = dir.path / "pipeline.json";
  testsup::spit(cfg,
                R"({"low_angle_prune_prob": 1.0, "target_width": 8,)"
                R"( "target_height": 8})");

  const auto out = dir.path / "pre";
  std::string err;
  REQUIRE(run_cli({"preprocess", str(framed / "manifest.jsonl"), str(csv),
                   "--config", str(cfg), "--out", str(out)},
                  &err) == 0);

  const json report = load_json(out / "report.json");
  CHECK(report["input"] == 6);
  CHECK(report["removed_unaligned"] == 1);
  CHECK(report["removed_trim"] == 0);
  CHECK(report["removed_low_speed"] == 1);
  CHECK(report["removed_low_steering"] == 1);
  CHECK(report["removed_extreme_steering"] == 1);
  CHECK(report["output"] == 2);

  const auto samples = read_manifest(out / "manifest.jsonl");
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].sample_id == "drive_000004");
  CHECK(samples[1].sample_id == "drive_000005");
  CHECK(samples[0].steering_deg == 30.0);
  CHECK(samples[0].speed_kmh == 20.0);
  REQUIRE(samples[0].steering_scaled.has_value());
  CHECK(*samples[0].steering_scaled == doctest::Approx(30.0 / 180.0));
  CHECK(samples[0].frame_path == "frames/drive_000004.pfm");

  // frame payload equals the library pipeline applied to the source pgm
  const ImageU8 src = read_pgm(framed / "frames/drive_000004.pgm");
  PipelineConfig pc;
  pc.target_width = 8;
  pc.target_height = 8;
  const ImageF want = process_frame(src, pc);
  const ImageF got = read_pfm(out / "frames/drive_000004.pfm");
  REQUIRE(got.width == 8);
  REQUIRE(got.height == 8);
  for (std::size_t i = 0; i < want.data.size(); ++i) {
    CHECK(got.data[i] ==
          doctest::Approx(static_cast<float>(want.data[i])).epsilon(1e-6));
  }
}

TEST_CASE("preprocess reruns write identical bytes") {
  TempDir dir;
  const auto evt = dir.path / "r.evt";
  write_evt_file(evt, six_window_stream());
  const auto framed = dir.path / "framed";
  REQUIRE(run_cli({"frame", str(evt), "--out", str(framed), "--period-us",
                   "200000", "--lighting", "day"}) == 0);

  std::string csv_text = "t_us,steering_deg,speed_kmh\n";
  for (int k = 0; k < 6; ++k) {
    csv_text += std::to_string(200000 * k + 1) + ",12.5,20.0\n";
  }
  const auto csv = dir.path / "r.csv";
  testsup::spit(csv, csv_text);
  const auto cfg = dir.path / "cfg.json";
  testsup::spit(cfg, R"({"target_width": 8, "target_height": 8})");

  const auto out1 = dir.path / "a";
  const auto out2 = dir.path / "b";
  REQUIRE(run_cli({"preprocess", str(framed / "manifest.jsonl"), str(csv),
                   "--config", str(cfg), "--seed", "42", "--out",
                   str(out1)}) == 0);
  REQUIRE(run_cli({"preprocess", str(framed / "manifest.jsonl"), str(csv),
                   "--config", str(cfg), "--seed", "42", "--threads", "4",
                   "--out", str(out2)}) == 0);
  CHECK(testsup::dir_contents(out1, {"run.json"}) ==
        testsup::dir_contents(out2, {"run.json"}));
}

TEST_CASE("preprocess names missing frame files") {
  TempDir dir;
  const auto evt = dir.path / "r.evt";
  write_evt_file(evt, six_window_stream());
  const auto framed = dir.path / "framed";
  REQUIRE(run_cli({"frame", str(evt), "--out", str(framed), "--period-us",
                   "200000"}) == 0);
  std::filesystem::remove(framed / "frames/r_000002.pgm");

  const auto csv = dir.path / "r.csv";
  testsup::spit(csv, "t_us,steering_deg,speed_kmh\n0,10.0,20.0\n");
  std::string err;
  CHECK(run_cli({"preprocess", str(framed / "manifest.jsonl"), str(csv),
                 "--out", str(dir.path / "out")},
                &err) == 1);
  CHECK(err.find("missing frame file") != std::string::npos);
  CHECK(err.find("r_000002") != std::string::npos);
}

TEST_CASE("split writes temporally disjoint biased manifests") {
  TempDir dir;
  const auto day_dir = dir.path / "day";
  const auto night_dir = dir.path / "night";
  std::filesystem::create_directories(day_dir);
  std::filesystem::create_directories(night_dir);
  write_manifest(day_dir / "manifest.jsonl",
                 label_samples("d1", 40, Lighting::Day));
  write_manifest(night_dir / "manifest.jsonl",
                 label_samples("n1", 60, Lighting::Night));

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"split", str(day_dir / "manifest.jsonl"),
                   str(night_dir / "manifest.jsonl"), "--bias", "day",
                   "--seed", "3", "--out", str(out)}) == 0);

  const auto train = read_manifest(out / "day_biased.train.jsonl");
  const auto test = read_manifest(out / "day_biased.test.jsonl");
  // 40 day -> 34 train + 6 test; opposite quota floor(0.25 * 34) = 8
  CHECK(train.size() == 42);
  CHECK(test.size() == 6);

  std::size_t night_in_train = 0;
  for (const Sample& s : train) {
    CHECK(s.split == SplitTag::Train);
    CHECK(s.bias_set == BiasSet::DayBiased);
    if (s.lighting == Lighting::Night) ++night_in_train;
  }
  CHECK(night_in_train == 8);
  for (const Sample& s : test) {
    CHECK(s.split == SplitTag::Test);
    CHECK(s.lighting == Lighting::Day);
  }
  validate_split_outputs(train, test, BiasSet::DayBiased, 0.25);

  // rerun into a fresh directory: identical manifest bytes
  const auto out2 = dir.path / "out2";
  REQUIRE(run_cli({"split", str(day_dir / "manifest.jsonl"),
                   str(night_dir / "manifest.jsonl"), "--bias", "day",
                   "--seed", "3", "--out", str(out2)}) == 0);
  CHECK(testsup::slurp_text(out / "day_biased.train.jsonl") ==
        testsup::slurp_text(out2 / "day_biased.train.jsonl"));
  CHECK(testsup::slurp_text(out / "day_biased.test.jsonl") ==
        testsup::slurp_text(out2 / "day_biased.test.jsonl"));
}

TEST_CASE("split honors pure sets and custom names") {
  TempDir dir;
  write_manifest(dir.path / "day.jsonl", label_samples("d1", 40, Lighting::Day));
  write_manifest(dir.path / "night.jsonl",
                 label_samples("n1", 60, Lighting::Night));

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"split", str(dir.path / "day.jsonl"),
                   str(dir.path / "night.jsonl"), "--bias", "pure-night",
                   "--name", "control", "--out", str(out)}) == 0);
  const auto train = read_manifest(out / "control.train.jsonl");
  const auto test = read_manifest(out / "control.test.jsonl");
  CHECK(train.size() == 51);  // 60 * 85 / 100
  CHECK(test.size() == 9);
  for (const Sample& s : train) {
    CHECK(s.lighting == Lighting::Night);
    CHECK(s.bias_set == BiasSet::PureNight);
  }
}

TEST_CASE("split rejects duplicate ids and unlabeled lighting") {
  TempDir dir;
  auto a = label_samples("r", 5, Lighting::Day);
  write_manifest(dir.path / "a.jsonl", a);
  write_manifest(dir.path / "b.jsonl", a);  // same ids again
  std::string err;
  CHECK(run_cli({"split", str(dir.path / "a.jsonl"), str(dir.path / "b.jsonl"),
                 "--bias", "day", "--out", str(dir.path / "out")},
                &err) == 1);
  CHECK(err.find("duplicate sample id") != std::string::npos);

  auto untagged = label_samples("u", 5, Lighting::Day);
  for (Sample& s : untagged) s.lighting.reset();
  write_manifest(dir.path / "u.jsonl", untagged);
  CHECK(run_cli({"split", str(dir.path / "u.jsonl"), "--bias", "day", "--out",
                 str(dir.path / "out")},
                &err) == 1);
  CHECK(err.find("no lighting label") != std::string::npos);

  CHECK(run_cli({"split", str(dir.path / "a.jsonl"), "--bias", "dusk",
                 "--out", str(dir.path / "out")},
                &err) != 0);
}

TEST_CASE("stats reports group moments and the lighting contrast") {
  TempDir dir;
  const auto frames_dir = dir.path / "frames";
  std::filesystem::create_directories(frames_dir);

  std::vector<Sample> samples;
  const auto add_frame = [&](const std::string& id, Lighting l,
                             std::uint8_t value, std::uint64_t t) {
    write_pgm(frames_dir / (id + ".pgm"), ImageU8(4, 4, value));
    Sample s;
    s.sample_id = id;
    s.recording_id = id.substr(0, id.find('_'));
    s.sensor = Sensor::Dvs;
    s.lighting = l;
    s.t = t;
    s.frame_path = "frames/" + id + ".pgm";
    samples.push_back(std::move(s));
  };
  add_frame("d_000000", Lighting::Day, 100, 0);
  add_frame("d_000001", Lighting::Day, 120, 1000);
  add_frame("n_000000", Lighting::Night, 10, 0);
  add_frame("n_000001", Lighting::Night, 30, 1000);
  write_manifest(dir.path / "manifest.jsonl", samples);

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"stats", str(dir.path / "manifest.jsonl"), "--out",
                   str(out)}) == 0);
  const json stats = load_json(out / "stats.json");
  REQUIRE(stats["groups"].size() == 2);
  for (const auto& g : stats["groups"]) {
    CHECK(g["sensor"] == "DVS");
    CHECK(g["n_pixels"] == 32);
    CHECK(g["n_frames"] == 2);
    if (g["lighting"] == "DAY") {
      CHECK(g["mu"].get<double>() == doctest::Approx(110.0));
      CHECK(g["sigma"].get<double>() == doctest::Approx(10.0));
    } else {
      CHECK(g["lighting"] == "NIGHT");
      CHECK(g["mu"].get<double>() == doctest::Approx(20.0));
      CHECK(g["sigma"].get<double>() == doctest::Approx(10.0));
    }
  }
  REQUIRE(stats["pairs"].size() == 1);
  CHECK(stats["pairs"][0]["sensor"] == "DVS");
  CHECK(stats["pairs"][0]["cohens_d"].get<double>() ==
        doctest::Approx(cohens_d(110.0, 10.0, 20.0, 10.0)));
  CHECK(stats["pairs"][0]["rel_mean_change_pct"].get<double>() ==
        doctest::Approx(rel_mean_change(110.0, 20.0)));
}

TEST_CASE("stats warns when a sensor has one lighting group") {
  TempDir dir;
  const auto frames_dir = dir.path / "frames";
  std::filesystem::create_directories(frames_dir);
  std::vector<Sample> samples = label_samples("d1", 3, Lighting::Day);
  for (const Sample& s : samples) {
    write_pgm(frames_dir / (s.sample_id + ".pgm"), ImageU8(2, 2, 50));
  }
  write_manifest(dir.path / "manifest.jsonl", samples);

  std::string err;
  const auto out = dir.path / "out";
  REQUIRE(run_cli({"stats", str(dir.path / "manifest.jsonl"), "--out",
                   str(out)},
                  &err) == 0);
  CHECK(err.find("single lighting group") != std::string::npos);
  CHECK(load_json(out / "stats.json")["pairs"].empty());
}

TEST_CASE("eval scores a predictions file against the manifest") {
  TempDir dir;
  auto samples = label_samples("t1", 5, Lighting::Night);
  const double truth[5] = {1.5, -2.25, 10.0, 7.75, -3.5};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i].steering_deg = truth[i];
  }
  write_manifest(dir.path / "test.jsonl", samples);

  std::string csv = "sample_id,prediction_deg\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s,%.6f\n",
                  samples[i].sample_id.c_str(), truth[i]);
    csv += buf;
  }
  testsup::spit(dir.path / "pred.csv", csv);

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"eval", str(dir.path / "test.jsonl"), "--predictions",
                   str(dir.path / "pred.csv"), "--train-bias", "DAY_BIASED",
                   "--out", str(out)}) == 0);

  const EvalFile e = read_eval_file(out / "eval.json");
  CHECK(e.result.n == 5);
  CHECK(e.result.rmse == 0.0);
  CHECK(e.result.eva == doctest::Approx(1.0));
  CHECK(e.result.by.lighting == Lighting::Night);
  CHECK(e.result.by.sensor == Sensor::Dvs);
  CHECK(e.result.by.train_bias == "DAY_BIASED");
  REQUIRE(e.trace.size() == 5);
  for (std::size_t i = 1; i < e.trace.size(); ++i) {
    CHECK(e.trace[i - 1].t <= e.trace[i].t);
  }
}

TEST_CASE("eval baseline sits at zero explained variance") {
  TempDir dir;
  auto train = label_samples("tr", 3, Lighting::Day);
  const double train_y[3] = {10.0, 20.0, 30.0};
  for (std::size_t i = 0; i < train.size(); ++i) {
    train[i].steering_deg = train_y[i];
    train[i].bias_set = BiasSet::NightBiased;
  }
  write_manifest(dir.path / "train.jsonl", train);

  auto test = label_samples("te", 4, Lighting::Day);
  const double test_y[4] = {15.0, 25.0, 18.0, 22.0};  // mean 20 = train mean
  for (std::size_t i = 0; i < test.size(); ++i) {
    test[i].steering_deg = test_y[i];
  }
  write_manifest(dir.path / "test.jsonl", test);

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"eval", str(dir.path / "test.jsonl"), "--baseline-mean",
                   "--train", str(dir.path / "train.jsonl"), "--out",
                   str(out)}) == 0);
  const EvalFile e = read_eval_file(out / "eval.json");
  CHECK(e.result.by.train_bias == "NIGHT_BIASED");  // from the manifest tags
  CHECK(std::abs(e.result.eva) < 1e-12);
  CHECK(e.result.rmse == doctest::Approx(std::sqrt(14.5)));
  for (const TracePoint& p : e.trace) CHECK(p.y_hat == 20.0);
}

TEST_CASE("eval rejects unknown ids and notes skipped samples") {
  TempDir dir;
  auto samples = label_samples("t1", 5, Lighting::Day);
  write_manifest(dir.path / "test.jsonl", samples);

  testsup::spit(dir.path / "bad.csv",
                "sample_id,prediction_deg\nghost_000000,1.0\nt1_000000,1.0\n");
  std::string err;
  CHECK(run_cli({"eval", str(dir.path / "test.jsonl"), "--predictions",
                 str(dir.path / "bad.csv"), "--train-bias", "DAY_BIASED",
                 "--out", str(dir.path / "out")},
                &err) == 1);
  CHECK(err.find("without a manifest entry") != std::string::npos);
  CHECK(err.find("ghost_000000") != std::string::npos);

  testsup::spit(dir.path / "partial.csv",
                "sample_id,prediction_deg\nt1_000000,1.0\nt1_000001,2.0\n"
                "t1_000002,3.0\n");
  const auto out = dir.path / "out2";
  REQUIRE(run_cli({"eval", str(dir.path / "test.jsonl"), "--predictions",
                   str(dir.path / "partial.csv"), "--train-bias",
                   "DAY_BIASED", "--out", str(out)},
                  &err) == 0);
  CHECK(err.find("lack predictions") != std::string::npos);
  CHECK(read_eval_file(out / "eval.json").result.n == 3);

  CHECK(run_cli({"eval", str(dir.path / "test.jsonl"), "--train-bias",
                 "DAY_BIASED", "--out", str(dir.path / "out3")},
                &err) == 1);
  CHECK(err.find("exactly one") != std::string::npos);
}

TEST_CASE("report rebuilds the penalty table from eval files") {
  TempDir dir;
  const auto write_eval = [&](const std::string& name, Lighting l, Sensor sn,
                              const std::string& bias, double rmse_v,
                              double eva_v) {
    EvalFile e;
    e.result.n = 50;
    e.result.rmse = rmse_v;
    e.result.eva = eva_v;
    e.result.by.lighting = l;
    e.result.by.sensor = sn;
    e.result.by.train_bias = bias;
    e.trace = {{0, 1.0, 1.2}, {50000, -1.0, -0.7}, {100000, 2.0, 1.6}};
    testsup::spit(dir.path / name, eval_file_json(e));
  };
  write_eval("day_dvs_match.json", Lighting::Day, Sensor::Dvs, "DAY_BIASED",
             11.60, 0.698);
  write_eval("day_dvs_mismatch.json", Lighting::Day, Sensor::Dvs,
             "NIGHT_BIASED", 17.30, 0.327);
  write_eval("night_aps_match.json", Lighting::Night, Sensor::Aps,
             "NIGHT_BIASED", 12.55, 0.645);
  write_eval("night_aps_mismatch.json", Lighting::Night, Sensor::Aps,
             "DAY_BIASED", 18.07, 0.263);

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"report", str(dir.path / "day_dvs_match.json"),
                   str(dir.path / "day_dvs_mismatch.json"),
                   str(dir.path / "night_aps_match.json"),
                   str(dir.path / "night_aps_mismatch.json"), "--out",
                   str(out)}) == 0);

  const std::string csv = testsup::slurp_text(out / "penalty.csv");
  CHECK(csv.find("DAY,DVS,NIGHT_BIASED,17.300000,0.327000,5.700000,49.138,"
                 "-0.371000,-53.152") != std::string::npos);
  CHECK(csv.find("NIGHT,APS,DAY_BIASED,18.070000,0.263000,5.520000,43.984,"
                 "-0.382000,-59.225") != std::string::npos);

  const std::string md = testsup::slurp_text(out / "penalty.md");
  CHECK(md.find("| DAY | DVS | DAY_BIASED | 11.600 | 0.698 |") !=
        std::string::npos);

  CHECK(std::filesystem::exists(out / "trace_day_dvs_day_biased.svg"));
  CHECK(std::filesystem::exists(out / "trace_day_dvs_night_biased.svg"));
  CHECK(std::filesystem::exists(out / "trace_night_aps_day_biased.svg"));
  CHECK(std::filesystem::exists(out / "trace_night_aps_night_biased.svg"));
  const std::string svg =
      testsup::slurp_text(out / "trace_day_dvs_day_biased.svg");
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("report notes pairs it cannot complete") {
  TempDir dir;
  EvalFile e;
  e.result.n = 10;
  e.result.rmse = 9.0;
  e.result.eva = 0.4;
  e.result.by.lighting = Lighting::Day;
  e.result.by.sensor = Sensor::Dvs;
  e.result.by.train_bias = "DAY_BIASED";
  e.trace = {{0, 1.0, 1.1}, {1000, 2.0, 1.9}};
  testsup::spit(dir.path / "only.json", eval_file_json(e));

  std::string err;
  const auto out = dir.path / "out";
  REQUIRE(run_cli({"report", str(dir.path / "only.json"), "--out", str(out)},
                  &err) == 0);
  CHECK(err.find("skipped") != std::string::npos);
  const std::string csv = testsup::slurp_text(out / "penalty.csv");
  CHECK(csv.find("\nDAY") == std::string::npos);  // header only
}

TEST_CASE("augment rewrites frames through the seeded transforms") {
  TempDir dir;
  const auto frames_dir = dir.path / "frames";
  std::filesystem::create_directories(frames_dir);
  std::mt19937_64 g(72);

  std::vector<Sample> samples = label_samples("a1", 4, Lighting::Day);
  std::vector<ImageF> sources;
  for (Sample& s : samples) {
    ImageF img = testsup::gen_image(g, 12, 12);
    for (double& v : img.data) v = static_cast<float>(v);
    s.frame_path = "frames/" + s.sample_id + ".pfm";
    write_pfm(frames_dir / (s.sample_id + ".pfm"), img);
    sources.push_back(std::move(img));
  }
  write_manifest(dir.path / "manifest.jsonl", samples);

  const auto cfg_path = dir.path / "aug.json";
  testsup::spit(cfg_path, R"({"p_crop": 1.0, "p_rotate": 1.0, "p_jitter": 1.0,)"
                          R"( "p_noise": 1.0, "p_blur": 1.0})");

  const auto out = dir.path / "out";
  REQUIRE(run_cli({"augment", str(dir.path / "manifest.jsonl"), "--config",
                   str(cfg_path), "--seed", "9", "--out", str(out)}) == 0);

  AugmentConfig cfg;
  cfg.p_crop = cfg.p_rotate = cfg.p_jitter = cfg.p_noise = cfg.p_blur = 1.0;
  cfg.seed = 9;
  const auto outputs = read_manifest(out / "manifest.jsonl");
  REQUIRE(outputs.size() == samples.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const ImageF got =
        read_pfm(resolve_frame_path(out / "manifest.jsonl", outputs[i]));
    const ImageF want = augment_sample(sources[i], outputs[i].sample_id, cfg);
    REQUIRE(got.data.size() == want.data.size());
    for (std::size_t k = 0; k < got.data.size(); ++k) {
      CHECK(got.data[k] ==
            doctest::Approx(static_cast<float>(want.data[k])).epsilon(1e-6));
    }
  }

  // rerun: byte-identical frames
  const auto out2 = dir.path / "out2";
  REQUIRE(run_cli({"augment", str(dir.path / "manifest.jsonl"), "--config",
                   str(cfg_path), "--seed", "9", "--threads", "3", "--out",
                   str(out2)}) == 0);
  CHECK(testsup::dir_contents(out, {"run.json"}) ==
        testsup::dir_contents(out2, {"run.json"}));
}
