#include "evgap/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace evgap {

namespace {

using nlohmann::json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string eval_file_json(const EvalFile& e) {
  json j;
  j["n"] = e.result.n;
  j["rmse"] = e.result.rmse;
  j["eva"] = e.result.eva;
  j["lighting"] = to_string(e.result.by.lighting);
  j["sensor"] = to_string(e.result.by.sensor);
  j["train_bias"] = e.result.by.train_bias;
  json trace = json::array();
  for (const TracePoint& p : e.trace) {
    json row;
    row["t"] = p.t;
    row["y"] = p.y;
    row["y_hat"] = p.y_hat;
    trace.push_back(row);
  }
  j["trace"] = trace;
  return j.dump(2);
}

EvalFile parse_eval_file(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid evaluation JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("evaluation file must be an object");
  for (const char* key : {"n", "rmse", "eva", "lighting", "sensor",
                          "train_bias", "trace"}) {
    if (!j.contains(key)) {
      throw FormatError(std::string("evaluation file missing field ") + key);
    }
  }
  EvalFile e;
  e.result.n = j["n"].get<std::size_t>();
  e.result.rmse = j["rmse"].get<double>();
  e.result.eva = j["eva"].get<double>();
  e.result.by.lighting =
      lighting_from_string(j["lighting"].get<std::string>());
  e.result.by.sensor = sensor_from_string(j["sensor"].get<std::string>());
  e.result.by.train_bias = j["train_bias"].get<std::string>();
  if (!j["trace"].is_array()) {
    throw FormatError("evaluation trace must be an array");
  }
  for (const auto& row : j["trace"]) {
    TracePoint p;
    p.t = row.at("t").get<std::uint64_t>();
    p.y = row.at("y").get<double>();
    p.y_hat = row.at("y_hat").get<double>();
    e.trace.push_back(p);
  }
  return e;
}

EvalFile read_eval_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_eval_file(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<PenaltyRow> build_penalty_rows(std::span<const EvalFile> evals,
                                           std::vector<std::string>* skipped) {
  std::map<std::pair<Lighting, Sensor>,
           std::pair<const EvalFile*, const EvalFile*>>
      groups;  // (match, mismatch)
  for (const EvalFile& e : evals) {
    const auto key = std::make_pair(e.result.by.lighting, e.result.by.sensor);
    const BiasSet bias = bias_from_string(e.result.by.train_bias);
    const bool matched = bias_target(bias) == e.result.by.lighting;
    auto& slot = groups[key];
    const EvalFile*& dst = matched ? slot.first : slot.second;
    if (dst != nullptr) {
      throw ValidationError(
          "duplicate " + std::string(matched ? "matched" : "mismatched") +
          " evaluation for " + std::string(to_string(key.first)) + "/" +
          std::string(to_string(key.second)));
    }
    dst = &e;
  }

  std::vector<PenaltyRow> rows;
  for (const auto& [key, pair] : groups) {
    const std::string label = std::string(to_string(key.first)) + "/" +
                              std::string(to_string(key.second));
    if (pair.first == nullptr || pair.second == nullptr) {
      if (skipped) {
        skipped->push_back(label + " lacks a " +
                           (pair.first ? "mismatched" : "matched") +
                           " evaluation");
      }
      continue;
    }
    PenaltyRow row;
    row.lighting = key.first;
    row.sensor = key.second;
    row.match = pair.first->result;
    row.mismatch = pair.second->result;
    row.penalty = domain_shift_penalty(row.match, row.mismatch);
    rows.push_back(row);
  }
  return rows;
}

std::string penalty_table_markdown(std::span<const PenaltyRow> rows) {
  std::string out =
      "| test | sensor | train bias | RMSE (deg) | EVA | dRMSE | dRMSE % | "
      "dEVA | dEVA % |\n"
      "|---|---|---|---|---|---|---|---|---|\n";
  for (const PenaltyRow& r : rows) {
    const std::string test = std::string(to_string(r.lighting));
    const std::string sensor = std::string(to_string(r.sensor));
    out += "| " + test + " | " + sensor + " | " + r.match.by.train_bias +
           " | " + fixed(r.match.rmse, 3) + " | " + fixed(r.match.eva, 3) +
           " | | | | |\n";
    out += "| " + test + " | " + sensor + " | " + r.mismatch.by.train_bias +
           " | " + fixed(r.mismatch.rmse, 3) + " | " +
           fixed(r.mismatch.eva, 3) + " | " + fixed(r.penalty.d_rmse, 3) +
           " | " + fixed(r.penalty.d_rmse_pct, 1) + " | " +
           fixed(r.penalty.d_eva, 3) + " | " + fixed(r.penalty.d_eva_pct, 1) +
           " |\n";
  }
  return out;
}

std::string penalty_table_csv(std::span<const PenaltyRow> rows) {
  std::string out =
      "test_lighting,sensor,train_bias,rmse_deg,eva,d_rmse,d_rmse_pct,d_eva,"
      "d_eva_pct\n";
  for (const PenaltyRow& r : rows) {
    const std::string test = std::string(to_string(r.lighting));
    const std::string sensor = std::string(to_string(r.sensor));
    out += test + "," + sensor + "," + r.match.by.train_bias + "," +
           fixed(r.match.rmse, 6) + "," + fixed(r.match.eva, 6) + ",,,,\n";
    out += test + "," + sensor + "," + r.mismatch.by.train_bias + "," +
           fixed(r.mismatch.rmse, 6) + "," + fixed(r.mismatch.eva, 6) + "," +
           fixed(r.penalty.d_rmse, 6) + "," + fixed(r.penalty.d_rmse_pct, 3) +
           "," + fixed(r.penalty.d_eva, 6) + "," +
           fixed(r.penalty.d_eva_pct, 3) + "\n";
  }
  return out;
}

std::string trace_chart_svg(const EvalFile& e) {
  constexpr int kWidth = 900;
  constexpr int kHeight = 300;
  constexpr int kPad = 40;

  if (e.trace.empty()) {
    throw ValidationError("cannot chart an empty trace");
  }
  std::uint64_t t_min = e.trace.front().t;
  std::uint64_t t_max = e.trace.front().t;
  double v_min = e.trace.front().y;
  double v_max = e.trace.front().y;
  for (const TracePoint& p : e.trace) {
    t_min = std::min(t_min, p.t);
    t_max = std::max(t_max, p.t);
    v_min = std::min({v_min, p.y, p.y_hat});
    v_max = std::max({v_max, p.y, p.y_hat});
  }
  if (v_max == v_min) {
    v_max += 1.0;
    v_min -= 1.0;
  }
  const double t_span =
      t_max > t_min ? static_cast<double>(t_max - t_min) : 1.0;

  auto sx = [&](std::uint64_t t) {
    return kPad +
           (kWidth - 2.0 * kPad) * static_cast<double>(t - t_min) / t_span;
  };
  auto sy = [&](double v) {
    return kHeight - kPad -
           (kHeight - 2.0 * kPad) * (v - v_min) / (v_max - v_min);
  };

  auto polyline = [&](const char* color, bool predicted) {
    std::string pts;
    for (const TracePoint& p : e.trace) {
      pts += fixed(sx(p.t), 1) + "," +
             fixed(sy(predicted ? p.y_hat : p.y), 1) + " ";
    }
    if (!pts.empty()) pts.pop_back();
    return "  <polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
         "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
         std::to_string(kHeight) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "  <text x=\"" + std::to_string(kPad) + "\" y=\"20\" "
         "font-family=\"sans-serif\" font-size=\"13\">steering, " +
         std::string(to_string(e.result.by.lighting)) + " " +
         std::string(to_string(e.result.by.sensor)) + ", trained " +
         e.result.by.train_bias + " (RMSE " + fixed(e.result.rmse, 2) +
         " deg, EVA " + fixed(e.result.eva, 3) + ")</text>\n";
  svg += polyline("#1f77b4", false);
  svg += polyline("#d62728", true);
  svg += "  <text x=\"" + std::to_string(kWidth - 200) +
         "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#1f77b4\">ground truth</text>\n";
  svg += "  <text x=\"" + std::to_string(kWidth - 90) +
         "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#d62728\">predicted</text>\n";
  svg += "</svg>\n";
  return svg;
}

void write_trace_chart(const std::filesystem::path& path, const EvalFile& e) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << trace_chart_svg(e);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace evgap
