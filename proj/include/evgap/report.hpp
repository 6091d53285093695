#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgap/metrics.hpp"

namespace evgap {

struct TracePoint {
  std::uint64_t t = 0;  // microseconds
  double y = 0.0;       // ground truth, degrees
  double y_hat = 0.0;   // prediction, degrees
};

// Serialized evaluation run: the metric block plus the per-sample trace the
// chart is drawn from.
struct EvalFile {
  EvalResult result;
  std::vector<TracePoint> trace;
};

std::string eval_file_json(const EvalFile& e);
EvalFile parse_eval_file(std::string_view json_text);
EvalFile read_eval_file(const std::filesystem::path& path);

struct PenaltyRow {
  Lighting lighting = Lighting::Day;
  Sensor sensor = Sensor::Dvs;
  EvalResult match;
  EvalResult mismatch;
  DomainShiftPenalty penalty;
};

// Pairs results by (lighting, sensor); within a pair, the matched result is
// the one whose training bias targets the test lighting. Groups lacking a
// match/mismatch pair are reported in `skipped` rather than failing the run.
std::vector<PenaltyRow> build_penalty_rows(std::span<const EvalFile> evals,
                                           std::vector<std::string>* skipped);

std::string penalty_table_markdown(std::span<const PenaltyRow> rows);
std::string penalty_table_csv(std::span<const PenaltyRow> rows);

// Ground truth vs prediction over time, one polyline each.
std::string trace_chart_svg(const EvalFile& e);
void write_trace_chart(const std::filesystem::path& path, const EvalFile& e);

}  // namespace evgap
