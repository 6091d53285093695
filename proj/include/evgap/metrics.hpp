#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "evgap/image.hpp"
#include "evgap/types.hpp"

namespace evgap {

// Steering regression and dataset statistics. Sums use compensated
// accumulation, so results are independent of input order to well below
// 1e-9 relative.

// sqrt(mean((y - y_hat)^2)); series must be equal-length and non-empty.
double rmse(std::span<const double> y, std::span<const double> y_hat);

// 1 - Var(y_hat - y) / Var(y), population variance on both sides; requires
// n >= 2 and Var(y) > 0.
double eva(std::span<const double> y, std::span<const double> y_hat);

// (mu_day - mu_night) / sqrt((sigma_day^2 + sigma_night^2) / 2), signed;
// positive when the day mean is larger.
double cohens_d(double mu_day, double sigma_day, double mu_night,
                double sigma_night);

// 100 * (mu_night - mu_day) / mu_day
double rel_mean_change(double mu_day, double mu_night);

double mean_compensated(std::span<const double> values);
double population_variance(std::span<const double> values);

struct SensorStats {
  double mu = 0.0;
  double sigma = 0.0;
  std::uint64_t n = 0;  // pixels
};

// Exact integer pixel accumulation; safe to merge across threads or files.
struct PixelAccumulator {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::uint64_t n = 0;

  void add(const ImageU8& img);
  void merge(const PixelAccumulator& other);
  SensorStats finalize() const;  // population sigma
};

// Global-pixel mu/sigma over every frame. Parallel across frames with exact
// integer partial sums.
SensorStats sensor_stats(std::span<const ImageU8> frames);

struct EvalLabels {
  Lighting lighting = Lighting::Day;
  Sensor sensor = Sensor::Dvs;
  std::string train_bias;  // e.g. "DAY_BIASED", "PURE_NIGHT"
};

struct EvalResult {
  std::size_t n = 0;
  double rmse = 0.0;
  double eva = 0.0;
  EvalLabels by;
};

struct DomainShiftPenalty {
  double d_rmse = 0.0;      // mismatch - match, degrees
  double d_rmse_pct = 0.0;  // relative to the matched RMSE
  double d_eva = 0.0;
  double d_eva_pct = 0.0;   // relative to the matched EVA, signed
};

// Requires equal lighting and sensor labels on both results.
DomainShiftPenalty domain_shift_penalty(const EvalResult& match,
                                        const EvalResult& mismatch);

// Constant predictor anchored at the training mean (EVA = 0 on any series
// with the same mean).
class MeanBaseline {
 public:
  static MeanBaseline fit(std::span<const double> train_y);
  double predict() const { return mean_; }

 private:
  explicit MeanBaseline(double mean) : mean_(mean) {}
  double mean_ = 0.0;
};

}  // namespace evgap
