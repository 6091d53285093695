#include "evgap/metrics.hpp"

#include <cmath>
#include <vector>

namespace evgap {

namespace {

// Neumaier-compensated sum: the correction catches both large-into-small and
// small-into-large additions.
double sum_compensated(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace

double mean_compensated(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty series");
  return sum_compensated(values) / static_cast<double>(values.size());
}

double population_variance(std::span<const double> values) {
  if (values.empty()) throw ValidationError("variance of an empty series");
  const double m = mean_compensated(values);
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - m;
    sq[i] = d * d;
  }
  return sum_compensated(sq) / static_cast<double>(values.size());
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) {
    throw ValidationError("series length mismatch: " +
                          std::to_string(y.size()) + " vs " +
                          std::to_string(y_hat.size()));
  }
  if (y.empty()) throw ValidationError("RMSE of an empty series");
  std::vector<double> sq(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - y_hat[i];
    sq[i] = d * d;
  }
  return std::sqrt(sum_compensated(sq) / static_cast<double>(y.size()));
}

double eva(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) {
    throw ValidationError("series length mismatch: " +
                          std::to_string(y.size()) + " vs " +
                          std::to_string(y_hat.size()));
  }
  if (y.size() < 2) throw ValidationError("EVA needs at least two samples");
  const double var_y = population_variance(y);
  if (var_y <= 0.0) {
    throw ValidationError("EVA is undefined on a constant target series");
  }
  std::vector<double> residual(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) residual[i] = y_hat[i] - y[i];
  return 1.0 - population_variance(residual) / var_y;
}

double cohens_d(double mu_day, double sigma_day, double mu_night,
                double sigma_night) {
  const double pooled =
      std::sqrt((sigma_day * sigma_day + sigma_night * sigma_night) / 2.0);
  if (pooled <= 0.0) {
    throw ValidationError("pooled standard deviation is zero");
  }
  return (mu_day - mu_night) / pooled;
}

double rel_mean_change(double mu_day, double mu_night) {
  if (mu_day == 0.0) {
    throw ValidationError("relative change undefined for zero day mean");
  }
  return 100.0 * (mu_night - mu_day) / mu_day;
}

void PixelAccumulator::add(const ImageU8& img) {
  std::uint64_t s = 0;
  std::uint64_t s2 = 0;
  for (std::uint8_t v : img.data) {
    s += v;
    s2 += static_cast<std::uint64_t>(v) * v;
  }
  sum += s;
  sum_sq += s2;
  n += img.data.size();
}

void PixelAccumulator::merge(const PixelAccumulator& other) {
  sum += other.sum;
  sum_sq += other.sum_sq;
  n += other.n;
}

SensorStats PixelAccumulator::finalize() const {
  if (n == 0) throw ValidationError("statistics over zero pixels");
  SensorStats st;
  st.n = n;
  st.mu = static_cast<double>(sum) / static_cast<double>(n);
  // sigma^2 = (n * S2 - S^2) / n^2 computed in 128-bit so the subtraction is
  // exact
  const auto big_n = static_cast<unsigned __int128>(n);
  const unsigned __int128 lhs = big_n * sum_sq;
  const unsigned __int128 rhs =
      static_cast<unsigned __int128>(sum) * sum;
  const unsigned __int128 num = lhs - rhs;
  st.sigma = std::sqrt(static_cast<double>(num) /
                       (static_cast<double>(n) * static_cast<double>(n)));
  return st;
}

SensorStats sensor_stats(std::span<const ImageU8> frames) {
  if (frames.empty()) throw ValidationError("statistics over zero frames");
  PixelAccumulator total;
#pragma omp parallel
  {
    PixelAccumulator local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(frames.size());
         ++i) {
      local.add(frames[i]);
    }
#pragma omp critical
    total.merge(local);
  }
  return total.finalize();
}

DomainShiftPenalty domain_shift_penalty(const EvalResult& match,
                                        const EvalResult& mismatch) {
  if (match.by.lighting != mismatch.by.lighting ||
      match.by.sensor != mismatch.by.sensor) {
    throw ValidationError(
        "penalty requires results on the same test condition");
  }
  if (match.rmse <= 0.0) {
    throw ValidationError("matched RMSE must be positive");
  }
  if (match.eva == 0.0) {
    throw ValidationError("matched EVA of zero leaves the relative change "
                          "undefined");
  }
  DomainShiftPenalty p;
  p.d_rmse = mismatch.rmse - match.rmse;
  p.d_rmse_pct = 100.0 * p.d_rmse / match.rmse;
  p.d_eva = mismatch.eva - match.eva;
  p.d_eva_pct = 100.0 * p.d_eva / match.eva;
  return p;
}

MeanBaseline MeanBaseline::fit(std::span<const double> train_y) {
  if (train_y.empty()) {
    throw ValidationError("cannot fit a baseline to an empty series");
  }
  return MeanBaseline(mean_compensated(train_y));
}

}  // namespace evgap
