#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace evgap::ref {

std::vector<EventFrame> frame_recording(const EventStream& stream,
                                        std::uint64_t period_us, int gain) {
  if (stream.events.empty()) {
    throw ValidationError("cannot frame an empty stream");
  }
  if (period_us == 0) throw ValidationError("period must be positive");

  const std::uint64_t t0 = stream.events.front().t;
  const std::uint64_t tn = stream.events.back().t;
  const std::uint64_t windows = (tn - t0) / period_us + 1;

  std::vector<HistogramPair> hists(windows);
  for (HistogramPair& h : hists) {
    h.width = stream.width;
    h.height = stream.height;
    h.on.assign(static_cast<std::size_t>(stream.width) * stream.height, 0);
    h.off.assign(static_cast<std::size_t>(stream.width) * stream.height, 0);
  }
  for (const Event& e : stream.events) {
    const std::uint64_t k = (e.t - t0) / period_us;
    const std::size_t idx =
        static_cast<std::size_t>(e.y) * stream.width + e.x;
    (e.polarity == Polarity::On ? hists[k].on : hists[k].off)[idx] += 1;
  }

  std::vector<EventFrame> frames;
  frames.reserve(windows);
  for (std::uint64_t k = 0; k < windows; ++k) {
    EventFrame f;
    f.t_start = t0 + k * period_us;
    f.period_us = period_us;
    f.pixels = ImageU8(stream.height, stream.width);
    for (std::size_t i = 0; i < f.pixels.data.size(); ++i) {
      const long long diff = static_cast<long long>(hists[k].on[i]) -
                             static_cast<long long>(hists[k].off[i]);
      const long long v = 128 + static_cast<long long>(gain) * diff;
      f.pixels.data[i] =
          static_cast<std::uint8_t>(std::clamp<long long>(v, 0, 255));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

ImageF resize_bilinear(const ImageF& img, int out_height, int out_width) {
  ImageF out(out_height, out_width);
  for (int oy = 0; oy < out_height; ++oy) {
    for (int ox = 0; ox < out_width; ++ox) {
      double sy = (oy + 0.5) * img.height / out_height - 0.5;
      double sx = (ox + 0.5) * img.width / out_width - 0.5;
      sy = std::min(std::max(sy, 0.0), static_cast<double>(img.height - 1));
      sx = std::min(std::max(sx, 0.0), static_cast<double>(img.width - 1));
      const int y0 = static_cast<int>(sy);
      const int x0 = static_cast<int>(sx);
      const int y1 = y0 + 1 < img.height ? y0 + 1 : img.height - 1;
      const int x1 = x0 + 1 < img.width ? x0 + 1 : img.width - 1;
      const double fy = sy - y0;
      const double fx = sx - x0;
      out.at(oy, ox) = (1.0 - fy) * (1.0 - fx) * img.at(y0, x0) +
                       (1.0 - fy) * fx * img.at(y0, x1) +
                       fy * (1.0 - fx) * img.at(y1, x0) +
                       fy * fx * img.at(y1, x1);
    }
  }
  return out;
}

ImageF rotate(const ImageF& img, double theta_deg) {
  const double theta = theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cy = (img.height - 1) / 2.0;
  const double cx = (img.width - 1) / 2.0;
  ImageF out(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double sx = c * (x - cx) + s * (y - cy) + cx;
      const double sy = -s * (x - cx) + c * (y - cy) + cy;
      if (sx < 0.0 || sy < 0.0 || sx > img.width - 1 || sy > img.height - 1) {
        out.at(y, x) = 0.0;
        continue;
      }
      const int y0 = static_cast<int>(sy);
      const int x0 = static_cast<int>(sx);
      const int y1 = y0 + 1 < img.height ? y0 + 1 : img.height - 1;
      const int x1 = x0 + 1 < img.width ? x0 + 1 : img.width - 1;
      const double fy = sy - y0;
      const double fx = sx - x0;
      out.at(y, x) = (1.0 - fy) * (1.0 - fx) * img.at(y0, x0) +
                     (1.0 - fy) * fx * img.at(y0, x1) +
                     fy * (1.0 - fx) * img.at(y1, x0) +
                     fy * fx * img.at(y1, x1);
    }
  }
  return out;
}

ImageF gaussian_blur(const ImageF& img, int kernel_size) {
  const int r = kernel_size / 2;
  const double sigma = 0.4 * (kernel_size - 1);
  std::vector<double> w(kernel_size, 1.0);
  if (kernel_size > 1) {
    double total = 0.0;
    for (int i = 0; i < kernel_size; ++i) {
      w[i] = std::exp(-((i - r) * (i - r)) / (2.0 * sigma * sigma));
      total += w[i];
    }
    for (double& v : w) v /= total;
  }
  ImageF out(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int ky = 0; ky < kernel_size; ++ky) {
        for (int kx = 0; kx < kernel_size; ++kx) {
          int sy = y + ky - r;
          int sx = x + kx - r;
          sy = std::min(std::max(sy, 0), img.height - 1);
          sx = std::min(std::max(sx, 0), img.width - 1);
          acc += w[ky] * w[kx] * img.at(sy, sx);
        }
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

ImageF color_jitter(const ImageF& img, double brightness_factor,
                    double contrast_factor) {
  long double sum = 0.0L;
  for (double v : img.data) sum += brightness_factor * v;
  const double mean = static_cast<double>(sum / img.data.size());
  ImageF out(img.height, img.width);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    double v = contrast_factor * (brightness_factor * img.data[i] - mean) +
               mean;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    out.data[i] = v;
  }
  return out;
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const long double d = static_cast<long double>(y[i]) - y_hat[i];
    acc += d * d;
  }
  return static_cast<double>(
      std::sqrt(acc / static_cast<long double>(y.size())));
}

double eva(std::span<const double> y, std::span<const double> y_hat) {
  long double mean_y = 0.0L;
  long double mean_r = 0.0L;
  for (std::size_t i = 0; i < y.size(); ++i) {
    mean_y += y[i];
    mean_r += static_cast<long double>(y_hat[i]) - y[i];
  }
  mean_y /= static_cast<long double>(y.size());
  mean_r /= static_cast<long double>(y.size());
  long double var_y = 0.0L;
  long double var_r = 0.0L;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const long double dy = y[i] - mean_y;
    const long double dr =
        (static_cast<long double>(y_hat[i]) - y[i]) - mean_r;
    var_y += dy * dy;
    var_r += dr * dr;
  }
  return static_cast<double>(1.0L - var_r / var_y);
}

SensorStats sensor_stats(std::span<const ImageU8> frames) {
  long double sum = 0.0L;
  std::uint64_t n = 0;
  for (const ImageU8& f : frames) {
    for (std::uint8_t v : f.data) sum += v;
    n += f.data.size();
  }
  const long double mu = sum / static_cast<long double>(n);
  long double sq = 0.0L;
  for (const ImageU8& f : frames) {
    for (std::uint8_t v : f.data) {
      const long double d = static_cast<long double>(v) - mu;
      sq += d * d;
    }
  }
  SensorStats st;
  st.n = n;
  st.mu = static_cast<double>(mu);
  st.sigma =
      static_cast<double>(std::sqrt(sq / static_cast<long double>(n)));
  return st;
}

std::uint64_t rng_stream_value(std::uint64_t seed, std::uint64_t purpose,
                               std::string_view id, std::uint64_t stream,
                               std::size_t n) {
  const std::uint64_t golden = 0x9E3779B97F4A7C15ull;
  auto finalize = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : id) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  std::uint64_t state = seed;
  state = finalize(state + golden + purpose);
  state = finalize(state + golden + hash);
  state = finalize(state + golden + stream);
  std::uint64_t value = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    state += golden;
    value = finalize(state);
  }
  return value;
}

}  // namespace evgap::ref
