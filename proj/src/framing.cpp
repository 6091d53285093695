#include "evgap/framing.hpp"

#include <algorithm>
#include <cstdint>

namespace evgap {

namespace {

// Bins events[first, last) into the pair; callers have already selected the
// window span.
void accumulate_range(const EventStream& stream, std::size_t first,
                      std::size_t last, HistogramPair& hist) {
  const int width = hist.width;
  for (std::size_t i = first; i < last; ++i) {
    const Event& e = stream.events[i];
    const std::size_t idx = static_cast<std::size_t>(e.y) * width + e.x;
    if (e.polarity == Polarity::On) {
      ++hist.on[idx];
    } else {
      ++hist.off[idx];
    }
  }
}

std::size_t lower_bound_t(const EventStream& stream, std::uint64_t t) {
  const auto it = std::lower_bound(
      stream.events.begin(), stream.events.end(), t,
      [](const Event& e, std::uint64_t value) { return e.t < value; });
  return static_cast<std::size_t>(it - stream.events.begin());
}

}  // namespace

HistogramPair accumulate_histograms(const EventStream& stream,
                                    std::uint64_t t_start,
                                    std::uint64_t period_us) {
  if (period_us == 0) throw ValidationError("period_us must be positive");
  HistogramPair hist;
  hist.width = stream.width;
  hist.height = stream.height;
  const std::size_t pixels =
      static_cast<std::size_t>(stream.width) * stream.height;
  hist.on.assign(pixels, 0);
  hist.off.assign(pixels, 0);

  const std::size_t first = lower_bound_t(stream, t_start);
  const std::size_t last = lower_bound_t(stream, t_start + period_us);
  accumulate_range(stream, first, last, hist);
  return hist;
}

EventFrame combine_to_frame(const HistogramPair& hist, int gain,
                            std::uint64_t t_start, std::uint64_t period_us) {
  if (gain < 1) throw ValidationError("gain must be >= 1");
  if (period_us == 0) throw ValidationError("period_us must be positive");
  EventFrame frame;
  frame.t_start = t_start;
  frame.period_us = period_us;
  frame.pixels = ImageU8(hist.height, hist.width);
  const std::size_t n = frame.pixels.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t diff =
        static_cast<std::int64_t>(hist.on[i]) - hist.off[i];
    const std::int64_t v = 128 + gain * diff;
    frame.pixels.data[i] =
        static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255));
  }
  return frame;
}

std::uint64_t window_count(const EventStream& stream,
                           std::uint64_t period_us) {
  if (stream.events.empty()) throw ValidationError("empty event stream");
  if (period_us == 0) throw ValidationError("period_us must be positive");
  return (stream.events.back().t - stream.events.front().t) / period_us + 1;
}

std::vector<EventFrame> frame_recording(const EventStream& stream,
                                        std::uint64_t period_us, int gain) {
  const std::uint64_t windows = window_count(stream, period_us);
  if (gain < 1) throw ValidationError("gain must be >= 1");
  const std::uint64_t t0 = stream.events.front().t;

  std::vector<EventFrame> frames(windows);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(windows); ++k) {
    const std::uint64_t t_start = t0 + static_cast<std::uint64_t>(k) * period_us;
    HistogramPair hist;
    hist.width = stream.width;
    hist.height = stream.height;
    const std::size_t pixels =
        static_cast<std::size_t>(stream.width) * stream.height;
    hist.on.assign(pixels, 0);
    hist.off.assign(pixels, 0);
    const std::size_t first = lower_bound_t(stream, t_start);
    const std::size_t last = lower_bound_t(stream, t_start + period_us);
    accumulate_range(stream, first, last, hist);
    frames[k] = combine_to_frame(hist, gain, t_start, period_us);
  }
  return frames;
}

}  // namespace evgap
