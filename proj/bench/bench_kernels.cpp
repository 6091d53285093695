// Times the parallel kernels against the serial reference and checks that
// both sides agree on the output.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "evgap/framing.hpp"
#include "evgap/image.hpp"
#include "evgap/metrics.hpp"
#include "evgap/preprocess.hpp"
#include "evgap/augment.hpp"
#include "evgap/types.hpp"
#include "reference.hpp"

using namespace evgap;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() /
         reps;
}

void row(const char* name, double serial_ms, double parallel_ms,
         double max_diff) {
  std::printf("%-24s %10.2f %12.2f %9.2fx %12.2e\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, max_diff);
}

double image_diff(const ImageF& a, const ImageF& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  }
  return m;
}

EventStream make_stream(std::size_t n) {
  std::mt19937_64 g(1);
  EventStream s;
  s.width = 346;
  s.height = 260;
  s.events.reserve(n);
  std::uniform_int_distribution<int> xd(0, 345), yd(0, 259);
  std::uniform_int_distribution<std::uint64_t> step(0, 10);
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s.events.push_back({t, static_cast<std::uint16_t>(xd(g)),
                        static_cast<std::uint16_t>(yd(g)),
                        (g() & 1) ? Polarity::On : Polarity::Off});
    t += step(g);
  }
  return s;
}

ImageF make_image(int h, int w) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageF img(h, w, 0.0);
  for (double& v : img.data) v = u(g);
  return img;
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", omp_get_max_threads());
  std::printf("%-24s %10s %12s %10s %12s\n", "kernel", "serial ms",
              "parallel ms", "speedup", "max diff");

  {
    const EventStream s = make_stream(5000000);
    std::vector<EventFrame> out_p, out_s;
    const double pms =
        time_ms([&] { out_p = frame_recording(s, 50000, 3); }, 3);
    const double sms =
        time_ms([&] { out_s = ref::frame_recording(s, 50000, 3); }, 3);
    row("frame 5M events", sms, pms, out_p == out_s ? 0.0 : 1.0);
  }
  {
    const ImageF img = make_image(960, 1280);
    ImageF out_p, out_s;
    const double pms =
        time_ms([&] { out_p = resize_bilinear(img, 224, 224); }, 20);
    const double sms =
        time_ms([&] { out_s = ref::resize_bilinear(img, 224, 224); }, 20);
    row("resize 1280x960->224", sms, pms, image_diff(out_p, out_s));
  }
  {
    const ImageF img = make_image(1024, 1024);
    ImageF out_p, out_s;
    const double pms = time_ms([&] { out_p = rotate(img, 2.5); }, 10);
    const double sms = time_ms([&] { out_s = ref::rotate(img, 2.5); }, 10);
    row("rotate 1024x1024", sms, pms, image_diff(out_p, out_s));
  }
  {
    const ImageF img = make_image(1024, 1024);
    ImageF out_p, out_s;
    const double pms = time_ms([&] { out_p = gaussian_blur(img, 7); }, 10);
    const double sms =
        time_ms([&] { out_s = ref::gaussian_blur(img, 7); }, 10);
    row("blur 1024x1024 k7", sms, pms, image_diff(out_p, out_s));
  }
  {
    std::vector<ImageU8> frames;
    std::mt19937_64 g(3);
    for (int i = 0; i < 200; ++i) {
      ImageU8 f(260, 346, 0);
      for (std::uint8_t& v : f.data) v = static_cast<std::uint8_t>(g());
      frames.push_back(std::move(f));
    }
    SensorStats st_p, st_s;
    const double pms = time_ms([&] { st_p = sensor_stats(frames); }, 5);
    const double sms = time_ms([&] { st_s = ref::sensor_stats(frames); }, 5);
    row("stats 200 frames", sms, pms,
        std::max(std::abs(st_p.mu - st_s.mu),
                 std::abs(st_p.sigma - st_s.sigma)));
  }
  return 0;
}
