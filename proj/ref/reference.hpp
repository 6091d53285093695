#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "evgap/framing.hpp"
#include "evgap/image.hpp"
#include "evgap/metrics.hpp"
#include "evgap/types.hpp"

// Serial scalar implementations kept solely for testing and benchmarking.
// Each routine is written independently of the parallel kernels: different
// traversal, different accumulation, no shared helpers beyond the public
// data types. The library under test must agree with these on random
// inputs.

namespace evgap::ref {

// Single pass over the events, bucketing each one by its window index.
std::vector<EventFrame> frame_recording(const EventStream& stream,
                                        std::uint64_t period_us, int gain);

ImageF resize_bilinear(const ImageF& img, int out_height, int out_width);
ImageF rotate(const ImageF& img, double theta_deg);

// Direct 2D convolution with the outer product of the 1D weights.
ImageF gaussian_blur(const ImageF& img, int kernel_size);

ImageF color_jitter(const ImageF& img, double brightness_factor,
                    double contrast_factor);

// Naive long-double accumulation.
double rmse(std::span<const double> y, std::span<const double> y_hat);
double eva(std::span<const double> y, std::span<const double> y_hat);
SensorStats sensor_stats(std::span<const ImageU8> frames);

// n-th value of the documented derived stream, re-implemented from the
// written constants rather than the library code.
std::uint64_t rng_stream_value(std::uint64_t seed, std::uint64_t purpose,
                               std::string_view id, std::uint64_t stream,
                               std::size_t n);

}  // namespace evgap::ref
