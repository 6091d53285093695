#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evgap/image.hpp"
#include "evgap/rng.hpp"
#include "evgap/types.hpp"

namespace evgap {

// Training-time transforms applied in a fixed order: resized crop, rotation,
// color jitter, Gaussian noise, Gaussian blur. Each transform draws its gate
// and parameters from its own stream of DerivedRng(seed, Augment, sample_id,
// transform index), so augmentation is a pure function of (frame, id,
// config).
struct AugmentConfig {
  double p_crop = 0.30;
  double crop_ratio_lo = 0.8, crop_ratio_hi = 1.2;
  double crop_scale_lo = 0.8, crop_scale_hi = 1.0;
  double p_rotate = 0.40;
  double max_rot_deg = 3.0;
  double p_jitter = 0.20;
  double jitter_brightness = 0.2;
  double jitter_contrast = 0.2;
  double p_noise = 0.30;
  double noise_mu = 0.0;
  double noise_sigma = 0.01;
  double p_blur = 0.20;
  int blur_kernel = 3;
  std::uint64_t seed = 0;

  void validate() const;  // probabilities in [0,1], intervals non-empty, odd kernel
};

AugmentConfig parse_augment_config(std::string_view json_text);
std::string augment_config_json(const AugmentConfig& cfg);

struct CropRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

// Crop rect, then bilinear-resize back to the input dimensions.
ImageF crop_resized(const ImageF& img, const CropRect& rect);

// Rotation about the frame center, bilinear sampling, zero fill where the
// source falls outside the frame.
ImageF rotate(const ImageF& img, double theta_deg);

// v -> clamp(c * (b*v - m) + m, 0, 1) with m the post-brightness frame mean.
ImageF color_jitter(const ImageF& img, double brightness_factor,
                    double contrast_factor);

// v -> clamp(v + mu + sigma * N(0,1), 0, 1), row-major draws from rng.
ImageF gaussian_noise(const ImageF& img, double sigma, DerivedRng& rng,
                      double mu = 0.0);

// Separable Gaussian, sigma = 0.4 * (kernel_size - 1), edge-replicate
// padding; weights sum to 1 so constant frames are fixed points.
std::vector<double> gaussian_kernel_weights(int kernel_size);
ImageF gaussian_blur(const ImageF& img, int kernel_size = 3);

ImageF augment_sample(const ImageF& frame, std::string_view sample_id,
                      const AugmentConfig& cfg);

}  // namespace evgap
