#include "evgap/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evgap/preprocess.hpp"
#include "json.hpp"

namespace evgap {

namespace {

using nlohmann::json;

void require_prob(double p, const char* name) {
  if (p < 0.0 || p > 1.0) {
    throw ValidationError(std::string(name) + " must be in [0, 1]");
  }
}

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw FormatError(std::string("config field ") + key +
                      " must be a number");
  }
  return j[key].get<double>();
}

}  // namespace

void AugmentConfig::validate() const {
  require_prob(p_crop, "p_crop");
  require_prob(p_rotate, "p_rotate");
  require_prob(p_jitter, "p_jitter");
  require_prob(p_noise, "p_noise");
  require_prob(p_blur, "p_blur");
  if (crop_ratio_lo <= 0.0 || crop_ratio_hi < crop_ratio_lo) {
    throw ValidationError("crop ratio interval is empty or non-positive");
  }
  if (crop_scale_lo <= 0.0 || crop_scale_hi < crop_scale_lo ||
      crop_scale_hi > 1.0) {
    throw ValidationError("crop scale interval must sit inside (0, 1]");
  }
  if (max_rot_deg < 0.0) throw ValidationError("max_rot_deg must be >= 0");
  if (jitter_brightness < 0.0 || jitter_brightness >= 1.0 ||
      jitter_contrast < 0.0 || jitter_contrast >= 1.0) {
    throw ValidationError("jitter strengths must be in [0, 1)");
  }
  if (noise_sigma < 0.0) throw ValidationError("noise_sigma must be >= 0");
  if (blur_kernel < 1 || blur_kernel % 2 == 0) {
    throw ValidationError("blur_kernel must be odd and positive");
  }
}

AugmentConfig parse_augment_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("config must be a JSON object");

  AugmentConfig cfg;
  cfg.p_crop = get_number(j, "p_crop", cfg.p_crop);
  cfg.crop_ratio_lo = get_number(j, "crop_ratio_lo", cfg.crop_ratio_lo);
  cfg.crop_ratio_hi = get_number(j, "crop_ratio_hi", cfg.crop_ratio_hi);
  cfg.crop_scale_lo = get_number(j, "crop_scale_lo", cfg.crop_scale_lo);
  cfg.crop_scale_hi = get_number(j, "crop_scale_hi", cfg.crop_scale_hi);
  cfg.p_rotate = get_number(j, "p_rotate", cfg.p_rotate);
  cfg.max_rot_deg = get_number(j, "max_rot_deg", cfg.max_rot_deg);
  cfg.p_jitter = get_number(j, "p_jitter", cfg.p_jitter);
  cfg.jitter_brightness =
      get_number(j, "jitter_brightness", cfg.jitter_brightness);
  cfg.jitter_contrast = get_number(j, "jitter_contrast", cfg.jitter_contrast);
  cfg.p_noise = get_number(j, "p_noise", cfg.p_noise);
  cfg.noise_mu = get_number(j, "noise_mu", cfg.noise_mu);
  cfg.noise_sigma = get_number(j, "noise_sigma", cfg.noise_sigma);
  cfg.p_blur = get_number(j, "p_blur", cfg.p_blur);
  cfg.blur_kernel =
      static_cast<int>(get_number(j, "blur_kernel", cfg.blur_kernel));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw FormatError("config field seed must be a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.validate();
  return cfg;
}

std::string augment_config_json(const AugmentConfig& cfg) {
  json j;
  j["p_crop"] = cfg.p_crop;
  j["crop_ratio_lo"] = cfg.crop_ratio_lo;
  j["crop_ratio_hi"] = cfg.crop_ratio_hi;
  j["crop_scale_lo"] = cfg.crop_scale_lo;
  j["crop_scale_hi"] = cfg.crop_scale_hi;
  j["p_rotate"] = cfg.p_rotate;
  j["max_rot_deg"] = cfg.max_rot_deg;
  j["p_jitter"] = cfg.p_jitter;
  j["jitter_brightness"] = cfg.jitter_brightness;
  j["jitter_contrast"] = cfg.jitter_contrast;
  j["p_noise"] = cfg.p_noise;
  j["noise_mu"] = cfg.noise_mu;
  j["noise_sigma"] = cfg.noise_sigma;
  j["p_blur"] = cfg.p_blur;
  j["blur_kernel"] = cfg.blur_kernel;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

ImageF crop_resized(const ImageF& img, const CropRect& rect) {
  if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 ||
      rect.x + rect.w > img.width || rect.y + rect.h > img.height) {
    throw ValidationError("crop rect outside image");
  }
  ImageF crop(rect.h, rect.w);
  for (int y = 0; y < rect.h; ++y) {
    for (int x = 0; x < rect.w; ++x) {
      crop.at(y, x) = img.at(rect.y + y, rect.x + x);
    }
  }
  return resize_bilinear(crop, img.height, img.width);
}

ImageF rotate(const ImageF& img, double theta_deg) {
  const double theta = theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cy = (img.height - 1) / 2.0;
  const double cx = (img.width - 1) / 2.0;
  ImageF out(img.height, img.width);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      // inverse map: rotate the destination point back into the source
      const double dx = x - cx;
      const double dy = y - cy;
      const double sx = c * dx + s * dy + cx;
      const double sy = -s * dx + c * dy + cy;
      if (sx < 0.0 || sy < 0.0 || sx > img.width - 1 || sy > img.height - 1) {
        out.at(y, x) = 0.0;
        continue;
      }
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, img.width - 1);
      const int y1 = std::min(y0 + 1, img.height - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      const double top = img.at(y0, x0) * (1.0 - fx) + img.at(y0, x1) * fx;
      const double bot = img.at(y1, x0) * (1.0 - fx) + img.at(y1, x1) * fx;
      out.at(y, x) = top * (1.0 - fy) + bot * fy;
    }
  }
  return out;
}

ImageF color_jitter(const ImageF& img, double brightness_factor,
                    double contrast_factor) {
  ImageF out(img.height, img.width);
  double sum = 0.0;
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    out.data[i] = brightness_factor * img.data[i];
    sum += out.data[i];
  }
  const double mean = sum / static_cast<double>(img.pixel_count());
  for (double& v : out.data) {
    v = std::clamp(contrast_factor * (v - mean) + mean, 0.0, 1.0);
  }
  return out;
}

ImageF gaussian_noise(const ImageF& img, double sigma, DerivedRng& rng,
                      double mu) {
  ImageF out(img.height, img.width);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    out.data[i] =
        std::clamp(img.data[i] + mu + sigma * rng.next_normal(), 0.0, 1.0);
  }
  return out;
}

std::vector<double> gaussian_kernel_weights(int kernel_size) {
  if (kernel_size < 1 || kernel_size % 2 == 0) {
    throw ValidationError("kernel size must be odd and positive");
  }
  const int r = kernel_size / 2;
  const double sigma = 0.4 * (kernel_size - 1);
  std::vector<double> w(kernel_size);
  if (kernel_size == 1) {
    w[0] = 1.0;
    return w;
  }
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    w[i + r] = v;
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

ImageF gaussian_blur(const ImageF& img, int kernel_size) {
  const std::vector<double> w = gaussian_kernel_weights(kernel_size);
  const int r = kernel_size / 2;

  ImageF tmp(img.height, img.width);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        const int sx = std::clamp(x + k, 0, img.width - 1);
        acc += w[k + r] * img.at(y, sx);
      }
      tmp.at(y, x) = acc;
    }
  }

  ImageF out(img.height, img.width);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        const int sy = std::clamp(y + k, 0, img.height - 1);
        acc += w[k + r] * tmp.at(sy, x);
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

ImageF augment_sample(const ImageF& frame, std::string_view sample_id,
                      const AugmentConfig& cfg) {
  cfg.validate();
  ImageF img = frame;

  // stream 0: resized crop
  {
    DerivedRng rng(cfg.seed, RngPurpose::Augment, sample_id, 0);
    if (rng.next_unit() < cfg.p_crop) {
      const double scale =
          rng.next_uniform(cfg.crop_scale_lo, cfg.crop_scale_hi);
      const double ratio =
          rng.next_uniform(cfg.crop_ratio_lo, cfg.crop_ratio_hi);
      const double area =
          scale * static_cast<double>(img.width) * img.height;
      CropRect rect;
      rect.w = std::clamp(
          static_cast<int>(std::lround(std::sqrt(area * ratio))), 1,
          img.width);
      rect.h = std::clamp(
          static_cast<int>(std::lround(std::sqrt(area / ratio))), 1,
          img.height);
      rect.x = static_cast<int>(
          rng.next_index(static_cast<std::uint64_t>(img.width - rect.w + 1)));
      rect.y = static_cast<int>(
          rng.next_index(static_cast<std::uint64_t>(img.height - rect.h + 1)));
      img = crop_resized(img, rect);
    }
  }

  // stream 1: rotation
  {
    DerivedRng rng(cfg.seed, RngPurpose::Augment, sample_id, 1);
    if (rng.next_unit() < cfg.p_rotate) {
      img = rotate(img, rng.next_uniform(-cfg.max_rot_deg, cfg.max_rot_deg));
    }
  }

  // stream 2: color jitter
  {
    DerivedRng rng(cfg.seed, RngPurpose::Augment, sample_id, 2);
    if (rng.next_unit() < cfg.p_jitter) {
      const double b = rng.next_uniform(1.0 - cfg.jitter_brightness,
                                        1.0 + cfg.jitter_brightness);
      const double c = rng.next_uniform(1.0 - cfg.jitter_contrast,
                                        1.0 + cfg.jitter_contrast);
      img = color_jitter(img, b, c);
    }
  }

  // stream 3: additive noise
  {
    DerivedRng rng(cfg.seed, RngPurpose::Augment, sample_id, 3);
    if (rng.next_unit() < cfg.p_noise) {
      img = gaussian_noise(img, cfg.noise_sigma, rng, cfg.noise_mu);
    }
  }

  // stream 4: blur
  {
    DerivedRng rng(cfg.seed, RngPurpose::Augment, sample_id, 4);
    if (rng.next_unit() < cfg.p_blur) {
      img = gaussian_blur(img, cfg.blur_kernel);
    }
  }
  return img;
}

}  // namespace evgap
