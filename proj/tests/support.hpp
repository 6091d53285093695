#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evgap/evio.hpp"
#include "evgap/image.hpp"
#include "evgap/manifest.hpp"
#include "evgap/types.hpp"

namespace testsup {

namespace fs = std::filesystem;

inline fs::path cli_path() {
  const char* p = std::getenv("EVGAP_BIN");
  if (!p) throw std::runtime_error("EVGAP_BIN environment variable not set");
  return fs::path(p);
}

struct TempDir {
  fs::path path;

  TempDir() {
    static std::mt19937_64 gen{std::random_device{}()};
    const fs::path base = fs::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
      fs::path candidate =
          base / ("evgap_test_" + std::to_string(gen()));
      std::error_code ec;
      if (fs::create_directory(candidate, ec)) {
        path = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create a temporary directory");
  }

  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline std::string slurp_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::uint8_t> slurp_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline void spit(const fs::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

// Runs the CLI binary; returns the exit code, optionally capturing stderr.
// Arguments must not contain single quotes.
inline int run_cli(const std::vector<std::string>& args,
                   std::string* stderr_out = nullptr) {
  static std::mt19937_64 gen{std::random_device{}()};
  const fs::path errfile =
      fs::temp_directory_path() / ("evgap_stderr_" + std::to_string(gen()));
  std::string cmd = "'" + cli_path().string() + "'";
  for (const std::string& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>'" + errfile.string() + "'";
  const int status = std::system(cmd.c_str());
  if (stderr_out) *stderr_out = slurp_text(errfile);
  std::error_code ec;
  fs::remove(errfile, ec);
  if (!WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

inline double rel_diff(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / denom;
}

inline bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  if (std::abs(a - b) <= tol) return true;  // absolute floor near zero
  return rel_diff(a, b) <= tol;
}

// Random event stream: non-decreasing timestamps, bounded coordinates.
inline evgap::EventStream gen_stream(std::mt19937_64& g, std::size_t n,
                                     std::uint16_t width = 346,
                                     std::uint16_t height = 260,
                                     std::uint64_t max_step = 200) {
  evgap::EventStream s;
  s.width = width;
  s.height = height;
  std::uniform_int_distribution<std::uint64_t> step(0, max_step);
  std::uniform_int_distribution<int> xd(0, width - 1);
  std::uniform_int_distribution<int> yd(0, height - 1);
  std::bernoulli_distribution pol(0.5);
  std::uint64_t t = step(g);
  s.events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    evgap::Event e;
    e.t = t;
    e.x = static_cast<std::uint16_t>(xd(g));
    e.y = static_cast<std::uint16_t>(yd(g));
    e.polarity = pol(g) ? evgap::Polarity::On : evgap::Polarity::Off;
    s.events.push_back(e);
    t += step(g);
  }
  return s;
}

inline evgap::ImageF gen_image(std::mt19937_64& g, int h, int w) {
  evgap::ImageF img(h, w);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (double& v : img.data) v = d(g);
  return img;
}

inline evgap::ImageU8 gen_image_u8(std::mt19937_64& g, int h, int w) {
  evgap::ImageU8 img(h, w);
  std::uniform_int_distribution<int> d(0, 255);
  for (std::uint8_t& v : img.data) v = static_cast<std::uint8_t>(d(g));
  return img;
}

// Relative path -> file bytes for a whole tree, optionally skipping names
// (run.json carries a timestamp).
inline std::map<std::string, std::vector<std::uint8_t>> dir_contents(
    const fs::path& root, const std::vector<std::string>& skip_names = {}) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    bool skipped = false;
    for (const std::string& s : skip_names) {
      if (name == s) skipped = true;
    }
    if (skipped) continue;
    out[entry.path().lexically_relative(root).generic_string()] =
        slurp_bytes(entry.path());
  }
  return out;
}

inline std::string telemetry_csv(
    const std::vector<evgap::TelemetryRecord>& records) {
  std::string text = "t_us,steering_deg,speed_kmh\n";
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%llu,%.6f,%.6f\n",
                  static_cast<unsigned long long>(r.t), r.steering_deg,
                  r.speed_kmh);
    text += buf;
  }
  return text;
}

}  // namespace testsup
