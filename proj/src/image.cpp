#include "evgap/image.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

namespace evgap {

namespace {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path,
                      const std::uint8_t* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(size));
  if (!out) throw Error("write failed: " + path.string());
}

// PNM header scanner: whitespace separates tokens, '#' comments run to end
// of line.
struct PnmCursor {
  const std::uint8_t* p;
  const std::uint8_t* end;

  void skip_space_and_comments() {
    while (p < end) {
      if (*p == '#') {
        while (p < end && *p != '\n') ++p;
      } else if (std::isspace(*p)) {
        ++p;
      } else {
        break;
      }
    }
  }

  long next_int() {
    skip_space_and_comments();
    if (p >= end || !std::isdigit(*p)) throw FormatError("bad PNM header");
    long v = 0;
    while (p < end && std::isdigit(*p)) {
      v = v * 10 + (*p - '0');
      if (v > 1 << 20) throw FormatError("unreasonable PNM dimension");
      ++p;
    }
    return v;
  }
};

}  // namespace

std::vector<std::uint8_t> encode_pgm(const ImageU8& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw ValidationError("cannot encode empty image");
  }
  char header[64];
  const int n =
      std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", img.width,
                    img.height);
  std::vector<std::uint8_t> out(header, header + n);
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

ImageU8 decode_pgm(const std::uint8_t* data, std::size_t size) {
  if (size < 2 || data[0] != 'P' || data[1] != '5') {
    throw FormatError("not a binary PGM (P5)");
  }
  PnmCursor cur{data + 2, data + size};
  const long width = cur.next_int();
  const long height = cur.next_int();
  if (width < 1 || height < 1) throw FormatError("bad PGM dimensions");
  const long maxval = cur.next_int();
  if (maxval != 255) {
    throw FormatError("unsupported PGM maxval " + std::to_string(maxval));
  }
  // exactly one whitespace byte before the raster
  if (cur.p >= cur.end || !std::isspace(*cur.p)) {
    throw FormatError("bad PGM header");
  }
  ++cur.p;
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  const std::size_t remaining = static_cast<std::size_t>(cur.end - cur.p);
  if (remaining < pixels) throw TruncationError("PGM raster truncated");
  if (remaining > pixels) throw FormatError("PGM has trailing bytes");
  ImageU8 img(static_cast<int>(height), static_cast<int>(width));
  std::memcpy(img.data.data(), cur.p, pixels);
  return img;
}

void write_pgm(const std::filesystem::path& path, const ImageU8& img) {
  const auto bytes = encode_pgm(img);
  write_file_bytes(path, bytes.data(), bytes.size());
}

ImageU8 read_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_pgm(bytes.data(), bytes.size());
}

void write_pfm(const std::filesystem::path& path, const ImageF& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw ValidationError("cannot encode empty image");
  }
  char header[64];
  const int n = std::snprintf(header, sizeof(header), "Pf\n%d %d\n-1.0\n",
                              img.width, img.height);
  std::vector<std::uint8_t> out(header, header + n);
  out.reserve(out.size() + img.pixel_count() * 4);
  // rows bottom-to-top per PFM convention
  for (int y = img.height - 1; y >= 0; --y) {
    for (int x = 0; x < img.width; ++x) {
      const auto f = static_cast<float>(img.at(y, x));
      std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
      for (int b = 0; b < 4; ++b) {
        out.push_back(static_cast<std::uint8_t>(bits & 0xff));
        bits >>= 8;
      }
    }
  }
  write_file_bytes(path, out.data(), out.size());
}

ImageF read_pfm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != 'f') {
    throw FormatError("not a grayscale PFM (Pf): " + path.string());
  }
  PnmCursor cur{bytes.data() + 2, bytes.data() + bytes.size()};
  const long width = cur.next_int();
  const long height = cur.next_int();
  if (width < 1 || height < 1) throw FormatError("bad PFM dimensions");
  cur.skip_space_and_comments();
  // scale line: sign carries endianness, we only write/read little-endian
  if (cur.p >= cur.end || *cur.p != '-') {
    throw FormatError("big-endian PFM unsupported");
  }
  while (cur.p < cur.end && *cur.p != '\n') ++cur.p;
  if (cur.p >= cur.end) throw FormatError("bad PFM header");
  ++cur.p;
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  const std::size_t remaining = static_cast<std::size_t>(cur.end - cur.p);
  if (remaining < pixels * 4) throw TruncationError("PFM raster truncated");
  if (remaining > pixels * 4) throw FormatError("PFM has trailing bytes");
  ImageF img(static_cast<int>(height), static_cast<int>(width));
  const std::uint8_t* p = cur.p;
  for (long y = height - 1; y >= 0; --y) {
    for (long x = 0; x < width; ++x) {
      std::uint32_t bits = 0;
      for (int b = 3; b >= 0; --b) bits = (bits << 8) | p[b];
      p += 4;
      img.at(static_cast<int>(y), static_cast<int>(x)) =
          std::bit_cast<float>(bits);
    }
  }
  return img;
}

}  // namespace evgap
