#include "evgap/evio.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <string>

namespace evgap {

namespace {

std::uint16_t load_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t load_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void store_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void store_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    v >>= 8;
  }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

}  // namespace

void validate_stream(const EventStream& stream) {
  std::uint64_t prev_t = 0;
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const Event& e = stream.events[i];
    if (e.x >= stream.width || e.y >= stream.height) {
      throw ValidationError("record " + std::to_string(i) +
                            ": coordinate (" + std::to_string(e.x) + ", " +
                            std::to_string(e.y) + ") outside " +
                            std::to_string(stream.width) + "x" +
                            std::to_string(stream.height));
    }
    if (i > 0 && e.t < prev_t) {
      throw ValidationError("record " + std::to_string(i) +
                            ": decreasing timestamp");
    }
    auto pol = static_cast<std::uint8_t>(e.polarity);
    if (pol > 1) {
      throw ValidationError("record " + std::to_string(i) +
                            ": invalid polarity value " + std::to_string(pol));
    }
    prev_t = e.t;
  }
}

EventStream parse_evt(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kEvtMagic, 4) != 0) {
    throw FormatError("bad magic, not an EVT1 stream");
  }
  if (bytes.size() < kEvtHeaderBytes) {
    throw TruncationError("incomplete EVT1 header");
  }
  EventStream stream;
  stream.width = load_u16(bytes.data() + 4);
  stream.height = load_u16(bytes.data() + 6);
  const std::uint64_t count = load_u64(bytes.data() + 8);

  const std::uint64_t payload = bytes.size() - kEvtHeaderBytes;
  if (count > payload / kEvtRecordBytes) {
    throw TruncationError("declared " + std::to_string(count) +
                          " records but payload holds only " +
                          std::to_string(payload) + " bytes");
  }
  if (payload != count * kEvtRecordBytes) {
    throw TruncationError("payload of " + std::to_string(payload) +
                          " bytes does not match declared count " +
                          std::to_string(count) + " (trailing bytes)");
  }

  stream.events.resize(count);
  const std::uint8_t* p = bytes.data() + kEvtHeaderBytes;
  std::uint64_t prev_t = 0;
  for (std::uint64_t i = 0; i < count; ++i, p += kEvtRecordBytes) {
    Event& e = stream.events[i];
    e.t = load_u64(p);
    e.x = load_u16(p + 8);
    e.y = load_u16(p + 10);
    const std::uint8_t pol = p[12];
    if (pol > 1) {
      throw ValidationError("record " + std::to_string(i) +
                            ": invalid polarity value " + std::to_string(pol));
    }
    e.polarity = static_cast<Polarity>(pol);
    if (e.x >= stream.width || e.y >= stream.height) {
      throw ValidationError("record " + std::to_string(i) +
                            ": coordinate out of bounds");
    }
    if (i > 0 && e.t < prev_t) {
      throw ValidationError("record " + std::to_string(i) +
                            ": decreasing timestamp");
    }
    prev_t = e.t;
  }
  return stream;
}

std::vector<std::uint8_t> write_evt(const EventStream& stream) {
  validate_stream(stream);
  std::vector<std::uint8_t> out;
  out.reserve(kEvtHeaderBytes + stream.events.size() * kEvtRecordBytes);
  out.insert(out.end(), kEvtMagic, kEvtMagic + 4);
  store_u16(out, stream.width);
  store_u16(out, stream.height);
  store_u64(out, stream.events.size());
  for (const Event& e : stream.events) {
    store_u64(out, e.t);
    store_u16(out, e.x);
    store_u16(out, e.y);
    out.push_back(static_cast<std::uint8_t>(e.polarity));
  }
  return out;
}

EventStream read_evt_file(const std::filesystem::path& path) {
  return parse_evt(read_file_bytes(path));
}

void write_evt_file(const std::filesystem::path& path,
                    const EventStream& stream) {
  const auto bytes = write_evt(stream);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

namespace {

constexpr std::string_view kTelemetryHeader = "t_us,steering_deg,speed_kmh";

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no, const char* name) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw FormatError("line " + std::to_string(line_no) + ": cannot parse " +
                      std::string(name) + " from '" + std::string(field) +
                      "'");
  }
  return value;
}

}  // namespace

std::vector<TelemetryRecord> parse_telemetry(std::string_view text) {
  std::vector<TelemetryRecord> records;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool seen_header = false;
  bool have_prev = false;
  std::uint64_t prev_t = 0;

  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    line = strip_cr(line);
    ++line_no;

    if (!seen_header) {
      if (line != kTelemetryHeader) {
        throw FormatError("line 1: expected header '" +
                          std::string(kTelemetryHeader) + "'");
      }
      seen_header = true;
      continue;
    }
    if (line.empty()) {
      // allow a trailing newline, nothing else
      if (pos <= text.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": blank line");
      }
      continue;
    }

    const std::size_t c1 = line.find(',');
    const std::size_t c2 =
        (c1 == std::string_view::npos) ? std::string_view::npos
                                       : line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        line.find(',', c2 + 1) != std::string_view::npos) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected 3 comma-separated fields");
    }

    TelemetryRecord rec;
    rec.t = parse_field<std::uint64_t>(line.substr(0, c1), line_no, "t_us");
    rec.steering_deg =
        parse_field<double>(line.substr(c1 + 1, c2 - c1 - 1), line_no,
                            "steering_deg");
    rec.speed_kmh = parse_field<double>(line.substr(c2 + 1), line_no,
                                        "speed_kmh");
    if (rec.speed_kmh < 0) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": negative speed");
    }
    if (have_prev && rec.t <= prev_t) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": timestamp not strictly increasing");
    }
    prev_t = rec.t;
    have_prev = true;
    records.push_back(rec);
  }
  if (!seen_header) {
    throw FormatError("line 1: expected header '" +
                      std::string(kTelemetryHeader) + "'");
  }
  return records;
}

std::vector<TelemetryRecord> read_telemetry_file(
    const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_telemetry(
      std::string_view(reinterpret_cast<const char*>(bytes.data()),
                       bytes.size()));
}

std::vector<AlignedTelemetry> align_telemetry(
    std::span<const std::uint64_t> frame_ts,
    std::span<const TelemetryRecord> telemetry) {
  if (telemetry.empty()) {
    throw ValidationError("cannot align against empty telemetry");
  }
  std::vector<AlignedTelemetry> out;
  out.reserve(frame_ts.size());
  for (const std::uint64_t ts : frame_ts) {
    const auto it = std::lower_bound(
        telemetry.begin(), telemetry.end(), ts,
        [](const TelemetryRecord& r, std::uint64_t t) { return r.t < t; });
    const TelemetryRecord* best = nullptr;
    std::uint64_t best_dist = 0;
    if (it != telemetry.end()) {
      best = &*it;
      best_dist = it->t - ts;
    }
    if (it != telemetry.begin()) {
      const TelemetryRecord* prev = &*std::prev(it);
      const std::uint64_t dist = ts - prev->t;
      // ties go to the earlier record
      if (best == nullptr || dist <= best_dist) {
        best = prev;
        best_dist = dist;
      }
    }
    out.push_back(AlignedTelemetry{best->steering_deg, best->speed_kmh,
                                   best_dist <= kAlignMaxGapUs});
  }
  return out;
}

}  // namespace evgap
