#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "gerd/config.hpp"
#include "gerd/core.hpp"
#include "gerd/digest.hpp"
#include "gerd/eventgen.hpp"
#include "gerd/pipeline.hpp"

namespace gerd {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// events.gerd, little-endian throughout.
//
//   offset  size  field
//   0       4     magic "GERD" (47 45 52 44)
//   4       2     version (1)
//   6       2     width
//   8       2     height
//   10      4     length (frames)
//   14      8     event_count
//   22      4     flags (reserved, 0)
//   26      10*n  records: t u32, x u16, y u16, polarity u8 (1 = +, 0 = -),
//                 reserved u8 (0)
//
// Records are sorted by (t, y, x, polarity).
// ---------------------------------------------------------------------------

inline constexpr std::array<std::uint8_t, 4> kEventMagic = {0x47, 0x45, 0x52, 0x44};
inline constexpr std::uint16_t kEventVersion = 1;
inline constexpr std::size_t kEventHeaderSize = 26;
inline constexpr std::size_t kEventRecordSize = 10;

inline constexpr std::string_view kEventsFile = "events.gerd";
inline constexpr std::string_view kLabelsFile = "labels.jsonl";
inline constexpr std::string_view kParamsFile = "params.json";
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kIndexFile = "index.json";

struct EventFileHeader {
  std::uint16_t version = kEventVersion;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint32_t length = 0;
  std::uint64_t event_count = 0;
  std::uint32_t flags = 0;

  friend bool operator==(const EventFileHeader&, const EventFileHeader&) = default;
};

namespace io_detail {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(T{bytes[offset + i]} << (8 * i));
  return value;
}

inline std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return bytes;
}

inline std::string read_text(const fs::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

// Writes to "<name>.tmp" and renames into place.
inline void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline std::span<const std::uint8_t> as_bytes(const std::string& text) {
  return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

}  // namespace io_detail

inline std::vector<std::uint8_t> encode_events(const EventFileHeader& header, std::span<const Event> events) {
  using io_detail::put_le;
  std::vector<std::uint8_t> out(kEventMagic.begin(), kEventMagic.end());
  out.reserve(kEventHeaderSize + kEventRecordSize * events.size());
  put_le(out, header.version);
  put_le(out, header.width);
  put_le(out, header.height);
  put_le(out, header.length);
  put_le(out, static_cast<std::uint64_t>(events.size()));
  put_le(out, header.flags);
  for (const Event& e : events) {
    put_le(out, e.t);
    put_le(out, e.x);
    put_le(out, e.y);
    out.push_back(e.polarity == Polarity::Positive ? 1 : 0);
    out.push_back(0);
  }
  return out;
}

inline std::vector<std::uint8_t> encode_events(const Recording& rec) {
  EventFileHeader header;
  header.width = static_cast<std::uint16_t>(rec.params.width);
  header.height = static_cast<std::uint16_t>(rec.params.height);
  header.length = rec.params.length;
  return encode_events(header, rec.events);
}

// Throws FormatError on a bad magic or version.
inline EventFileHeader decode_event_header(std::span<const std::uint8_t> bytes) {
  using io_detail::get_le;
  if (bytes.size() < kEventHeaderSize) throw FormatError("event file shorter than its header");
  if (!std::equal(kEventMagic.begin(), kEventMagic.end(), bytes.begin())) {
    throw FormatError("bad magic: not a GERD event file");
  }
  EventFileHeader h;
  h.version = get_le<std::uint16_t>(bytes, 4);
  if (h.version != kEventVersion) throw FormatError("unsupported event file version " + std::to_string(h.version));
  h.width = get_le<std::uint16_t>(bytes, 6);
  h.height = get_le<std::uint16_t>(bytes, 8);
  h.length = get_le<std::uint32_t>(bytes, 10);
  h.event_count = get_le<std::uint64_t>(bytes, 14);
  h.flags = get_le<std::uint32_t>(bytes, 22);
  return h;
}

struct EventFileContents {
  EventFileHeader header;
  std::vector<Event> events;
};

// Full decode with structural checks: FormatError (magic, version, record
// bytes, ordering), CorruptFile (payload size disagrees with the header),
// BoundsError (record outside the header's width/height/length).
inline EventFileContents decode_events(std::span<const std::uint8_t> bytes) {
  using io_detail::get_le;
  EventFileContents out;
  out.header = decode_event_header(bytes);
  const auto& h = out.header;
  const std::uint64_t payload = bytes.size() - kEventHeaderSize;
  if (payload % kEventRecordSize != 0 || payload / kEventRecordSize != h.event_count) {
    throw CorruptFile("event payload holds " + std::to_string(payload) + " bytes, header announces " +
                      std::to_string(h.event_count) + " records");
  }
  out.events.reserve(h.event_count);
  for (std::uint64_t i = 0; i < h.event_count; ++i) {
    const std::size_t off = kEventHeaderSize + i * kEventRecordSize;
    Event e;
    e.t = get_le<std::uint32_t>(bytes, off);
    e.x = get_le<std::uint16_t>(bytes, off + 4);
    e.y = get_le<std::uint16_t>(bytes, off + 6);
    const std::uint8_t pol = bytes[off + 8];
    if (pol > 1 || bytes[off + 9] != 0) throw FormatError("record " + std::to_string(i) + " has invalid flag bytes");
    e.polarity = pol == 1 ? Polarity::Positive : Polarity::Negative;
    if (e.x >= h.width || e.y >= h.height || e.t >= h.length) {
      throw BoundsError("record " + std::to_string(i) + " lies outside the header bounds");
    }
    if (!out.events.empty() && !event_less(out.events.back(), e)) {
      throw FormatError("record " + std::to_string(i) + " breaks (t, y, x, polarity) ordering");
    }
    out.events.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// labels.jsonl: a schema line, then one object per recorded frame.
// ---------------------------------------------------------------------------

inline constexpr std::array<std::string_view, 16> kLabelFields = {
    "t", "shape", "tx", "ty", "sx", "sy", "theta", "shx", "shy",
    "vtx", "vty", "vsx", "vsy", "vtheta", "vshx", "vshy"};

inline std::string encode_labels(std::span<const LabelRecord> labels) {
  using OJson = nlohmann::ordered_json;
  std::string out;
  OJson schema;
  schema["format"] = "gerd-labels";
  schema["version"] = 1;
  schema["fields"] = kLabelFields;
  out += schema.dump();
  out += '\n';
  for (const auto& l : labels) {
    const AffineState& s = l.state;
    OJson row;
    row["t"] = l.t;
    row["shape"] = std::string(to_string(l.shape));
    row["tx"] = s.tx;
    row["ty"] = s.ty;
    row["sx"] = s.sx;
    row["sy"] = s.sy;
    row["theta"] = s.theta;
    row["shx"] = s.shx;
    row["shy"] = s.shy;
    row["vtx"] = s.vtx;
    row["vty"] = s.vty;
    row["vsx"] = s.vsx;
    row["vsy"] = s.vsy;
    row["vtheta"] = s.vtheta;
    row["vshx"] = s.vshx;
    row["vshy"] = s.vshy;
    out += row.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<LabelRecord> decode_labels(std::string_view text) {
  std::vector<LabelRecord> labels;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw FormatError("label file is empty");
  Json schema = Json::parse(line, nullptr, false);
  if (schema.is_discarded() || schema.value("format", "") != "gerd-labels" || schema.value("version", 0) != 1) {
    throw FormatError("label file has no gerd-labels v1 schema line");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json row = Json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) throw FormatError("malformed label line");
    try {
      LabelRecord l;
      l.t = row.at("t").get<std::uint32_t>();
      l.shape = shape_from_string(row.at("shape").get<std::string>());
      AffineState& s = l.state;
      s.tx = row.at("tx").get<double>();
      s.ty = row.at("ty").get<double>();
      s.sx = row.at("sx").get<double>();
      s.sy = row.at("sy").get<double>();
      s.theta = row.at("theta").get<double>();
      s.shx = row.at("shx").get<double>();
      s.shy = row.at("shy").get<double>();
      s.vtx = row.at("vtx").get<double>();
      s.vty = row.at("vty").get<double>();
      s.vsx = row.at("vsx").get<double>();
      s.vsy = row.at("vsy").get<double>();
      s.vtheta = row.at("vtheta").get<double>();
      s.vshx = row.at("vshx").get<double>();
      s.vshy = row.at("vshy").get<double>();
      labels.push_back(l);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed label line: ") + e.what());
    } catch (const ConfigError& e) {
      throw FormatError(std::string("malformed label line: ") + e.what());
    }
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Recording directories.
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::string name;
  std::uint64_t size = 0;
  std::string sha256;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> files;

  const ManifestEntry* find(std::string_view name) const {
    for (const auto& f : files) {
      if (f.name == name) return &f;
    }
    return nullptr;
  }

  Json to_json() const {
    Json j;
    j["format"] = "gerd-manifest";
    j["version"] = 1;
    j["files"] = Json::array();
    for (const auto& f : files) j["files"].push_back({{"name", f.name}, {"size", f.size}, {"sha256", f.sha256}});
    return j;
  }

  static Manifest from_json(const Json& j) {
    Manifest m;
    try {
      if (j.at("format").get<std::string>() != "gerd-manifest" || j.at("version").get<int>() != 1) {
        throw FormatError("unsupported manifest");
      }
      for (const auto& f : j.at("files")) {
        m.files.push_back({f.at("name").get<std::string>(), f.at("size").get<std::uint64_t>(),
                           f.at("sha256").get<std::string>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed manifest: ") + e.what());
    }
    return m;
  }

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

inline Manifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / kManifestFile;
  if (!fs::exists(path)) throw IoError("no manifest in " + dir.string() + " (missing or incomplete recording)");
  const Json j = Json::parse(io_detail::read_text(path), nullptr, false);
  if (j.is_discarded()) throw FormatError("manifest is not valid JSON");
  return Manifest::from_json(j);
}

// Writes events.gerd, labels.jsonl and params.json, then the manifest with
// their SHA-256 digests. The manifest goes last, so an interrupted write
// leaves a directory without one.
inline Manifest write_recording(const Recording& rec, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  fs::remove(dir / kManifestFile, ec);

  const std::vector<std::uint8_t> events = encode_events(rec);
  const std::string labels = encode_labels(rec.labels);
  const std::string params = to_json(rec.params).dump(2) + "\n";

  Manifest manifest;
  const auto put = [&](std::string_view name, std::span<const std::uint8_t> bytes) {
    io_detail::write_file_atomic(dir / name, bytes);
    manifest.files.push_back({std::string(name), bytes.size(), sha256_hex(bytes)});
  };
  put(kEventsFile, events);
  put(kLabelsFile, io_detail::as_bytes(labels));
  put(kParamsFile, io_detail::as_bytes(params));
  const std::string manifest_text = manifest.to_json().dump(2) + "\n";
  io_detail::write_file_atomic(dir / kManifestFile, io_detail::as_bytes(manifest_text));
  return manifest;
}

namespace io_detail {

inline void verify_digest(const Manifest& manifest, std::string_view name, std::span<const std::uint8_t> bytes) {
  const ManifestEntry* entry = manifest.find(name);
  if (!entry) throw CorruptFile(std::string(name) + " is not listed in the manifest");
  if (entry->size != bytes.size() || entry->sha256 != sha256_hex(bytes)) {
    throw CorruptFile(std::string(name) + " does not match its manifest digest");
  }
}

}  // namespace io_detail

inline Recording read_recording(const fs::path& dir) {
  const Manifest manifest = read_manifest(dir);
  const auto events_bytes = io_detail::read_file(dir / kEventsFile);
  const auto labels_bytes = io_detail::read_file(dir / kLabelsFile);
  const auto params_bytes = io_detail::read_file(dir / kParamsFile);

  decode_event_header(events_bytes);
  io_detail::verify_digest(manifest, kEventsFile, events_bytes);
  io_detail::verify_digest(manifest, kLabelsFile, labels_bytes);
  io_detail::verify_digest(manifest, kParamsFile, params_bytes);

  Recording rec;
  const Json params_doc = Json::parse(params_bytes.begin(), params_bytes.end(), nullptr, false);
  if (params_doc.is_discarded()) throw FormatError("params.json is not valid JSON");
  try {
    rec.params = params_from_json(params_doc);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("params.json: ") + e.what());
  }

  EventFileContents contents = decode_events(events_bytes);
  const auto& h = contents.header;
  if (h.width != rec.params.width || h.height != rec.params.height || h.length != rec.params.length) {
    throw FormatError("event header disagrees with params.json");
  }
  rec.events = std::move(contents.events);
  rec.labels = decode_labels(std::string_view(reinterpret_cast<const char*>(labels_bytes.data()), labels_bytes.size()));
  if (rec.labels.size() != rec.params.length) throw FormatError("label count differs from recording length");
  return rec;
}

// ---------------------------------------------------------------------------
// Datasets: one recording per subdirectory plus index.json listing them.
// ---------------------------------------------------------------------------

inline std::string recording_dir_name(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 5) digits.insert(0, 5 - digits.size(), '0');
  return "rec_" + digits;
}

inline void write_index(const fs::path& root, const std::vector<std::string>& names) {
  Json j;
  j["format"] = "gerd-dataset";
  j["version"] = 1;
  j["recordings"] = names;
  const std::string text = j.dump(2) + "\n";
  io_detail::write_file_atomic(root / kIndexFile, io_detail::as_bytes(text));
}

inline std::vector<std::string> read_index(const fs::path& root) {
  const fs::path path = root / kIndexFile;
  if (!fs::exists(path)) throw IoError("no " + std::string(kIndexFile) + " in " + root.string());
  const Json j = Json::parse(io_detail::read_text(path), nullptr, false);
  try {
    if (j.is_discarded() || j.at("format").get<std::string>() != "gerd-dataset") {
      throw FormatError("not a gerd dataset index");
    }
    return j.at("recordings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed dataset index: ") + e.what());
  }
}

inline bool is_dataset(const fs::path& dir) { return fs::exists(dir / kIndexFile); }

// Recording directories under `dir`: the indexed ones for a dataset, or
// `dir` itself for a single recording.
inline std::vector<fs::path> recording_dirs(const fs::path& dir) {
  if (!is_dataset(dir)) return {dir};
  std::vector<fs::path> out;
  for (const auto& name : read_index(dir)) out.push_back(dir / name);
  return out;
}

// ---------------------------------------------------------------------------
// Validation.
// ---------------------------------------------------------------------------

struct ValidationReport {
  std::vector<std::string> violations;

  bool clean() const { return violations.empty(); }
};

// Checks one recording directory without stopping at the first problem.
inline ValidationReport validate_recording(const fs::path& dir) {
  ValidationReport report;
  const auto add = [&](std::string kind, const std::string& what) {
    report.violations.push_back(kind + ": " + what);
  };

  Manifest manifest;
  try {
    manifest = read_manifest(dir);
  } catch (const Error& e) {
    add("manifest", e.what());
    return report;
  }

  std::vector<std::uint8_t> events, labels, params;
  const auto load = [&](std::string_view name, std::vector<std::uint8_t>& into) {
    try {
      into = io_detail::read_file(dir / name);
    } catch (const Error& e) {
      add("io", e.what());
      return false;
    }
    try {
      io_detail::verify_digest(manifest, name, into);
    } catch (const Error& e) {
      add("digest", e.what());
    }
    return true;
  };
  const bool have_events = load(kEventsFile, events);
  const bool have_labels = load(kLabelsFile, labels);
  const bool have_params = load(kParamsFile, params);

  std::optional<RenderParameters> rp;
  if (have_params) {
    const Json doc = Json::parse(params.begin(), params.end(), nullptr, false);
    if (doc.is_discarded()) {
      add("format", "params.json is not valid JSON");
    } else {
      try {
        rp = params_from_json(doc);
      } catch (const Error& e) {
        add("format", std::string("params.json: ") + e.what());
      }
    }
  }

  if (have_events) {
    try {
      const EventFileHeader h = decode_event_header(events);
      if (h.flags != 0) add("format", "reserved header flags are non-zero");
      if (rp && (h.width != rp->width || h.height != rp->height || h.length != rp->length)) {
        add("format", "event header disagrees with params.json");
      }
      const std::uint64_t payload = events.size() - kEventHeaderSize;
      if (payload % kEventRecordSize != 0 || payload / kEventRecordSize != h.event_count) {
        add("size", "event payload does not match event_count " + std::to_string(h.event_count));
      }
      const std::uint64_t n = std::min<std::uint64_t>(h.event_count, payload / kEventRecordSize);
      Event prev{};
      std::size_t sort_violations = 0, bounds_violations = 0, byte_violations = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const std::size_t off = kEventHeaderSize + i * kEventRecordSize;
        Event e;
        e.t = io_detail::get_le<std::uint32_t>(events, off);
        e.x = io_detail::get_le<std::uint16_t>(events, off + 4);
        e.y = io_detail::get_le<std::uint16_t>(events, off + 6);
        e.polarity = events[off + 8] == 1 ? Polarity::Positive : Polarity::Negative;
        if (events[off + 8] > 1 || events[off + 9] != 0) {
          if (byte_violations++ == 0) add("format", "record " + std::to_string(i) + " has invalid flag bytes");
        }
        if (e.x >= h.width || e.y >= h.height || e.t >= h.length) {
          if (bounds_violations++ == 0) add("bounds", "record " + std::to_string(i) + " lies outside the header bounds");
        }
        if (i > 0 && !event_less(prev, e)) {
          if (sort_violations++ == 0) add("sort", "record " + std::to_string(i) + " breaks (t, y, x, polarity) ordering");
        }
        prev = e;
      }
      if (sort_violations > 1) add("sort", std::to_string(sort_violations) + " ordering violations in total");
      if (bounds_violations > 1) add("bounds", std::to_string(bounds_violations) + " out-of-bounds records in total");
    } catch (const Error& e) {
      add("format", e.what());
    }
  }

  if (have_labels) {
    try {
      const auto decoded =
          decode_labels(std::string_view(reinterpret_cast<const char*>(labels.data()), labels.size()));
      if (rp && decoded.size() != rp->length) {
        add("labels", std::to_string(decoded.size()) + " label records for length " + std::to_string(rp->length));
      }
      for (std::size_t i = 0; i < decoded.size(); ++i) {
        if (decoded[i].t != i) {
          add("labels", "label timesteps are not 0, 1, 2, ...");
          break;
        }
      }
    } catch (const Error& e) {
      add("labels", e.what());
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Exports.
// ---------------------------------------------------------------------------

// (length, 2, height, width) uint8 frames; channel 0 counts positive
// events, channel 1 negative ones.
struct DenseTensor {
  std::uint32_t length = 0;
  std::uint16_t height = 0;
  std::uint16_t width = 0;
  std::vector<std::uint8_t> data;

  std::size_t offset(std::uint32_t t, int channel, int y, int x) const {
    return ((static_cast<std::size_t>(t) * 2 + channel) * height + y) * width + x;
  }
  std::uint8_t at(std::uint32_t t, int channel, int y, int x) const { return data[offset(t, channel, y, x)]; }

  std::uint64_t sum() const {
    std::uint64_t s = 0;
    for (auto v : data) s += v;
    return s;
  }
};

inline DenseTensor to_dense(const Recording& rec) {
  DenseTensor dense;
  dense.length = rec.params.length;
  dense.height = static_cast<std::uint16_t>(rec.params.height);
  dense.width = static_cast<std::uint16_t>(rec.params.width);
  dense.data.assign(static_cast<std::size_t>(dense.length) * 2 * dense.height * dense.width, 0);
  for (const Event& e : rec.events) {
    auto& cell = dense.data[dense.offset(e.t, e.polarity == Polarity::Positive ? 0 : 1, e.y, e.x)];
    if (cell < 255) ++cell;
  }
  return dense;
}

// Dense file layout, little-endian:
//   magic "GRDF", version u16 (1), channels u16 (2), width u16, height u16,
//   length u32, dtype u8 (1 = uint8), 3 reserved bytes; then
//   length * 2 * height * width bytes in (t, channel, y, x) order.
inline constexpr std::array<std::uint8_t, 4> kDenseMagic = {'G', 'R', 'D', 'F'};
inline constexpr std::size_t kDenseHeaderSize = 20;

inline std::vector<std::uint8_t> encode_dense(const DenseTensor& dense) {
  using io_detail::put_le;
  std::vector<std::uint8_t> out(kDenseMagic.begin(), kDenseMagic.end());
  out.reserve(kDenseHeaderSize + dense.data.size());
  put_le(out, std::uint16_t{1});
  put_le(out, std::uint16_t{2});
  put_le(out, dense.width);
  put_le(out, dense.height);
  put_le(out, dense.length);
  out.push_back(1);
  out.insert(out.end(), 3, 0);
  out.insert(out.end(), dense.data.begin(), dense.data.end());
  return out;
}

inline DenseTensor decode_dense(std::span<const std::uint8_t> bytes) {
  using io_detail::get_le;
  if (bytes.size() < kDenseHeaderSize || !std::equal(kDenseMagic.begin(), kDenseMagic.end(), bytes.begin())) {
    throw FormatError("not a GERD dense frame file");
  }
  if (get_le<std::uint16_t>(bytes, 4) != 1 || get_le<std::uint16_t>(bytes, 6) != 2 || bytes[16] != 1) {
    throw FormatError("unsupported dense frame layout");
  }
  DenseTensor dense;
  dense.width = get_le<std::uint16_t>(bytes, 8);
  dense.height = get_le<std::uint16_t>(bytes, 10);
  dense.length = get_le<std::uint32_t>(bytes, 12);
  const std::size_t expected = static_cast<std::size_t>(dense.length) * 2 * dense.height * dense.width;
  if (bytes.size() - kDenseHeaderSize != expected) throw CorruptFile("dense payload size mismatch");
  dense.data.assign(bytes.begin() + kDenseHeaderSize, bytes.end());
  return dense;
}

// One row per event, header row first; polarity written as 1 / -1.
inline void write_pointcloud(const Recording& rec, std::ostream& out) {
  out << "t,x,y,polarity\n";
  for (const Event& e : rec.events) {
    out << e.t << ',' << e.x << ',' << e.y << ',' << static_cast<int>(e.polarity) << '\n';
  }
}

}  // namespace gerd
