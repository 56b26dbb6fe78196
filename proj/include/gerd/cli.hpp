#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gerd/config.hpp"
#include "gerd/io.hpp"
#include "gerd/pipeline.hpp"
#include "gerd/render.hpp"

// Command implementations behind the `gerd` executable. The executable
// only parses arguments; everything here is callable from library code.
namespace gerd::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kIoError = 3,
  kValidationFailed = 4,
};

inline constexpr const char* kParallelismEnv = "GERD_PARALLELISM";

struct GenerateOptions {
  std::filesystem::path config;
  std::vector<std::string> overrides;
  std::optional<std::filesystem::path> output_dir;
  std::optional<unsigned> parallelism;
  std::optional<std::uint64_t> seed_base;
};

namespace detail {

inline std::optional<unsigned> env_parallelism() {
  const char* raw = std::getenv(kParallelismEnv);
  if (!raw || !*raw) return std::nullopt;
  try {
    const int v = std::stoi(raw);
    if (v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string(kParallelismEnv) + " must be a positive integer");
}

inline int report(std::ostream& err, const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SingularTransform& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace detail

// Reads a batch config, applies overrides, generates `count` recordings
// and writes them as a dataset directory.
inline int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(opts.config);
    if (!in) throw IoError("cannot read config " + opts.config.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Json doc = parse_json_text(text, opts.config.string());
    apply_overrides(doc, opts.overrides);
    const bool config_sets_parallelism = doc.is_object() && doc.contains("parallelism");
    BatchConfig batch = batch_from_json(doc);
    if (opts.output_dir) batch.output_dir = opts.output_dir->string();
    if (opts.seed_base) batch.seed_base = *opts.seed_base;
    if (opts.parallelism) {
      batch.parallelism = *opts.parallelism;
    } else if (!config_sets_parallelism) {
      if (auto env = detail::env_parallelism()) batch.parallelism = *env;
    }
    if (batch.parallelism < 1) throw ConfigError("parallelism must be at least 1");
    for (const auto& w : batch.params.warnings()) err << "warning: " << w << "\n";

    const auto results = generate_batch(batch.expand(), batch.parallelism);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (!results[i].ok()) {
        err << "recording " << i << " failed\n";
        return detail::report(err, results[i].error);
      }
    }

    const std::filesystem::path root = batch.output_dir;
    std::vector<std::string> names;
    std::uint64_t total_events = 0, total_frames = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      names.push_back(recording_dir_name(i));
      write_recording(*results[i].recording, root / names.back());
      total_events += results[i].recording->events.size();
      total_frames += results[i].recording->params.length;
    }
    write_index(root, names);

    out << "recordings: " << results.size() << "\n";
    out << "total events: " << total_events << "\n";
    out << "events/frame mean: " << std::fixed << std::setprecision(3)
        << (total_frames ? static_cast<double>(total_events) / total_frames : 0.0) << "\n";
    out << "output: " << root.string() << "\n";
    return kOk;
  } catch (...) {
    return detail::report(err, std::current_exception());
  }
}

enum class PreviewFormat { Ascii, Image };

// Renders one frame of a recording directory. ASCII goes to `out`; image
// mode writes a PPM to `image_path` (required).
inline int cmd_preview(const std::filesystem::path& dir, std::uint32_t frame, PreviewFormat format,
                       const std::optional<std::filesystem::path>& image_path, std::ostream& out,
                       std::ostream& err) {
  try {
    const Recording rec = read_recording(dir);
    const EventFrame events = frame_events(rec, frame);
    if (format == PreviewFormat::Ascii) {
      out << render_ascii(events, rec.params.width, rec.params.height);
      return kOk;
    }
    if (!image_path) throw ConfigError("image preview needs an output path");
    std::ofstream file(*image_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write " + image_path->string());
    const std::string ppm = render_ppm(events, rec.params.width, rec.params.height);
    file.write(ppm.data(), static_cast<std::streamsize>(ppm.size()));
    if (!file) throw IoError("short write to " + image_path->string());
    out << "wrote " << image_path->string() << " (" << rec.params.width << "x" << rec.params.height << ")\n";
    return kOk;
  } catch (const BoundsError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (...) {
    return detail::report(err, std::current_exception());
  }
}

// Validates a recording or every recording of a dataset; exit 4 on any
// violation.
inline int cmd_validate(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
  try {
    std::size_t bad = 0;
    const auto dirs = recording_dirs(dir);
    for (const auto& rec_dir : dirs) {
      const ValidationReport report = validate_recording(rec_dir);
      if (report.clean()) {
        out << rec_dir.string() << ": ok\n";
        continue;
      }
      ++bad;
      out << rec_dir.string() << ": " << report.violations.size() << " violation(s)\n";
      for (const auto& v : report.violations) out << "  " << v << "\n";
    }
    out << (bad ? "INVALID" : "clean") << " (" << dirs.size() - bad << "/" << dirs.size() << " recordings ok)\n";
    return bad ? kValidationFailed : kOk;
  } catch (...) {
    const int code = detail::report(err, std::current_exception());
    return code == kUsage ? kValidationFailed : code;
  }
}

inline int cmd_stats(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
  try {
    out << std::left << std::setw(24) << "recording" << std::right << std::setw(10) << "frames" << std::setw(12)
        << "events" << std::setw(12) << "mean/frame" << std::setw(10) << "max" << std::setw(10) << "positive"
        << std::setw(10) << "negative" << std::setw(10) << "pos/neg" << "\n";
    for (const auto& rec_dir : recording_dirs(dir)) {
      const RecordingStats s = compute_stats(read_recording(rec_dir));
      out << std::left << std::setw(24) << rec_dir.filename().string() << std::right << std::setw(10) << s.frames
          << std::setw(12) << s.events << std::setw(12) << std::fixed << std::setprecision(3) << s.mean_per_frame
          << std::setw(10) << s.max_per_frame << std::setw(10) << s.positive << std::setw(10) << s.negative
          << std::setw(10) << s.polarity_ratio() << "\n";
    }
    return kOk;
  } catch (...) {
    return detail::report(err, std::current_exception());
  }
}

enum class ExportKind { Dense, PointCloud };

inline int cmd_export(const std::filesystem::path& dir, ExportKind kind, const std::filesystem::path& dest,
                      std::ostream& out, std::ostream& err) {
  try {
    const Recording rec = read_recording(dir);
    std::ofstream file(dest, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write " + dest.string());
    if (kind == ExportKind::Dense) {
      const auto bytes = encode_dense(to_dense(rec));
      file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    } else {
      write_pointcloud(rec, file);
    }
    if (!file) throw IoError("short write to " + dest.string());
    out << "wrote " << dest.string() << "\n";
    return kOk;
  } catch (...) {
    return detail::report(err, std::current_exception());
  }
}

}  // namespace gerd::cli
