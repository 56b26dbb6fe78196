#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "gerd/core.hpp"
#include "gerd/eventgen.hpp"
#include "gerd/pipeline.hpp"

namespace gerd {

// Events of recorded frame t.
inline EventFrame frame_events(const Recording& rec, std::uint32_t t) {
  if (t >= rec.params.length) {
    throw BoundsError("frame " + std::to_string(t) + " out of range (length " + std::to_string(rec.params.length) +
                      ")");
  }
  const auto lo = std::lower_bound(rec.events.begin(), rec.events.end(), t,
                                   [](const Event& e, std::uint32_t v) { return e.t < v; });
  const auto hi = std::upper_bound(lo, rec.events.end(), t, [](std::uint32_t v, const Event& e) { return v < e.t; });
  return {t, std::vector<Event>(lo, hi)};
}

namespace render_detail {

// Bit 0: positive event, bit 1: negative event.
inline std::vector<std::uint8_t> polarity_mask(const EventFrame& frame, int width, int height) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  for (const Event& e : frame.events) {
    if (e.x >= width || e.y >= height) continue;
    mask[static_cast<std::size_t>(e.y) * width + e.x] |= e.polarity == Polarity::Positive ? 1 : 2;
  }
  return mask;
}

}  // namespace render_detail

// '+' positive, '-' negative, '*' both, '.' silent; one text row per pixel row.
inline std::string render_ascii(const EventFrame& frame, int width, int height) {
  static constexpr char kGlyph[] = {'.', '+', '-', '*'};
  const auto mask = render_detail::polarity_mask(frame, width, height);
  std::string out;
  out.reserve(static_cast<std::size_t>(width + 1) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.push_back(kGlyph[mask[static_cast<std::size_t>(y) * width + x]]);
    out.push_back('\n');
  }
  return out;
}

// Binary PPM (P6): green positive, red negative, yellow both, black silent.
inline std::string render_ppm(const EventFrame& frame, int width, int height) {
  const auto mask = render_detail::polarity_mask(frame, width, height);
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (const std::uint8_t m : mask) {
    out.push_back(static_cast<char>((m & 2) ? 255 : 0));
    out.push_back(static_cast<char>((m & 1) ? 255 : 0));
    out.push_back(0);
  }
  return out;
}

struct RecordingStats {
  std::uint64_t events = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  std::uint32_t frames = 0;
  double mean_per_frame = 0.0;
  std::uint64_t max_per_frame = 0;

  // positive / negative; 0 without events, +inf without negatives.
  double polarity_ratio() const {
    if (negative == 0) return positive == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(positive) / static_cast<double>(negative);
  }
};

inline RecordingStats compute_stats(const Recording& rec) {
  RecordingStats s;
  s.frames = rec.params.length;
  s.events = rec.events.size();
  std::vector<std::uint64_t> per_frame(rec.params.length, 0);
  for (const Event& e : rec.events) {
    (e.polarity == Polarity::Positive ? s.positive : s.negative) += 1;
    if (e.t < per_frame.size()) ++per_frame[e.t];
  }
  if (!per_frame.empty()) s.max_per_frame = *std::max_element(per_frame.begin(), per_frame.end());
  s.mean_per_frame = s.frames ? static_cast<double>(s.events) / s.frames : 0.0;
  return s;
}

}  // namespace gerd
