#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gerd/core.hpp"
#include "gerd/eventgen.hpp"
#include "gerd/geometry.hpp"
#include "gerd/rng.hpp"

namespace gerd {

struct NoiseConfig {
  double p_background = 0.0;  // spontaneous firing, per pixel and frame
  double p_shape = 0.0;       // dropout of covered pixels, per pixel and frame
  double p_event = 0.0;       // drop probability per generated event

  bool any() const { return p_background > 0.0 || p_shape > 0.0 || p_event > 0.0; }

  void validate() const {
    const auto check = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must be a probability in [0, 1]");
    };
    check(p_background, "noise_background");
    check(p_shape, "noise_shape");
    check(p_event, "noise_event");
  }

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

// Zeroes each covered pixel with probability p_shape. Runs before
// differencing so dropouts surface as events inside the shape.
inline CoverageGrid apply_shape_noise(CoverageGrid grid, double p_shape, RandomStream& rng) {
  if (p_shape <= 0.0) return grid;
  for (auto& count : grid.counts()) {
    if (count > 0 && rng.bernoulli(p_shape)) count = 0;
  }
  return grid;
}

inline EventFrame apply_event_noise(EventFrame frame, double p_event, RandomStream& rng) {
  if (p_event <= 0.0) return frame;
  std::vector<Event> kept;
  kept.reserve(frame.events.size());
  for (const Event& e : frame.events) {
    if (!rng.bernoulli(p_event)) kept.push_back(e);
  }
  frame.events = std::move(kept);
  return frame;
}

// Every pixel fires with probability p_background, polarity 50/50. Events
// already present at the same address and polarity are coalesced.
inline EventFrame apply_background_noise(EventFrame frame, double p_background, int width, int height,
                                         RandomStream& rng) {
  if (p_background <= 0.0) return frame;
  const std::size_t before = frame.events.size();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!rng.bernoulli(p_background)) continue;
      const Polarity polarity = rng.bernoulli(0.5) ? Polarity::Positive : Polarity::Negative;
      frame.events.push_back({frame.t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), polarity});
    }
  }
  if (frame.events.size() != before) frame.normalize();
  return frame;
}

}  // namespace gerd
