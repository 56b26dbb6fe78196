#pragma once

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

#include "gerd/core.hpp"
#include "gerd/geometry.hpp"
#include "gerd/rng.hpp"

namespace gerd {

enum class Polarity : std::int8_t { Negative = -1, Positive = 1 };

struct Event {
  std::uint32_t t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Polarity polarity = Polarity::Positive;

  friend bool operator==(const Event&, const Event&) = default;
};

// Canonical stream order: (t, y, x, polarity) with negative before positive.
inline bool event_less(const Event& a, const Event& b) {
  return std::tuple(a.t, a.y, a.x, static_cast<int>(a.polarity)) <
         std::tuple(b.t, b.y, b.x, static_cast<int>(b.polarity));
}

// Sparse events of one timestep, kept sorted and free of duplicate
// (x, y, polarity) addresses.
struct EventFrame {
  std::uint32_t t = 0;
  std::vector<Event> events;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }

  std::size_t count(Polarity p) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [p](const Event& e) { return e.polarity == p; }));
  }

  void normalize() {
    std::sort(events.begin(), events.end(), event_less);
    events.erase(std::unique(events.begin(), events.end()), events.end());
  }

  friend bool operator==(const EventFrame&, const EventFrame&) = default;
};

// Binary frame difference: 0 -> 1 is a positive event, 1 -> 0 negative.
inline EventFrame exact_diff(const CoverageGrid& prev, const CoverageGrid& curr, std::uint32_t t = 0) {
  if (!prev.same_shape(curr)) throw DimensionMismatch("exact_diff: grids differ in size or upsampling");
  EventFrame frame{t, {}};
  for (int y = 0; y < curr.height(); ++y) {
    for (int x = 0; x < curr.width(); ++x) {
      const bool was = prev.at(x, y) > 0;
      const bool now = curr.at(x, y) > 0;
      if (was == now) continue;
      frame.events.push_back({t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                              now ? Polarity::Positive : Polarity::Negative});
    }
  }
  return frame;
}

enum class IntegratorInit : std::uint8_t { Zeros = 0, Uniform = 1 };

// Signed per-pixel budget of sub-pixel coverage change. A pixel emits at
// most one event per frame; whatever is left above the threshold stays
// banked and can fire on the next frame, so
//   sum(emitted * threshold) + accum_end - accum_start == sum(count deltas)
// holds exactly. |accum| < threshold after emission is only guaranteed
// while a single frame changes a pixel by at most one threshold.
// Events fire when a pixel's cumulative coverage change crosses a lattice
// of spacing `threshold` offset by the initial accumulator, so a pixel that
// flickers between two counts closer than one threshold apart fires at most
// once under Uniform init.
class IntegratorState {
 public:
  IntegratorState(CoverageGrid initial, double threshold)
      : threshold_(threshold), prev_(std::move(initial)), accum_(prev_.counts().size(), 0.0) {
    if (!(threshold > 0.0)) throw InvalidThreshold("integrator threshold must be positive");
  }

  double threshold() const { return threshold_; }
  const CoverageGrid& previous() const { return prev_; }
  int width() const { return prev_.width(); }
  int height() const { return prev_.height(); }

  double accum(int x, int y) const { return accum_[index(x, y)]; }
  double& accum(int x, int y) { return accum_[index(x, y)]; }
  const std::vector<double>& accumulators() const { return accum_; }

  // Adds curr - previous to every accumulator and fires at most one event
  // per pixel. Events are returned only when recording; warm-up frames
  // update the state and return an empty frame.
  EventFrame integrate(const CoverageGrid& curr, std::uint32_t t, bool recording) {
    if (!prev_.same_shape(curr)) throw DimensionMismatch("integrate_step: grid differs from integrator state");
    EventFrame frame{t, {}};
    const auto& now = curr.counts();
    const auto& before = prev_.counts();
    const int w = curr.width();
    for (std::size_t i = 0; i < now.size(); ++i) {
      double& acc = accum_[i];
      acc += static_cast<double>(static_cast<int>(now[i]) - static_cast<int>(before[i]));
      Polarity polarity;
      if (acc >= threshold_) {
        acc -= threshold_;
        polarity = Polarity::Positive;
      } else if (acc <= -threshold_) {
        acc += threshold_;
        polarity = Polarity::Negative;
      } else {
        continue;
      }
      if (recording) {
        frame.events.push_back({t, static_cast<std::uint16_t>(static_cast<int>(i) % w),
                                static_cast<std::uint16_t>(static_cast<int>(i) / w), polarity});
      }
    }
    prev_ = curr;
    return frame;
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(prev_.width()) + static_cast<std::size_t>(x);
  }

  double threshold_;
  CoverageGrid prev_;
  std::vector<double> accum_;
};

// Uniform initialisation draws accumulators i.i.d. from
// Uniform(-threshold/2, threshold/2) in row-major order.
inline IntegratorState init_integrator(CoverageGrid initial, double threshold, IntegratorInit mode,
                                       RandomStream& rng) {
  IntegratorState state(std::move(initial), threshold);
  if (mode == IntegratorInit::Uniform) {
    for (int y = 0; y < state.height(); ++y) {
      for (int x = 0; x < state.width(); ++x) {
        state.accum(x, y) = (rng.uniform() - 0.5) * threshold;
      }
    }
  }
  return state;
}

// Empty-scene variant: prev_counts starts as an all-zero grid.
inline IntegratorState init_integrator(int width, int height, int k, double threshold, IntegratorInit mode,
                                       RandomStream& rng) {
  if (!(threshold > 0.0)) throw InvalidThreshold("integrator threshold must be positive");
  return init_integrator(CoverageGrid(width, height, k), threshold, mode, rng);
}

inline EventFrame integrate_step(IntegratorState& state, const CoverageGrid& curr, std::uint32_t t,
                                 bool recording) {
  return state.integrate(curr, t, recording);
}

}  // namespace gerd
