#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gerd/core.hpp"
#include "gerd/eventgen.hpp"
#include "gerd/geometry.hpp"
#include "gerd/noise.hpp"
#include "gerd/rng.hpp"
#include "gerd/transforms.hpp"

namespace gerd {

// Velocity change per step: i.i.d. Gaussian with the given sigma, or a
// user function of the step index.
struct DeltaSpec {
  double sigma = 0.0;
  DeltaFn custom;

  bool is_custom() const { return static_cast<bool>(custom); }

  DeltaFn resolve(bool two_d) const {
    if (custom) return custom;
    if (sigma == 0.0) return {};
    return two_d ? gaussian_delta(sigma) : gaussian_delta_1d(sigma);
  }

  friend bool operator==(const DeltaSpec& a, const DeltaSpec& b) {
    return a.is_custom() == b.is_custom() && (a.is_custom() || a.sigma == b.sigma);
  }
};

inline constexpr double kDefaultTranslateSigma = 0.05;
inline constexpr double kDefaultRotateSigma = 0.005;
inline constexpr double kDefaultScaleSigma = 0.001;
inline constexpr double kDefaultShearSigma = 0.001;

struct TranslateParams {
  bool enabled = false;
  // Unset starts are drawn uniformly from the central half of the frame.
  std::optional<double> start_x;
  std::optional<double> start_y;
  Vec2 velocity_start{};
  DeltaSpec velocity_delta{kDefaultTranslateSigma, {}};

  friend bool operator==(const TranslateParams&, const TranslateParams&) = default;
};

struct ScaleParams {
  bool enabled = false;
  Vec2 start{1.0, 1.0};
  Vec2 velocity_start{};
  DeltaSpec velocity_delta{kDefaultScaleSigma, {}};

  friend bool operator==(const ScaleParams&, const ScaleParams&) = default;
};

struct RotateParams {
  bool enabled = false;
  double start = 0.0;
  double velocity_start = 0.0;
  DeltaSpec velocity_delta{kDefaultRotateSigma, {}};

  friend bool operator==(const RotateParams&, const RotateParams&) = default;
};

struct ShearParams {
  bool enabled = false;
  Vec2 start{};
  Vec2 velocity_start{};
  DeltaSpec velocity_delta{kDefaultShearSigma, {}};

  friend bool operator==(const ShearParams&, const ShearParams&) = default;
};

struct RenderParameters {
  int width = 64;
  int height = 64;
  std::uint32_t length = 128;
  int upsample = 8;
  std::optional<double> threshold;  // default: upsample^2
  std::uint32_t warmup = 16;
  ShapeKind shape = ShapeKind::Square;
  double base_size = 16.0;
  std::uint64_t seed = 0;
  IntegratorInit integrator_init = IntegratorInit::Uniform;

  TranslateParams translate;
  ScaleParams scale;
  RotateParams rotate;
  ShearParams shear;

  NoiseConfig noise;

  double effective_threshold() const {
    return threshold.value_or(static_cast<double>(upsample) * static_cast<double>(upsample));
  }

  void validate() const {
    if (width < 8 || height < 8 || width > 65535 || height > 65535) {
      throw ConfigError("resolution must be within [8, 65535] in both dimensions");
    }
    if (length < 1) throw ConfigError("length must be at least 1");
    if (upsample < 1 || upsample > 255) throw ConfigError("upsample must be within [1, 255]");
    if (!(effective_threshold() > 0.0) || !std::isfinite(effective_threshold())) {
      throw ConfigError("threshold must be positive");
    }
    if (!(base_size > 0.0) || !std::isfinite(base_size)) throw ConfigError("base_size must be positive");
    if (!(scale.start.x > 0.0) || !(scale.start.y > 0.0)) throw ConfigError("scale_start must be positive");
    const auto finite = [](double v) { return std::isfinite(v); };
    for (double v : {translate.start_x.value_or(0.0), translate.start_y.value_or(0.0), translate.velocity_start.x,
                     translate.velocity_start.y, scale.start.x, scale.start.y, scale.velocity_start.x,
                     scale.velocity_start.y, rotate.start, rotate.velocity_start, shear.start.x, shear.start.y,
                     shear.velocity_start.x, shear.velocity_start.y}) {
      if (!finite(v)) throw ConfigError("transform start values and velocities must be finite");
    }
    for (const DeltaSpec* d :
         {&translate.velocity_delta, &scale.velocity_delta, &rotate.velocity_delta, &shear.velocity_delta}) {
      if (!d->is_custom() && !(d->sigma >= 0.0 && std::isfinite(d->sigma))) {
        throw ConfigError("velocity_delta sigma must be finite and non-negative");
      }
    }
    noise.validate();
  }

  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (!translate.enabled && !scale.enabled && !rotate.enabled && !shear.enabled && !noise.any()) {
      out.emplace_back("no transform enabled and all noise is zero: the recording will contain no events");
    }
    return out;
  }

  friend bool operator==(const RenderParameters&, const RenderParameters&) = default;
};

// Ground truth of one recorded frame: the state the frame was rendered
// with.
struct LabelRecord {
  std::uint32_t t = 0;
  ShapeKind shape = ShapeKind::Square;
  AffineState state;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

struct Recording {
  RenderParameters params;
  std::vector<Event> events;  // sorted by (t, y, x, polarity)
  std::vector<LabelRecord> labels;

  friend bool operator==(const Recording&, const Recording&) = default;
};

// Per-frame view handed to an optional observer during generation.
struct FrameTrace {
  std::uint64_t step = 0;  // counts warm-up frames too
  bool recording = false;
  const AffineState& state;
  const CoverageGrid& previous;     // integrator input of the prior frame
  const CoverageGrid& coverage;     // after shape noise
  const EventFrame& integrated;     // integrator output, before event noise
  const EventFrame& events;         // final frame events
};

using FrameObserver = std::function<void(const FrameTrace&)>;

inline AffineState initial_state(const RenderParameters& params, RandomStream& rng) {
  AffineState s;
  const double w = params.width, h = params.height;
  // Always draw both so the stream position does not depend on which
  // starts were given.
  const double sampled_x = rng.uniform(0.25 * w, 0.75 * w);
  const double sampled_y = rng.uniform(0.25 * h, 0.75 * h);
  s.tx = params.translate.start_x.value_or(sampled_x);
  s.ty = params.translate.start_y.value_or(sampled_y);
  s.vtx = params.translate.velocity_start.x;
  s.vty = params.translate.velocity_start.y;
  s.sx = params.scale.start.x;
  s.sy = params.scale.start.y;
  s.vsx = params.scale.velocity_start.x;
  s.vsy = params.scale.velocity_start.y;
  s.theta = params.rotate.start;
  s.vtheta = params.rotate.velocity_start;
  s.shx = params.shear.start.x;
  s.shy = params.shear.start.y;
  s.vshx = params.shear.velocity_start.x;
  s.vshy = params.shear.velocity_start.y;
  return s;
}

inline AccelerationProfile make_profile(const RenderParameters& params) {
  return {
      {params.translate.enabled, params.translate.velocity_delta.resolve(true)},
      {params.scale.enabled, params.scale.velocity_delta.resolve(true)},
      {params.rotate.enabled, params.rotate.velocity_delta.resolve(false)},
      {params.shear.enabled, params.shear.velocity_delta.resolve(true)},
  };
}

// Runs `warmup` unrecorded frames, then `length` recorded ones. Each frame:
// step transforms, rasterize, shape noise, integrate, event noise,
// background noise. Custom acceleration functions receive the global step
// index (warm-up included).
inline Recording generate(const RenderParameters& params, const FrameObserver& observer = {}) {
  params.validate();

  RandomStream trajectory_rng(params.seed, StreamPurpose::Trajectory);
  RandomStream start_rng(params.seed, StreamPurpose::StartState);
  RandomStream init_rng(params.seed, StreamPurpose::IntegratorInit);
  RandomStream shape_rng(params.seed, StreamPurpose::ShapeNoise);
  RandomStream event_rng(params.seed, StreamPurpose::EventNoise);
  RandomStream background_rng(params.seed, StreamPurpose::BackgroundNoise);

  const ShapeTemplate shape{params.shape};
  const AccelerationProfile profile = make_profile(params);
  const auto render = [&](const AffineState& s) {
    CoverageGrid grid = rasterize(shape, to_map(s, params.base_size), params.width, params.height, params.upsample);
    return apply_shape_noise(std::move(grid), params.noise.p_shape, shape_rng);
  };

  AffineState state = initial_state(params, start_rng);
  IntegratorState integrator =
      init_integrator(render(state), params.effective_threshold(), params.integrator_init, init_rng);

  Recording rec;
  rec.params = params;
  rec.labels.reserve(params.length);

  const std::uint64_t total = std::uint64_t{params.warmup} + params.length;
  for (std::uint64_t s = 0; s < total; ++s) {
    state = step(state, profile, s, trajectory_rng);
    const CoverageGrid grid = render(state);
    const bool recording = s >= params.warmup;
    const auto t = static_cast<std::uint32_t>(recording ? s - params.warmup : 0);

    std::optional<CoverageGrid> previous;
    if (observer) previous = integrator.previous();
    EventFrame integrated = integrator.integrate(grid, t, recording);
    EventFrame frame;
    if (recording) {
      frame = apply_event_noise(integrated, params.noise.p_event, event_rng);
      frame = apply_background_noise(std::move(frame), params.noise.p_background, params.width, params.height,
                                     background_rng);
      rec.events.insert(rec.events.end(), frame.events.begin(), frame.events.end());
      rec.labels.push_back({t, params.shape, state});
    } else {
      frame.t = t;
    }
    if (observer) observer(FrameTrace{s, recording, state, *previous, grid, integrated, frame});
  }
  return rec;
}

struct BatchResult {
  std::optional<Recording> recording;
  std::exception_ptr error;

  bool ok() const { return recording.has_value(); }
};

// Generates every parameter set with up to `parallelism` worker threads.
// Results are in input order and identical to sequential `generate` calls;
// a failing item records its exception without stopping the others.
inline std::vector<BatchResult> generate_batch(const std::vector<RenderParameters>& param_list,
                                               unsigned parallelism = 1) {
  std::vector<BatchResult> results(param_list.size());
  if (param_list.empty()) return results;

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < param_list.size(); i = next++) {
      try {
        results[i].recording = generate(param_list[i]);
      } catch (...) {
        results[i].error = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, param_list.size());
  if (threads == 1) {
    worker();
    return results;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  pool.clear();
  return results;
}

}  // namespace gerd
