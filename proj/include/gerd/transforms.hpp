#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "gerd/core.hpp"
#include "gerd/geometry.hpp"
#include "gerd/rng.hpp"

namespace gerd {

// Translation, scale, rotation and shear together with their per-step
// velocities. Translation is the shape center in pixels; scales multiply
// the base size; theta is in radians.
struct AffineState {
  double tx = 0.0, ty = 0.0;
  double sx = 1.0, sy = 1.0;
  double theta = 0.0;
  double shx = 0.0, shy = 0.0;

  double vtx = 0.0, vty = 0.0;
  double vsx = 0.0, vsy = 0.0;
  double vtheta = 0.0;
  double vshx = 0.0, vshy = 0.0;

  friend bool operator==(const AffineState&, const AffineState&) = default;
};

// Lower bound on both scale factors. A scale that would cross it is pinned
// here and its velocity zeroed.
inline constexpr double kMinScale = 0.01;

// Velocity change for one transform class at one timestep. Rotation uses
// only the x component.
using DeltaFn = std::function<Vec2(std::uint64_t step, RandomStream& rng)>;

inline DeltaFn gaussian_delta(double sigma) {
  return [sigma](std::uint64_t, RandomStream& rng) -> Vec2 {
    const double dx = rng.normal(0.0, sigma);
    const double dy = rng.normal(0.0, sigma);
    return {dx, dy};
  };
}

inline DeltaFn gaussian_delta_1d(double sigma) {
  return [sigma](std::uint64_t, RandomStream& rng) -> Vec2 { return {rng.normal(0.0, sigma), 0.0}; };
}

struct ParameterDynamics {
  bool enabled = false;
  DeltaFn delta;  // empty: zero acceleration
};

// Acceleration per transform class, evaluated in the fixed order
// translate, scale, rotate, shear so draws from the shared stream replay.
struct AccelerationProfile {
  ParameterDynamics translate;
  ParameterDynamics scale;
  ParameterDynamics rotate;
  ParameterDynamics shear;
};

// Semi-implicit Euler: velocities first, then positions with the new
// velocities. Disabled classes are left untouched.
inline AffineState step(AffineState state, const AccelerationProfile& profile, std::uint64_t t,
                        RandomStream& rng) {
  const auto delta = [&](const ParameterDynamics& dyn) -> Vec2 {
    return dyn.delta ? dyn.delta(t, rng) : Vec2{};
  };

  if (profile.translate.enabled) {
    const Vec2 dv = delta(profile.translate);
    state.vtx += dv.x;
    state.vty += dv.y;
    state.tx += state.vtx;
    state.ty += state.vty;
  }
  if (profile.scale.enabled) {
    const Vec2 dv = delta(profile.scale);
    state.vsx += dv.x;
    state.vsy += dv.y;
    state.sx += state.vsx;
    state.sy += state.vsy;
    if (state.sx < kMinScale) {
      state.sx = kMinScale;
      state.vsx = 0.0;
    }
    if (state.sy < kMinScale) {
      state.sy = kMinScale;
      state.vsy = 0.0;
    }
  }
  if (profile.rotate.enabled) {
    const Vec2 dv = delta(profile.rotate);
    state.vtheta += dv.x;
    state.theta += state.vtheta;
  }
  if (profile.shear.enabled) {
    const Vec2 dv = delta(profile.shear);
    state.vshx += dv.x;
    state.vshy += dv.y;
    state.shx += state.vshx;
    state.shy += state.vshy;
  }
  return state;
}

namespace detail {

// cos/sin with exact values at multiples of a quarter turn, so a square
// rotated by pi/2 rasterizes identically to the unrotated one.
inline Vec2 cos_sin(double theta) {
  double c = std::cos(theta);
  double s = std::sin(theta);
  constexpr double kSnap = 1e-15;
  if (std::abs(c) < kSnap) {
    c = 0.0;
    s = s > 0.0 ? 1.0 : -1.0;
  } else if (std::abs(s) < kSnap) {
    s = 0.0;
    c = c > 0.0 ? 1.0 : -1.0;
  }
  return {c, s};
}

}  // namespace detail

// world = T(tx, ty) * R(theta) * Sh(shx, shy) * S(sx * base, sy * base) * local
//
// Templates are centered on the local origin, so rotation, shear and scale
// act about the shape center and (tx, ty) is the center in pixels. With
// y pointing down, positive theta turns +u towards +y (clockwise on screen).
// Shear is [[1, shx], [shy, 1]].
inline AffineMap to_map(const AffineState& state, double base_size) {
  const Vec2 cs = detail::cos_sin(state.theta);
  const AffineMap rotation{cs.x, -cs.y, 0.0, cs.y, cs.x, 0.0};
  const AffineMap shear{1.0, state.shx, 0.0, state.shy, 1.0, 0.0};
  const AffineMap scale{state.sx * base_size, 0.0, 0.0, 0.0, state.sy * base_size, 0.0};

  AffineMap m = rotation * shear * scale;
  m.tx = state.tx;
  m.ty = state.ty;
  if (!(std::abs(m.determinant()) >= AffineMap::kSingularDet)) {
    throw SingularTransform("transform state collapses the shape (det = " + std::to_string(m.determinant()) +
                            ")");
  }
  return m;
}

}  // namespace gerd
