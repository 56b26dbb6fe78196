#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "gerd/geometry.hpp"
#include "gerd/transforms.hpp"

namespace gerd {
namespace {

AccelerationProfile all_enabled(double sigma) {
  const DeltaFn d2 = sigma > 0 ? gaussian_delta(sigma) : DeltaFn{};
  const DeltaFn d1 = sigma > 0 ? gaussian_delta_1d(sigma) : DeltaFn{};
  return {{true, d2}, {true, d2}, {true, d1}, {true, d2}};
}

TEST(Step, ZeroAccelerationIsUniformMotion) {
  AffineState s;
  s.tx = 3.0;
  s.vtx = 1.0;
  const AffineState start = s;
  RandomStream rng(0, StreamPurpose::Trajectory);
  const AccelerationProfile profile = all_enabled(0.0);
  for (std::uint64_t t = 0; t < 50; ++t) {
    s = step(s, profile, t, rng);
    EXPECT_EQ(s.tx, start.tx + static_cast<double>(t + 1));
    AffineState rest = s;
    rest.tx = start.tx;
    EXPECT_EQ(rest, start);
  }
}

TEST(Step, ZeroVelocityIsFixedPoint) {
  AffineState s;
  s.tx = 5;
  s.ty = 6;
  s.sx = 1.5;
  s.theta = 0.3;
  s.shy = 0.2;
  RandomStream rng(0, StreamPurpose::Trajectory);
  EXPECT_EQ(step(s, all_enabled(0.0), 0, rng), s);
}

TEST(Step, DisabledParametersAreUntouched) {
  AffineState s;
  s.vtx = 1.0;
  s.vsx = 0.5;
  s.vtheta = 0.1;
  AccelerationProfile profile = all_enabled(0.3);
  profile.translate.enabled = false;
  profile.rotate.enabled = false;
  RandomStream rng(1, StreamPurpose::Trajectory);
  const AffineState next = step(s, profile, 0, rng);
  EXPECT_EQ(next.tx, s.tx);
  EXPECT_EQ(next.vtx, s.vtx);
  EXPECT_EQ(next.theta, s.theta);
  EXPECT_EQ(next.vtheta, s.vtheta);
  EXPECT_NE(next.sx, s.sx);
}

TEST(Step, SameSeedSameTrajectory) {
  const auto run = [] {
    AccelerationProfile profile;
    profile.translate = {true, gaussian_delta(0.1)};
    RandomStream rng(1234, StreamPurpose::Trajectory);
    AffineState s;
    std::vector<double> xs;
    for (std::uint64_t t = 0; t < 200; ++t) {
      s = step(s, profile, t, rng);
      xs.push_back(s.tx);
      xs.push_back(s.ty);
    }
    return xs;
  };
  const auto a = run();
  const auto b = run();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(std::bit_cast<std::uint64_t>(a[i]), std::bit_cast<std::uint64_t>(b[i]));
}

TEST(Step, VelocityUpdatedBeforePosition) {
  AccelerationProfile profile;
  profile.translate = {true, [](std::uint64_t, RandomStream&) { return Vec2{2.0, 0.0}; }};
  RandomStream rng(0, StreamPurpose::Trajectory);
  const AffineState next = step(AffineState{}, profile, 0, rng);
  EXPECT_EQ(next.vtx, 2.0);
  EXPECT_EQ(next.tx, 2.0);
}

TEST(Step, CustomProfileSeesTimestep) {
  AccelerationProfile profile;
  profile.rotate = {true, [](std::uint64_t t, RandomStream&) { return Vec2{t % 2 == 0 ? 0.1 : -0.1, 0.0}; }};
  RandomStream rng(0, StreamPurpose::Trajectory);
  AffineState s;
  s = step(s, profile, 0, rng);
  EXPECT_DOUBLE_EQ(s.vtheta, 0.1);
  s = step(s, profile, 1, rng);
  EXPECT_DOUBLE_EQ(s.vtheta, 0.0);
  EXPECT_DOUBLE_EQ(s.theta, 0.1);
}

TEST(Step, ScaleClampZeroesVelocity) {
  AffineState s;
  s.sx = 0.05;
  s.vsx = -0.1;
  s.sy = 1.0;
  s.vsy = -0.01;
  AccelerationProfile profile;
  profile.scale = {true, {}};
  RandomStream rng(0, StreamPurpose::Trajectory);
  s = step(s, profile, 0, rng);
  EXPECT_EQ(s.sx, kMinScale);
  EXPECT_EQ(s.vsx, 0.0);
  EXPECT_DOUBLE_EQ(s.sy, 0.99);
  EXPECT_EQ(s.vsy, -0.01);
}

TEST(Step, AffineInTimeWithoutAcceleration) {
  AffineState s0;
  s0.tx = 1;
  s0.vtx = 0.25;
  s0.vty = -0.5;
  s0.vtheta = 0.125;
  s0.vshx = 0.0625;
  s0.vsx = 0.03125;
  AffineState s = s0;
  RandomStream rng(0, StreamPurpose::Trajectory);
  for (int t = 1; t <= 64; ++t) {
    s = step(s, all_enabled(0.0), static_cast<std::uint64_t>(t), rng);
    EXPECT_DOUBLE_EQ(s.tx, s0.tx + t * s0.vtx);
    EXPECT_DOUBLE_EQ(s.ty, s0.ty + t * s0.vty);
    EXPECT_DOUBLE_EQ(s.theta, t * s0.vtheta);
    EXPECT_DOUBLE_EQ(s.shx, t * s0.vshx);
    EXPECT_DOUBLE_EQ(s.sx, 1.0 + t * s0.vsx);
  }
}

TEST(ToMap, IdentityScalesByBaseSize) {
  AffineState s;
  s.tx = 10;
  s.ty = 20;
  const Vec2 p = to_map(s, 4.0).apply({0.5, 0.0});
  EXPECT_DOUBLE_EQ(p.x, 12.0);
  EXPECT_DOUBLE_EQ(p.y, 20.0);
}

TEST(ToMap, QuarterTurnMovesAlongY) {
  AffineState s;
  s.tx = 10;
  s.ty = 20;
  s.theta = std::numbers::pi / 2;
  const Vec2 p = to_map(s, 4.0).apply({0.5, 0.0});
  EXPECT_EQ(p.x, 10.0);
  EXPECT_EQ(p.y, 22.0);  // +theta turns +u towards +y (down on screen)
}

TEST(ToMap, ShearMatrix) {
  AffineState s;
  s.tx = 10;
  s.ty = 20;
  s.shx = 1.0;
  // [[1,1],[0,1]] * (2, 2) = (4, 2)
  const Vec2 p = to_map(s, 4.0).apply({0.5, 0.5});
  EXPECT_DOUBLE_EQ(p.x, 14.0);
  EXPECT_DOUBLE_EQ(p.y, 22.0);
}

TEST(ToMap, CompositionOrder) {
  AffineState s;
  s.tx = 3;
  s.ty = -2;
  s.sx = 2.0;
  s.sy = 0.5;
  s.theta = 0.7;
  s.shx = 0.3;
  s.shy = -0.2;
  const double base = 5.0;
  const Vec2 local{0.3, -0.4};
  // T * R * Sh * S by hand.
  const double x1 = local.x * s.sx * base, y1 = local.y * s.sy * base;
  const double x2 = x1 + s.shx * y1, y2 = s.shy * x1 + y1;
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const double x3 = c * x2 - sn * y2, y3 = sn * x2 + c * y2;
  const Vec2 p = to_map(s, base).apply(local);
  EXPECT_NEAR(p.x, x3 + s.tx, 1e-12);
  EXPECT_NEAR(p.y, y3 + s.ty, 1e-12);
}

TEST(ToMap, UnitBoxBecomesCenteredBox) {
  AffineState s;
  s.tx = 7;
  s.ty = 9;
  const AffineMap m = to_map(s, 6.0);
  EXPECT_EQ(m.apply({-0.5, -0.5}), (Vec2{4, 6}));
  EXPECT_EQ(m.apply({0.5, 0.5}), (Vec2{10, 12}));
}

TEST(ToMap, CollapsingShearIsSingular) {
  AffineState s;
  s.shx = 1.0;
  s.shy = 1.0;
  EXPECT_THROW(to_map(s, 4.0), SingularTransform);
}

TEST(ToMap, InverseRoundTrip) {
  AffineState s;
  s.tx = 3;
  s.sx = 1.3;
  s.theta = 1.1;
  s.shy = 0.4;
  const AffineMap m = to_map(s, 8.0);
  const AffineMap inv = m.inverse();
  const Vec2 p{0.21, -0.33};
  const Vec2 q = inv.apply(m.apply(p));
  EXPECT_NEAR(q.x, p.x, 1e-12);
  EXPECT_NEAR(q.y, p.y, 1e-12);
}

TEST(TransformProperties, RotationPreservesCircleArea) {
  AffineState s;
  s.tx = 16.3;
  s.ty = 15.8;
  const double plain = rasterize({ShapeKind::Circle}, to_map(s, 12.0), 32, 32, 4).area();
  for (double theta = 0.1; theta < 6.3; theta += 0.37) {
    s.theta = theta;
    const double turned = rasterize({ShapeKind::Circle}, to_map(s, 12.0), 32, 32, 4).area();
    EXPECT_LT(std::abs(turned - plain), 2.0) << theta;
  }
}

}  // namespace
}  // namespace gerd
