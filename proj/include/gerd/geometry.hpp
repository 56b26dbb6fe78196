#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "gerd/core.hpp"

namespace gerd {

enum class ShapeKind : std::uint8_t { Square = 0, Circle = 1, Triangle = 2 };

inline std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Square:
      return "square";
    case ShapeKind::Circle:
      return "circle";
    case ShapeKind::Triangle:
      return "triangle";
  }
  return "unknown";
}

inline ShapeKind shape_from_string(std::string_view name) {
  if (name == "square") return ShapeKind::Square;
  if (name == "circle") return ShapeKind::Circle;
  if (name == "triangle") return ShapeKind::Triangle;
  throw ConfigError("unknown shape '" + std::string(name) + "'");
}

// Closed region inside the canonical unit box [-0.5, 0.5]^2, local (u, v)
// coordinates. The triangle is isoceles with its apex pointing along +u:
// vertices (-0.5, -0.5), (-0.5, 0.5), (0.5, 0).
struct ShapeTemplate {
  ShapeKind kind = ShapeKind::Square;

  constexpr bool contains(double u, double v) const {
    switch (kind) {
      case ShapeKind::Square:
        return u >= -0.5 && u <= 0.5 && v >= -0.5 && v <= 0.5;
      case ShapeKind::Circle:
        return u * u + v * v <= 0.25;
      case ShapeKind::Triangle: {
        // Left edge u = -0.5, slanted edges |v| = 0.25 - u/2.
        const double half_width = 0.25 - 0.5 * u;
        return u >= -0.5 && v <= half_width && -v <= half_width;
      }
    }
    return false;
  }

  friend bool operator==(const ShapeTemplate&, const ShapeTemplate&) = default;
};

inline bool contains(ShapeTemplate shape, double u, double v) { return shape.contains(u, v); }

// Row-major 2x3 matrix taking local shape coordinates to world pixel
// coordinates: world = linear * local + offset.
struct AffineMap {
  double a = 1.0, b = 0.0, tx = 0.0;
  double c = 0.0, d = 1.0, ty = 0.0;

  static constexpr double kSingularDet = 1e-12;

  constexpr double determinant() const { return a * d - b * c; }

  constexpr Vec2 apply(Vec2 p) const { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }

  // Linear composition: (*this) after rhs.
  constexpr AffineMap operator*(const AffineMap& rhs) const {
    return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d, a * rhs.tx + b * rhs.ty + tx,
            c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d, c * rhs.tx + d * rhs.ty + ty};
  }

  AffineMap inverse() const {
    const double det = determinant();
    if (!(std::abs(det) >= kSingularDet)) {
      throw SingularTransform("affine map is not invertible (det = " + std::to_string(det) + ")");
    }
    const double ia = d / det, ib = -b / det, ic = -c / det, id = a / det;
    return {ia, ib, -(ia * tx + ib * ty), ic, id, -(ic * tx + id * ty)};
  }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

// Per-pixel count of the k*k sub-pixel samples inside the shape.
class CoverageGrid {
 public:
  CoverageGrid() = default;
  CoverageGrid(int width, int height, int upsample)
      : width_(width), height_(height), upsample_(upsample),
        counts_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {
    if (width < 1 || height < 1) throw ConfigError("coverage grid needs positive dimensions");
    if (upsample < 1 || upsample > 255) throw ConfigError("upsample factor must be in [1, 255]");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int upsample() const { return upsample_; }
  int max_count() const { return upsample_ * upsample_; }

  std::uint16_t at(int x, int y) const { return counts_[index(x, y)]; }
  std::uint16_t& at(int x, int y) { return counts_[index(x, y)]; }

  const std::vector<std::uint16_t>& counts() const { return counts_; }
  std::vector<std::uint16_t>& counts() { return counts_; }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (auto c : counts_) sum += c;
    return sum;
  }

  // Covered area in square pixels.
  double area() const { return static_cast<double>(total()) / max_count(); }

  bool same_shape(const CoverageGrid& other) const {
    return width_ == other.width_ && height_ == other.height_ && upsample_ == other.upsample_;
  }

  friend bool operator==(const CoverageGrid&, const CoverageGrid&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  int upsample_ = 1;
  std::vector<std::uint16_t> counts_;
};

// Samples pixel (x, y) at (x + (i + 0.5)/k, y + (j + 0.5)/k) for i, j in
// [0, k), maps each sample back to local coordinates and counts hits.
// Only pixels under the shape's bounding box are visited; anything outside
// the grid is clipped.
inline CoverageGrid rasterize(ShapeTemplate shape, const AffineMap& xform, int grid_w, int grid_h, int k) {
  CoverageGrid grid(grid_w, grid_h, k);
  // Offsets are subtracted before the inverse linear part so whole-pixel
  // translations shift the raster exactly.
  AffineMap inv = xform.inverse();
  inv.tx = 0.0;
  inv.ty = 0.0;

  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (double u : {-0.5, 0.5}) {
    for (double v : {-0.5, 0.5}) {
      const Vec2 p = xform.apply({u, v});
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  }
  const auto clamp_px = [](double value, int hi) {
    if (!(value > 0.0)) return 0;
    if (value >= hi) return hi;
    return static_cast<int>(value);
  };
  const int x0 = clamp_px(std::floor(min_x) - 1.0, grid_w);
  const int x1 = clamp_px(std::ceil(max_x) + 1.0, grid_w);
  const int y0 = clamp_px(std::floor(min_y) - 1.0, grid_h);
  const int y1 = clamp_px(std::ceil(max_y) + 1.0, grid_h);

  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      std::uint16_t hits = 0;
      for (int j = 0; j < k; ++j) {
        const double wy = y + (j + 0.5) / k;
        for (int i = 0; i < k; ++i) {
          const double wx = x + (i + 0.5) / k;
          const Vec2 local = inv.apply({wx - xform.tx, wy - xform.ty});
          if (shape.contains(local.x, local.y)) ++hits;
        }
      }
      grid.at(x, y) = hits;
    }
  }
  return grid;
}

}  // namespace gerd
