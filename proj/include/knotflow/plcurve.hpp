#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "knotflow/geometry.hpp"

namespace knotflow {

/// Closed polygon in R³; the last vertex connects back to the first.
class PLCurve {
 public:
  /// Requires at least 3 vertices and no two cyclically consecutive
  /// vertices coinciding.
  explicit PLCurve(std::vector<Vec3> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 3) throw std::invalid_argument("closed curve needs at least 3 vertices");
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (norm(v_[(i + 1) % v_.size()] - v_[i]) == 0.0)
        throw std::invalid_argument("consecutive curve vertices coincide");
  }

  const std::vector<Vec3>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Vec3& operator[](std::size_t i) const { return v_[i]; }
  /// Segment i runs from vertex i to vertex i+1 (cyclically).
  const Vec3& segment_end(std::size_t i) const { return v_[(i + 1) % v_.size()]; }

 private:
  std::vector<Vec3> v_;
};

}  // namespace knotflow
