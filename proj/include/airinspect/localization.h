/* Copyright 2026 The airinspect Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef AIRINSPECT_LOCALIZATION_H_
#define AIRINSPECT_LOCALIZATION_H_

#include <optional>
#include <span>
#include <vector>

#include "airinspect/common.h"
#include "airinspect/geometry.h"
#include "airinspect/point_cloud.h"

namespace airinspect {
namespace localization {

enum class SelectionMode {
  // Report the cloud's own coordinates for each selected point.
  kOriginalPoints,
  // Rebuild each selected point from its (u, v, depth) by back-projection.
  kBackprojected,
};

struct LocalizationOptions {
  bool occlusion_culling = false;
  double zbuffer_cell = 1.0;       // pixels
  double depth_tolerance = 0.01;   // relative
  SelectionMode selection_mode = SelectionMode::kOriginalPoints;

  void Validate() const;
};

struct Aabb3 {
  geometry::Vec3 min;
  geometry::Vec3 max;
};

struct LocalizationResult {
  std::vector<std::size_t> indices;  // ascending
  std::vector<geometry::Vec3> points;
  std::optional<geometry::Vec3> centroid;  // empty iff no points selected
  std::optional<Aabb3> aabb;
  int class_id = 0;

  bool empty() const { return indices.empty(); }
};

// Projects every cloud point with P. Points in the principal plane (w = 0)
// get depth 0 so they read as "not in front".
std::vector<geometry::PixelDepth> ProjectCloud(
    const geometry::ProjectionMatrix& projection, const PointCloud& cloud);

// Bins points by (floor(u / cell), floor(v / cell)); a point is visible iff
// depth <= d_min * (1 + depth_tolerance) for its bin. Non-finite or
// non-positive depths are never visible.
std::vector<bool> ZBufferVisibility(
    std::span<const geometry::PixelDepth> projected, double cell,
    double depth_tolerance);

// Selects the cloud points whose projection falls inside the closed box,
// in front of the camera, and (optionally) z-buffer visible.
LocalizationResult LocalizeDamage(const BBox2D& bbox,
                                  const geometry::CameraIntrinsics& intrinsics,
                                  const geometry::CameraPose& pose,
                                  const PointCloud& cloud,
                                  const LocalizationOptions& options,
                                  int class_id = 0);

// Fills centroid and aabb from points (clears them for an empty set).
void Summarize(LocalizationResult& result);

}  // namespace localization
}  // namespace airinspect

#endif  // AIRINSPECT_LOCALIZATION_H_
