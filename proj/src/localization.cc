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
#include "airinspect/localization.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace airinspect {
namespace localization {
namespace {

struct CellKey {
  int64_t x;
  int64_t y;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    uint64_t h = static_cast<uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<uint64_t>(k.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

bool Projectable(const geometry::PixelDepth& p) {
  return p.depth > 0.0 && std::isfinite(p.u) && std::isfinite(p.v) &&
         std::isfinite(p.depth);
}

CellKey KeyOf(const geometry::PixelDepth& p, double cell) {
  return {static_cast<int64_t>(std::floor(p.u / cell)),
          static_cast<int64_t>(std::floor(p.v / cell))};
}

}  // namespace

void LocalizationOptions::Validate() const {
  if (!(zbuffer_cell > 0.0) || !std::isfinite(zbuffer_cell)) {
    throw ValidationError("localization: zbuffer_cell must be > 0");
  }
  if (!(depth_tolerance >= 0.0) || !std::isfinite(depth_tolerance)) {
    throw ValidationError("localization: depth_tolerance must be >= 0");
  }
}

std::vector<geometry::PixelDepth> ProjectCloud(
    const geometry::ProjectionMatrix& projection, const PointCloud& cloud) {
  std::vector<geometry::PixelDepth> out(cloud.size());
  const auto& m = projection.matrix();
  ParallelFor(cloud.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const geometry::Vec3 h = m.leftCols<3>() * cloud.points[i] + m.col(3);
      if (h.z() == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out[i] = {nan, nan, 0.0};
      } else {
        out[i] = {h.x() / h.z(), h.y() / h.z(), h.z()};
      }
    }
  });
  return out;
}

std::vector<bool> ZBufferVisibility(
    std::span<const geometry::PixelDepth> projected, double cell,
    double depth_tolerance) {
  if (!(cell > 0.0)) throw ValidationError("zbuffer: cell must be > 0");
  if (!(depth_tolerance >= 0.0)) {
    throw ValidationError("zbuffer: depth_tolerance must be >= 0");
  }
  std::unordered_map<CellKey, double, CellHash> nearest;
  nearest.reserve(projected.size());
  for (const auto& p : projected) {
    if (!Projectable(p)) continue;
    auto [it, inserted] = nearest.try_emplace(KeyOf(p, cell), p.depth);
    if (!inserted && p.depth < it->second) it->second = p.depth;
  }
  std::vector<bool> visible(projected.size(), false);
  for (std::size_t i = 0; i < projected.size(); ++i) {
    const auto& p = projected[i];
    if (!Projectable(p)) continue;
    visible[i] = p.depth <= nearest.at(KeyOf(p, cell)) * (1.0 + depth_tolerance);
  }
  return visible;
}

void Summarize(LocalizationResult& result) {
  if (result.points.empty()) {
    result.centroid.reset();
    result.aabb.reset();
    return;
  }
  geometry::Vec3 sum = geometry::Vec3::Zero();
  Aabb3 box{result.points.front(), result.points.front()};
  for (const auto& p : result.points) {
    sum += p;
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  result.centroid = sum / static_cast<double>(result.points.size());
  result.aabb = box;
}

LocalizationResult LocalizeDamage(const BBox2D& bbox,
                                  const geometry::CameraIntrinsics& intrinsics,
                                  const geometry::CameraPose& pose,
                                  const PointCloud& cloud,
                                  const LocalizationOptions& options,
                                  int class_id) {
  bbox.Validate();
  options.Validate();
  cloud.Validate();
  const auto projection = geometry::ProjectionMatrix::Build(intrinsics, pose);
  const auto projected = ProjectCloud(projection, cloud);

  std::vector<bool> visible;
  if (options.occlusion_culling) {
    visible = ZBufferVisibility(projected, options.zbuffer_cell,
                                options.depth_tolerance);
  }

  LocalizationResult result;
  result.class_id = class_id;
  for (std::size_t i = 0; i < projected.size(); ++i) {
    const auto& p = projected[i];
    if (!(p.depth > 0.0)) continue;
    if (!bbox.Contains(p.u, p.v)) continue;
    if (options.occlusion_culling && !visible[i]) continue;
    result.indices.push_back(i);
  }
  result.points.reserve(result.indices.size());
  for (std::size_t i : result.indices) {
    if (options.selection_mode == SelectionMode::kBackprojected) {
      result.points.push_back(
          geometry::BackProject(intrinsics, pose, projected[i]));
    } else {
      result.points.push_back(cloud.points[i]);
    }
  }
  Summarize(result);
  return result;
}

}  // namespace localization
}  // namespace airinspect
