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
#ifndef AIRINSPECT_POINT_CLOUD_H_
#define AIRINSPECT_POINT_CLOUD_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "airinspect/geometry.h"

namespace airinspect {

// Ordered 3D points in meters with optional per-point labels (simulator
// ground truth: 0 = clean surface, k = damage patch k).
struct PointCloud {
  std::vector<geometry::Vec3> points;
  std::optional<std::vector<int32_t>> labels;

  std::size_t size() const { return points.size(); }
  // Throws ValidationError if labels are present with the wrong length or
  // contain negative values.
  void Validate() const;
};

using Rgb = std::array<uint8_t, 3>;

// ASCII PLY with float/double x, y, z vertex properties. An integer `label`
// property, if present, fills PointCloud::labels; other properties and
// elements are ignored. Binary PLY is rejected.
PointCloud ReadPly(const std::filesystem::path& path);
// Whitespace-separated "x y z" per line; '#' starts a comment.
PointCloud ReadXyz(const std::filesystem::path& path);
// Dispatches on extension: .ply or anything else as XYZ.
PointCloud ReadPointCloud(const std::filesystem::path& path);

struct PlyWriteOptions {
  bool write_labels = true;
  // When set, must have one entry per point; written as red green blue.
  const std::vector<Rgb>* colors = nullptr;
};

// Writes ASCII PLY with double-precision coordinates printed round-trip
// exact. Output bytes depend only on the cloud contents.
void WritePly(const std::filesystem::path& path, const PointCloud& cloud,
              const PlyWriteOptions& options = {});

}  // namespace airinspect

#endif  // AIRINSPECT_POINT_CLOUD_H_
