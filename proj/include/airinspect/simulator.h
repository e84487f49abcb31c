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
#ifndef AIRINSPECT_SIMULATOR_H_
#define AIRINSPECT_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "airinspect/annotations.h"
#include "airinspect/camera_io.h"
#include "airinspect/common.h"
#include "airinspect/geometry.h"
#include "airinspect/localization.h"
#include "airinspect/point_cloud.h"

namespace airinspect {
namespace sim {

// Counter-based generator: the value for (seed, stream, counter) is a pure
// function of the three, so results do not depend on evaluation order.
double UniformAt(uint64_t seed, uint64_t stream, uint64_t counter);

// Sequential stream built on UniformAt.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}
  double Uniform() { return UniformAt(seed_, stream_, counter_++); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  int UniformInt(int lo, int hi_inclusive);

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t counter_ = 0;
};

// Patch membership uses distances on the unrolled cylinder (axial offset,
// arc offset). kSquare bounds the larger of the two by the radius, kDisc
// bounds their Euclidean norm.
enum class PatchShape { kSquare, kDisc };

struct PatchSpec {
  double axial = 0.0;    // meters along the cylinder axis
  double azimuth = 0.0;  // radians
  double radius = 0.1;   // meters
  int class_id = 0;
};

// Cylinder of the given radius around the world z axis, z in [0, length].
struct SceneSpec {
  double cylinder_radius = 2.0;
  double length = 6.0;
  double spacing = 0.025;
  // Lattice jitter amplitude as a fraction of a cell, in [0, 1).
  double jitter = 0.5;
  PatchShape patch_shape = PatchShape::kSquare;
  std::vector<PatchSpec> patches;
  uint64_t seed = 0;

  void Validate() const;
};

struct Scene {
  SceneSpec spec;
  PointCloud cloud;  // labels: 0 clean, k for patches[k - 1]
  std::vector<geometry::Vec3> normals;
  std::size_t ring_count = 0;   // lattice columns around the circumference
  std::size_t axial_count = 0;  // lattice rows along the axis

  int num_patches() const { return static_cast<int>(spec.patches.size()); }
};

// ceil(2 pi r / s) * ceil(L / s) points; point (row j, column i) has index
// j * ring_count + i. A point takes label k if it lies in patch k; with
// overlapping patches the later one wins and a warning is emitted.
Scene GenerateScene(const SceneSpec& spec);

// Unrolled-cylinder offsets of a surface point from a patch anchor.
double ArcOffset(double radius, double azimuth, double anchor_azimuth);
bool InPatch(const SceneSpec& spec, const PatchSpec& patch, double axial,
             double azimuth);

struct CameraRigSpec {
  int count = 4;  // cameras per height
  double ring_radius = 80.0;
  std::vector<double> heights = {3.0};
  geometry::CameraIntrinsics intrinsics{6000.0, 6000.0, 320.0, 320.0};
  int image_width = 640;
  int image_height = 640;

  void Validate(double cylinder_radius) const;
};

// World-to-camera pose for a camera at `center` looking at `target`, with
// image rows pointing along -up.
geometry::CameraPose LookAt(const geometry::Vec3& center,
                            const geometry::Vec3& target,
                            const geometry::Vec3& up);

// For each height (outer) and each azimuth 2 pi k / count (inner), a camera
// on the ring looking horizontally at the axis point at its own height.
std::vector<geometry::Camera> GenerateCameraRing(const CameraRigSpec& rig,
                                                 double cylinder_radius);

// Per-camera projection of the whole scene with z-buffer visibility.
struct View {
  std::vector<geometry::PixelDepth> projected;
  std::vector<bool> visible;
};

View RenderView(const Scene& scene, const geometry::Camera& camera,
                const localization::LocalizationOptions& options);

// Tight pixel bounds of the visible points labeled patch_id (1-based), or
// nullopt when none is visible or the bounds have zero width or height.
std::optional<BBox2D> GroundTruthBBox(const Scene& scene, int patch_id,
                                      const View& view);
std::optional<BBox2D> GroundTruthBBox(
    const Scene& scene, int patch_id, const geometry::Camera& camera,
    const localization::LocalizationOptions& options);

// Random patches clear of each other and of base.patches (rejection
// sampling, deterministic in seed). Patches keep clear of the cylinder ends.
std::vector<PatchSpec> RandomPatches(const SceneSpec& base, int count,
                                     double min_radius, double max_radius,
                                     int num_classes, uint64_t seed);

// Everything the simulate command needs.
struct SimulationConfig {
  SceneSpec scene;
  CameraRigSpec rig;
  localization::LocalizationOptions visibility;
  int random_patch_count = 0;
  double random_min_radius = 0.2;
  double random_max_radius = 0.4;
};

// JSON layout:
// {"seed": 7,
//  "cylinder": {"radius": 2, "length": 6, "spacing": 0.025, "jitter": 0.5},
//  "patch_shape": "square" | "disc",
//  "patches": [{"axial": 3, "azimuth_deg": 0, "radius": 0.2, "class_id": 1}],
//  "random_patches": {"count": 6, "min_radius": 0.2, "max_radius": 0.4},
//  "rig": {"count": 4, "ring_radius": 80, "heights": [3], "fx": 6000,
//          "fy": 6000, "cx": 320, "cy": 320, "width": 640, "height": 640},
//  "visibility": {"zbuffer_cell": 3, "depth_tolerance": 0.002}}
// All keys optional. Without "patches" the default six random patches are
// used; with "patches" random ones are added only if "random_patches" is
// given. Camera heights default to half the cylinder length.
SimulationConfig ParseSimulationConfig(const std::string& text);
SimulationConfig DefaultSimulationConfig();

// The scene spec with the random patches (drawn from the scene seed over
// the 11 default classes) appended after the explicit ones.
SceneSpec ResolvedSceneSpec(const SimulationConfig& config);

// Widest pixel gap between neighboring lattice points on the near surface.
// A z-buffer cell narrower than this lets far-side points through.
double MaxProjectedGap(const SceneSpec& spec, const CameraRigSpec& rig);

// One image per camera (id = camera index + 1, "camera_<k>.png") with the
// ground-truth box of every visible patch.
annotations::AnnotationSet GroundTruthAnnotations(
    const Scene& scene, const std::vector<geometry::Camera>& cameras,
    const CameraRigSpec& rig,
    const localization::LocalizationOptions& options,
    const annotations::ClassMap& class_map);

}  // namespace sim
}  // namespace airinspect

#endif  // AIRINSPECT_SIMULATOR_H_
