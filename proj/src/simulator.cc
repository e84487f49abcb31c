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
#include "airinspect/simulator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "json.hpp"

namespace airinspect {
namespace sim {
namespace {

using geometry::Vec3;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double WrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > std::numbers::pi) a -= kTwoPi;
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

// Streams used by the scene generator.
constexpr uint64_t kStreamJitterAzimuth = 1;
constexpr uint64_t kStreamJitterAxial = 2;
constexpr uint64_t kStreamPatches = 3;

}  // namespace

double UniformAt(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ (stream * 0xD1B54A32D192ED03ULL));
  h = SplitMix64(h + counter);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

int CounterRng::UniformInt(int lo, int hi_inclusive) {
  const int span = hi_inclusive - lo + 1;
  int v = lo + static_cast<int>(Uniform() * span);
  return std::min(v, hi_inclusive);
}

void SceneSpec::Validate() const {
  if (!(cylinder_radius > 0.0) || !(length > 0.0) || !(spacing > 0.0)) {
    throw ValidationError("scene: radius, length and spacing must be positive");
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw ValidationError("scene: jitter must lie in [0, 1)");
  }
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const auto& p = patches[k];
    const std::string where = "scene: patch " + std::to_string(k + 1);
    if (!(p.radius > 0.0) || !(p.radius < cylinder_radius)) {
      throw ValidationError(where +
                            ": radius must be positive and below the "
                            "cylinder radius");
    }
    if (p.class_id < 0) throw ValidationError(where + ": negative class id");
    if (!std::isfinite(p.axial) || !std::isfinite(p.azimuth)) {
      throw ValidationError(where + ": non-finite anchor");
    }
  }
}

double ArcOffset(double radius, double azimuth, double anchor_azimuth) {
  return radius * WrapAngle(azimuth - anchor_azimuth);
}

bool InPatch(const SceneSpec& spec, const PatchSpec& patch, double axial,
             double azimuth) {
  const double dz = axial - patch.axial;
  const double ds = ArcOffset(spec.cylinder_radius, azimuth, patch.azimuth);
  if (spec.patch_shape == PatchShape::kDisc) {
    return dz * dz + ds * ds <= patch.radius * patch.radius;
  }
  return std::max(std::abs(dz), std::abs(ds)) <= patch.radius;
}

Scene GenerateScene(const SceneSpec& spec) {
  spec.Validate();
  Scene scene;
  scene.spec = spec;
  const double r = spec.cylinder_radius;
  scene.ring_count =
      static_cast<std::size_t>(std::ceil(kTwoPi * r / spec.spacing));
  scene.axial_count = static_cast<std::size_t>(std::ceil(spec.length / spec.spacing));
  const std::size_t n = scene.ring_count * scene.axial_count;
  const double dphi = kTwoPi / static_cast<double>(scene.ring_count);
  const double dz = spec.length / static_cast<double>(scene.axial_count);

  scene.cloud.points.resize(n);
  scene.cloud.labels.emplace(n, 0);
  scene.normals.resize(n);
  std::atomic<std::size_t> overlaps{0};
  auto& labels = *scene.cloud.labels;

  ParallelFor(n, [&](std::size_t begin, std::size_t end) {
    std::size_t local_overlaps = 0;
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t row = idx / scene.ring_count;
      const std::size_t col = idx % scene.ring_count;
      const double ju = spec.jitter * (UniformAt(spec.seed, kStreamJitterAzimuth, idx) - 0.5);
      const double jv = spec.jitter * (UniformAt(spec.seed, kStreamJitterAxial, idx) - 0.5);
      const double phi = (static_cast<double>(col) + ju) * dphi;
      const double z = (static_cast<double>(row) + 0.5 + jv) * dz;
      const double c = std::cos(phi), s = std::sin(phi);
      scene.cloud.points[idx] = Vec3(r * c, r * s, z);
      scene.normals[idx] = Vec3(c, s, 0.0);
      int label = 0;
      for (std::size_t k = 0; k < spec.patches.size(); ++k) {
        if (InPatch(spec, spec.patches[k], z, phi)) {
          if (label != 0) ++local_overlaps;
          label = static_cast<int>(k + 1);
        }
      }
      labels[idx] = label;
    }
    overlaps += local_overlaps;
  });
  if (overlaps > 0) {
    Warn("scene: " + std::to_string(overlaps.load()) +
         " points fall in more than one patch; the later patch wins");
  }
  return scene;
}

void CameraRigSpec::Validate(double cylinder_radius) const {
  if (count < 1) throw ValidationError("rig: count must be >= 1");
  if (!(ring_radius > cylinder_radius)) {
    throw ValidationError("rig: ring radius must exceed the cylinder radius");
  }
  if (heights.empty()) throw ValidationError("rig: heights must not be empty");
  if (image_width <= 0 || image_height <= 0) {
    throw ValidationError("rig: image size must be positive");
  }
  intrinsics.Validate();
}

geometry::CameraPose LookAt(const Vec3& center, const Vec3& target,
                            const Vec3& up) {
  const Vec3 forward = (target - center).normalized();
  const Vec3 right = (-up).cross(forward);
  if (right.norm() < 1e-12) {
    throw ValidationError("LookAt: viewing direction is parallel to up");
  }
  const Vec3 x = right.normalized();
  const Vec3 y = forward.cross(x);
  geometry::CameraPose pose;
  pose.rotation.row(0) = x.transpose();
  pose.rotation.row(1) = y.transpose();
  pose.rotation.row(2) = forward.transpose();
  pose.translation = -pose.rotation * center;
  return pose;
}

std::vector<geometry::Camera> GenerateCameraRing(const CameraRigSpec& rig,
                                                 double cylinder_radius) {
  rig.Validate(cylinder_radius);
  std::vector<geometry::Camera> cameras;
  for (double h : rig.heights) {
    for (int k = 0; k < rig.count; ++k) {
      const double theta = kTwoPi * k / rig.count;
      const Vec3 center(rig.ring_radius * std::cos(theta),
                        rig.ring_radius * std::sin(theta), h);
      geometry::Camera cam;
      cam.intrinsics = rig.intrinsics;
      cam.pose = LookAt(center, Vec3(0.0, 0.0, h), Vec3::UnitZ());
      cameras.push_back(cam);
    }
  }
  return cameras;
}

View RenderView(const Scene& scene, const geometry::Camera& camera,
                const localization::LocalizationOptions& options) {
  options.Validate();
  View view;
  view.projected = localization::ProjectCloud(
      geometry::ProjectionMatrix::Build(camera.intrinsics, camera.pose),
      scene.cloud);
  view.visible = localization::ZBufferVisibility(
      view.projected, options.zbuffer_cell, options.depth_tolerance);
  return view;
}

std::optional<BBox2D> GroundTruthBBox(const Scene& scene, int patch_id,
                                      const View& view) {
  if (patch_id < 1 || patch_id > scene.num_patches()) {
    throw ValidationError("GroundTruthBBox: patch id " +
                          std::to_string(patch_id) + " out of range");
  }
  const auto& labels = *scene.cloud.labels;
  bool any = false;
  BBox2D box;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != patch_id || !view.visible[i]) continue;
    const auto& p = view.projected[i];
    if (!any) {
      box = {p.u, p.v, p.u, p.v};
      any = true;
    } else {
      box.x_min = std::min(box.x_min, p.u);
      box.y_min = std::min(box.y_min, p.v);
      box.x_max = std::max(box.x_max, p.u);
      box.y_max = std::max(box.y_max, p.v);
    }
  }
  if (!any || !box.IsValid()) return std::nullopt;
  return box;
}

std::optional<BBox2D> GroundTruthBBox(
    const Scene& scene, int patch_id, const geometry::Camera& camera,
    const localization::LocalizationOptions& options) {
  return GroundTruthBBox(scene, patch_id, RenderView(scene, camera, options));
}

std::vector<PatchSpec> RandomPatches(const SceneSpec& base, int count,
                                     double min_radius, double max_radius,
                                     int num_classes, uint64_t seed) {
  if (count < 0 || num_classes < 1 || !(min_radius > 0.0) ||
      max_radius < min_radius) {
    throw ValidationError("RandomPatches: bad parameters");
  }
  if (2.0 * max_radius >= base.length) {
    throw ValidationError("RandomPatches: patches do not fit the cylinder");
  }
  CounterRng rng(seed, kStreamPatches);
  std::vector<PatchSpec> patches;
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts &&
                        static_cast<int>(patches.size()) < count;
       ++attempt) {
    PatchSpec p;
    p.radius = rng.Uniform(min_radius, max_radius);
    p.axial = rng.Uniform(p.radius, base.length - p.radius);
    p.azimuth = rng.Uniform(0.0, kTwoPi);
    p.class_id = rng.UniformInt(0, num_classes - 1);
    auto clear_of = [&](const std::vector<PatchSpec>& others) {
      for (const auto& q : others) {
        const double gap = p.radius + q.radius + 2.0 * base.spacing;
        if (std::abs(p.axial - q.axial) < gap &&
            std::abs(ArcOffset(base.cylinder_radius, p.azimuth, q.azimuth)) <
                gap) {
          return false;
        }
      }
      return true;
    };
    if (clear_of(base.patches) && clear_of(patches)) patches.push_back(p);
  }
  if (static_cast<int>(patches.size()) < count) {
    throw ValidationError("RandomPatches: could not place " +
                          std::to_string(count) + " non-overlapping patches");
  }
  return patches;
}

SimulationConfig DefaultSimulationConfig() {
  SimulationConfig config;
  config.rig.heights = {config.scene.length / 2.0};
  config.visibility.occlusion_culling = true;
  config.visibility.zbuffer_cell = 3.0;
  config.visibility.depth_tolerance = 0.002;
  config.random_patch_count = 6;
  return config;
}

SimulationConfig ParseSimulationConfig(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scene spec: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("scene spec: expected an object");
  SimulationConfig c = DefaultSimulationConfig();
  bool heights_given = false;
  try {
    c.scene.seed = j.value("seed", c.scene.seed);
    if (j.contains("cylinder")) {
      const auto& cyl = j.at("cylinder");
      c.scene.cylinder_radius = cyl.value("radius", c.scene.cylinder_radius);
      c.scene.length = cyl.value("length", c.scene.length);
      c.scene.spacing = cyl.value("spacing", c.scene.spacing);
      c.scene.jitter = cyl.value("jitter", c.scene.jitter);
      c.rig.heights = {c.scene.length / 2.0};
    }
    if (j.contains("patch_shape")) {
      const std::string shape = j.at("patch_shape").get<std::string>();
      if (shape == "square") {
        c.scene.patch_shape = PatchShape::kSquare;
      } else if (shape == "disc") {
        c.scene.patch_shape = PatchShape::kDisc;
      } else {
        throw ValidationError("scene spec: patch_shape must be square or disc");
      }
    }
    if (j.contains("patches")) {
      c.random_patch_count = 0;
      for (const auto& p : j.at("patches")) {
        PatchSpec patch;
        patch.axial = p.at("axial").get<double>();
        patch.azimuth = p.at("azimuth_deg").get<double>() * std::numbers::pi / 180.0;
        patch.radius = p.at("radius").get<double>();
        patch.class_id = p.value("class_id", 0);
        c.scene.patches.push_back(patch);
      }
    }
    if (j.contains("random_patches")) {
      const auto& rp = j.at("random_patches");
      c.random_patch_count = rp.value("count", 6);
      c.random_min_radius = rp.value("min_radius", c.random_min_radius);
      c.random_max_radius = rp.value("max_radius", c.random_max_radius);
    }
    if (j.contains("rig")) {
      const auto& rig = j.at("rig");
      c.rig.count = rig.value("count", c.rig.count);
      c.rig.ring_radius = rig.value("ring_radius", c.rig.ring_radius);
      if (rig.contains("heights")) {
        heights_given = true;
        c.rig.heights = rig.at("heights").get<std::vector<double>>();
      }
      c.rig.intrinsics.fx = rig.value("fx", c.rig.intrinsics.fx);
      c.rig.intrinsics.fy = rig.value("fy", c.rig.intrinsics.fy);
      c.rig.intrinsics.cx = rig.value("cx", c.rig.intrinsics.cx);
      c.rig.intrinsics.cy = rig.value("cy", c.rig.intrinsics.cy);
      c.rig.image_width = rig.value("width", c.rig.image_width);
      c.rig.image_height = rig.value("height", c.rig.image_height);
    }
    if (j.contains("visibility")) {
      const auto& v = j.at("visibility");
      c.visibility.zbuffer_cell = v.value("zbuffer_cell", c.visibility.zbuffer_cell);
      c.visibility.depth_tolerance =
          v.value("depth_tolerance", c.visibility.depth_tolerance);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scene spec: ") + e.what());
  }
  if (!heights_given) c.rig.heights = {c.scene.length / 2.0};
  c.scene.Validate();
  c.rig.Validate(c.scene.cylinder_radius);
  c.visibility.Validate();
  return c;
}

SceneSpec ResolvedSceneSpec(const SimulationConfig& config) {
  SceneSpec spec = config.scene;
  if (config.random_patch_count > 0) {
    SceneSpec base = spec;
    auto extra = RandomPatches(base, config.random_patch_count,
                               config.random_min_radius,
                               config.random_max_radius,
                               annotations::ClassMap::Airsd().size(),
                               spec.seed);
    spec.patches.insert(spec.patches.end(), extra.begin(), extra.end());
  }
  return spec;
}

double MaxProjectedGap(const SceneSpec& spec, const CameraRigSpec& rig) {
  const double f = std::max(rig.intrinsics.fx, rig.intrinsics.fy);
  return f * spec.spacing * (1.0 + spec.jitter) /
         (rig.ring_radius - spec.cylinder_radius);
}

annotations::AnnotationSet GroundTruthAnnotations(
    const Scene& scene, const std::vector<geometry::Camera>& cameras,
    const CameraRigSpec& rig,
    const localization::LocalizationOptions& options,
    const annotations::ClassMap& class_map) {
  annotations::AnnotationSet set;
  set.class_map = class_map;
  const double gap = MaxProjectedGap(scene.spec, rig);
  if (options.occlusion_culling && options.zbuffer_cell < gap) {
    Warn("z-buffer cell " + std::to_string(options.zbuffer_cell) +
         " px is below the projected point gap " + std::to_string(gap) +
         " px; far-side points may count as visible");
  }
  for (std::size_t c = 0; c < cameras.size(); ++c) {
    annotations::ImageInfo img;
    img.id = static_cast<int64_t>(c + 1);
    img.width = rig.image_width;
    img.height = rig.image_height;
    img.file_name = "camera_" + std::to_string(c) + ".png";
    set.images.push_back(img);
    const View view = RenderView(scene, cameras[c], options);
    for (int k = 1; k <= scene.num_patches(); ++k) {
      auto box = GroundTruthBBox(scene, k, view);
      if (!box) continue;
      const int cls = scene.spec.patches[k - 1].class_id;
      if (cls >= class_map.size()) {
        throw ValidationError("patch " + std::to_string(k) + ": class id " +
                              std::to_string(cls) + " not in the class map");
      }
      set.annotations.push_back({img.id, cls, annotations::ClampToImage(*box, img)});
    }
  }
  return set;
}

}  // namespace sim
}  // namespace airinspect
