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
#ifndef AIRINSPECT_GEOMETRY_H_
#define AIRINSPECT_GEOMETRY_H_

#include <Eigen/Core>

namespace airinspect {
namespace geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

// Zero-skew, distortion-free pinhole intrinsics in pixels.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  Mat3 Matrix() const;
  // Throws ValidationError unless fx > 0 and fy > 0 (and all finite).
  void Validate() const;
};

// World-to-camera rigid transform: X_cam = rotation * X_world + translation.
struct CameraPose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  // Camera center in world coordinates, -R^T T.
  Vec3 Center() const;
  // Throws ValidationError naming the failed check: orthonormality
  // (R^T R = I within 1e-9 per entry) or orientation (det R = 1 within 1e-9).
  void Validate() const;
};

inline constexpr double kRotationTolerance = 1e-9;

// A pixel location with camera-frame depth Z (not ray length).
struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;

  bool InFront() const { return depth > 0.0; }
};

// P = K [R | T]. Only constructible from a validated camera (or by scaling
// an existing matrix), so it always factors as K [R | T] up to scale.
class ProjectionMatrix {
 public:
  static ProjectionMatrix Build(const CameraIntrinsics& intrinsics,
                                const CameraPose& pose);

  const Mat34& matrix() const { return matrix_; }
  // s * P for s != 0; projects to the same pixels with depth scaled by s.
  ProjectionMatrix Scaled(double s) const;

 private:
  explicit ProjectionMatrix(const Mat34& m) : matrix_(m) {}
  Mat34 matrix_;
};

// Homogeneous projection (a, b, w) = P (X, 1) -> (a/w, b/w, w). Throws
// ValidationError when w == 0 (X lies in the principal plane). Points behind
// the camera are returned with depth <= 0; callers check InFront().
PixelDepth ProjectPoint(const ProjectionMatrix& projection, const Vec3& point);

// Inverse of ProjectPoint for a known depth: X_cam = K^-1 (u Z, v Z, Z),
// X_world = R^T (X_cam - T). Throws ValidationError for depth <= 0.
Vec3 BackProject(const CameraIntrinsics& intrinsics, const CameraPose& pose,
                 const PixelDepth& pixel);

}  // namespace geometry
}  // namespace airinspect

#endif  // AIRINSPECT_GEOMETRY_H_
