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
#include "airinspect/geometry.h"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "airinspect/common.h"

namespace airinspect {
namespace geometry {

Mat3 CameraIntrinsics::Matrix() const {
  Mat3 k;
  k << fx, 0.0, cx,
       0.0, fy, cy,
       0.0, 0.0, 1.0;
  return k;
}

void CameraIntrinsics::Validate() const {
  if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(cx) ||
      !std::isfinite(cy)) {
    throw ValidationError("intrinsics: non-finite value");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) {
    std::ostringstream os;
    os << "intrinsics: focal lengths must be positive (fx=" << fx
       << ", fy=" << fy << ")";
    throw ValidationError(os.str());
  }
}

Vec3 CameraPose::Center() const { return -rotation.transpose() * translation; }

void CameraPose::Validate() const {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw ValidationError("pose: non-finite value in R or T");
  }
  const Mat3 gram = rotation.transpose() * rotation;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double expected = i == j ? 1.0 : 0.0;
      double err = std::abs(gram(i, j) - expected);
      if (err > kRotationTolerance) {
        std::ostringstream os;
        os << "pose: rotation not orthonormal, (R^T R)[" << i << "," << j
           << "] deviates from identity by " << err;
        throw ValidationError(os.str());
      }
    }
  }
  double det = rotation.determinant();
  if (std::abs(det - 1.0) > kRotationTolerance) {
    std::ostringstream os;
    os << "pose: rotation determinant is " << det << ", expected 1";
    throw ValidationError(os.str());
  }
}

ProjectionMatrix ProjectionMatrix::Build(const CameraIntrinsics& intrinsics,
                                         const CameraPose& pose) {
  intrinsics.Validate();
  pose.Validate();
  Mat34 rt;
  rt.leftCols<3>() = pose.rotation;
  rt.col(3) = pose.translation;
  // K has zero skew, so each entry is at most one product plus one
  // multiply-add; writing it out keeps integer inputs exact.
  Mat34 p;
  for (int j = 0; j < 4; ++j) {
    p(0, j) = intrinsics.fx * rt(0, j) + intrinsics.cx * rt(2, j);
    p(1, j) = intrinsics.fy * rt(1, j) + intrinsics.cy * rt(2, j);
    p(2, j) = rt(2, j);
  }
  return ProjectionMatrix(p);
}

ProjectionMatrix ProjectionMatrix::Scaled(double s) const {
  if (s == 0.0 || !std::isfinite(s)) {
    throw ValidationError("projection: scale factor must be finite and nonzero");
  }
  return ProjectionMatrix(matrix_ * s);
}

PixelDepth ProjectPoint(const ProjectionMatrix& projection, const Vec3& point) {
  const Vec3 h = projection.matrix().leftCols<3>() * point +
                 projection.matrix().col(3);
  if (h.z() == 0.0) {
    std::ostringstream os;
    os << "projection: point (" << point.x() << ", " << point.y() << ", "
       << point.z() << ") lies in the principal plane (w = 0)";
    throw ValidationError(os.str());
  }
  return PixelDepth{h.x() / h.z(), h.y() / h.z(), h.z()};
}

Vec3 BackProject(const CameraIntrinsics& intrinsics, const CameraPose& pose,
                 const PixelDepth& pixel) {
  if (!(pixel.depth > 0.0)) {
    std::ostringstream os;
    os << "back-projection: depth must be positive, got " << pixel.depth;
    throw ValidationError(os.str());
  }
  const double z = pixel.depth;
  Vec3 cam((pixel.u - intrinsics.cx) * z / intrinsics.fx,
           (pixel.v - intrinsics.cy) * z / intrinsics.fy, z);
  return pose.rotation.transpose() * (cam - pose.translation);
}

}  // namespace geometry
}  // namespace airinspect
