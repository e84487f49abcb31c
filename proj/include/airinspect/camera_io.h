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
#ifndef AIRINSPECT_CAMERA_IO_H_
#define AIRINSPECT_CAMERA_IO_H_

#include <filesystem>
#include <string>

#include "airinspect/geometry.h"

namespace airinspect {
namespace geometry {

struct Camera {
  CameraIntrinsics intrinsics;
  CameraPose pose;
};

// Camera rig JSON:
//   {"fx":..,"fy":..,"cx":..,"cy":..,"R":[9 numbers, row-major],"T":[3]}
// with X_cam = R X_world + T. Parsing validates intrinsics and rotation;
// every failure is a ValidationError.
Camera CameraFromJson(const std::string& text);
std::string CameraToJson(const Camera& camera);

Camera ReadCamera(const std::filesystem::path& path);
void WriteCamera(const std::filesystem::path& path, const Camera& camera);

}  // namespace geometry
}  // namespace airinspect

#endif  // AIRINSPECT_CAMERA_IO_H_
