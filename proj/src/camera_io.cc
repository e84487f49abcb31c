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
#include "airinspect/camera_io.h"

#include <fstream>
#include <sstream>

#include "airinspect/common.h"
#include "json.hpp"

namespace airinspect {
namespace geometry {
namespace {

using nlohmann::json;

double NumberField(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw ValidationError(std::string("camera: missing field \"") + key + "\"");
  }
  if (!j.at(key).is_number()) {
    throw ValidationError(std::string("camera: field \"") + key +
                          "\" is not a number");
  }
  return j.at(key).get<double>();
}

std::vector<double> ArrayField(const json& j, const char* key,
                               std::size_t size) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != size) {
    std::ostringstream os;
    os << "camera: field \"" << key << "\" must be an array of " << size
       << " numbers";
    throw ValidationError(os.str());
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) {
      throw ValidationError(std::string("camera: non-numeric entry in \"") +
                            key + "\"");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Camera CameraFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("camera: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("camera: expected a JSON object");
  Camera cam;
  cam.intrinsics.fx = NumberField(j, "fx");
  cam.intrinsics.fy = NumberField(j, "fy");
  cam.intrinsics.cx = NumberField(j, "cx");
  cam.intrinsics.cy = NumberField(j, "cy");
  auto r = ArrayField(j, "R", 9);
  auto t = ArrayField(j, "T", 3);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) cam.pose.rotation(i, k) = r[3 * i + k];
    cam.pose.translation(i) = t[i];
  }
  cam.intrinsics.Validate();
  cam.pose.Validate();
  return cam;
}

std::string CameraToJson(const Camera& camera) {
  json j;
  j["fx"] = camera.intrinsics.fx;
  j["fy"] = camera.intrinsics.fy;
  j["cx"] = camera.intrinsics.cx;
  j["cy"] = camera.intrinsics.cy;
  json r = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) r.push_back(camera.pose.rotation(i, k));
  }
  j["R"] = r;
  j["T"] = {camera.pose.translation(0), camera.pose.translation(1),
            camera.pose.translation(2)};
  j["convention"] = "X_cam = R * X_world + T";
  return j.dump(2) + "\n";
}

Camera ReadCamera(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("camera: cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return CameraFromJson(buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void WriteCamera(const std::filesystem::path& path, const Camera& camera) {
  std::ofstream out(path);
  if (!out) throw ValidationError("camera: cannot write " + path.string());
  out << CameraToJson(camera);
}

}  // namespace geometry
}  // namespace airinspect
