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
#ifndef AIRINSPECT_TESTS_TEST_UTIL_H_
#define AIRINSPECT_TESTS_TEST_UTIL_H_

#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "airinspect/annotations.h"
#include "airinspect/common.h"
#include "airinspect/geometry.h"
#include "airinspect/losses.h"

namespace airinspect {
namespace testing_util {

// Uniformly distributed rotation from a normalized Gaussian quaternion.
inline geometry::Mat3 RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

// Box with center in [-5, 5]^2 and sides in [0.2, 5].
inline losses::CenterBox RandomCenterBox(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-5, 5), s(0.2, 5);
  return {c(rng), c(rng), s(rng), s(rng)};
}

// A second box near `base` so that overlapping pairs are common.
inline losses::CenterBox NearbyBox(std::mt19937_64& rng,
                                   const losses::CenterBox& base) {
  std::uniform_real_distribution<double> d(-1, 1), f(0.5, 1.6);
  return {base.x + d(rng) * base.w, base.y + d(rng) * base.h, base.w * f(rng),
          base.h * f(rng)};
}

// Generated annotation set over the 11 default classes: images named
// img_NNN.jpg with ids 1..n in name order, mixed sizes, 0-5 boxes each,
// annotations grouped by image. Every class occurs at least once.
inline annotations::AnnotationSet ElevenClassFixture(uint64_t seed,
                                                     int num_images = 40) {
  std::mt19937_64 rng(seed);
  const int sizes[3][2] = {{640, 640}, {1280, 720}, {333, 517}};
  annotations::AnnotationSet set;
  set.class_map = annotations::ClassMap::Airsd();
  int next_class = 0;
  for (int i = 0; i < num_images; ++i) {
    annotations::ImageInfo image;
    image.id = i + 1;
    const int* wh = sizes[rng() % 3];
    image.width = wh[0];
    image.height = wh[1];
    char name[32];
    std::snprintf(name, sizeof(name), "img_%03d.jpg", i);
    image.file_name = name;
    set.images.push_back(image);
    int boxes = int(rng() % 6);
    for (int b = 0; b < boxes; ++b) {
      std::uniform_real_distribution<double> fx(0, wh[0] - 2.0),
          fy(0, wh[1] - 2.0);
      double x0 = fx(rng), y0 = fy(rng);
      std::uniform_real_distribution<double> w(1.0, wh[0] - x0),
          h(1.0, wh[1] - y0);
      int cls = next_class < 11 ? next_class++ : int(rng() % 11);
      set.annotations.push_back(
          {image.id, cls, {x0, y0, x0 + w(rng), y0 + h(rng)}});
    }
  }
  return set;
}

// Largest difference in normalized (x_c, y_c, w, h) between two sets with
// the same images (matched by file name), classes and annotation order.
// Returns infinity on any structural mismatch.
inline double MaxNormalizedDifference(const annotations::AnnotationSet& a,
                                      const annotations::AnnotationSet& b) {
  const double inf = std::numeric_limits<double>::infinity();
  if (a.images.size() != b.images.size() ||
      a.annotations.size() != b.annotations.size() ||
      !(a.class_map == b.class_map)) {
    return inf;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.annotations.size(); ++i) {
    const auto& ra = a.annotations[i];
    const auto& rb = b.annotations[i];
    const auto* ia = a.FindImage(ra.image_id);
    const auto* ib = b.FindImage(rb.image_id);
    if (!ia || !ib || ra.class_id != rb.class_id ||
        std::filesystem::path(ia->file_name).stem() !=
            std::filesystem::path(ib->file_name).stem() ||
        ia->width != ib->width || ia->height != ib->height) {
      return inf;
    }
    auto norm = [](const BBox2D& box, const annotations::ImageInfo& im) {
      return std::array<double, 4>{
          (box.x_min + box.x_max) / 2 / im.width,
          (box.y_min + box.y_max) / 2 / im.height, box.Width() / im.width,
          box.Height() / im.height};
    };
    auto na = norm(ra.box, *ia), nb = norm(rb.box, *ib);
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(na[k] - nb[k]));
  }
  return worst;
}

// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    previous_ = SetWarningHandler(
        [this](std::string_view m) { messages_.emplace_back(m); });
  }
  ~WarningCapture() { SetWarningHandler(previous_); }
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  WarningHandler previous_;
  std::vector<std::string> messages_;
};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("airinspect_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testing_util
}  // namespace airinspect

#endif  // AIRINSPECT_TESTS_TEST_UTIL_H_
