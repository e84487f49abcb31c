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
#ifndef AIRINSPECT_ANNOTATIONS_H_
#define AIRINSPECT_ANNOTATIONS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "airinspect/common.h"

namespace airinspect {
namespace annotations {

// Ordered damage class names; index = class id.
struct ClassMap {
  std::vector<std::string> names;

  // crack, dent, rust, paint peeling, scratch, rivet damage, lightning
  // strike, bird strike, hail damage, wrinkle, missing fastener.
  static ClassMap Airsd();

  int size() const { return static_cast<int>(names.size()); }
  std::optional<int> Find(const std::string& name) const;
  bool operator==(const ClassMap&) const = default;
};

inline constexpr int kDefaultImageSize = 640;

struct ImageInfo {
  int64_t id = 0;
  int width = kDefaultImageSize;
  int height = kDefaultImageSize;
  std::string file_name;

  bool operator==(const ImageInfo&) const = default;
};

struct AnnotationSet {
  std::vector<ImageInfo> images;
  std::vector<GroundTruthRecord> annotations;
  ClassMap class_map;

  const ImageInfo* FindImage(int64_t id) const;
  // Checks class ids, image references, unique image ids and boxes.
  void Validate() const;
};

// Boxes that stick out of the image are clipped to it; a box with no area
// left inside the image is an error. Images with unknown size (<= 0) are
// not clipped.
BBox2D ClampToImage(const BBox2D& box, const ImageInfo& image);

// Sidecar size index: CSV "file,width,height" (header optional), keyed by
// file stem.
struct ImageSize {
  std::string file_name;
  int width = kDefaultImageSize;
  int height = kDefaultImageSize;
};
std::map<std::string, ImageSize> ReadSizeIndex(const std::filesystem::path& path);
void WriteSizeIndex(const std::filesystem::path& path, const AnnotationSet& set);

// One "<stem>.txt" per image with lines "class x_center y_center width
// height", all normalized. Images are the label files plus any index entries
// without labels, sorted by stem and numbered from 1. A file named
// classes.txt is not a label file. Sizes missing from the index default to
// 640x640. Errors name the file and line.
AnnotationSet ParseYolo(const std::filesystem::path& label_dir,
                        const std::optional<std::filesystem::path>& size_index,
                        const ClassMap& class_map);

// Parses the label lines of a single image.
std::vector<GroundTruthRecord> ParseYoloLabels(const std::string& text,
                                               const ImageInfo& image,
                                               const ClassMap& class_map,
                                               const std::string& source_name);

// COCO detection JSON; bbox = [x, y, width, height] in pixels. Category ids
// (0- or 1-based, or arbitrary) map to 0..K-1 in category array order.
AnnotationSet ParseCoco(const std::filesystem::path& path);
AnnotationSet ParseCocoString(const std::string& text,
                              const std::string& source_name = "<coco>");

// Writes categories with ids 1..K, images and annotations in set order.
std::string WriteCocoString(const AnnotationSet& set);
void WriteCoco(const std::filesystem::path& path, const AnnotationSet& set);

// Normalized label text for one image. Throws ValidationError when the image
// size is unknown.
std::string YoloLabelText(const AnnotationSet& set, const ImageInfo& image);
// Writes <stem>.txt per image, classes.txt and index.csv into out_dir.
void WriteYolo(const std::filesystem::path& out_dir, const AnnotationSet& set);

enum class Format { kYolo, kCoco };
Format ParseFormat(const std::string& name);

// Serializes to the target format: a file path for COCO, a directory for
// YOLO.
void Convert(const AnnotationSet& set, Format target,
             const std::filesystem::path& output);

struct SizeSummary {
  double min = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct DatasetStats {
  int64_t num_images = 0;
  int64_t num_annotations = 0;
  std::vector<int64_t> per_class;              // indexed by class id
  std::map<int64_t, int64_t> boxes_per_image;  // boxes -> number of images
  SizeSummary width;                           // pixels
  SizeSummary height;
  SizeSummary area;
  // Area buckets with the usual 32^2 / 96^2 pixel cut-offs.
  int64_t small = 0;
  int64_t medium = 0;
  int64_t large = 0;
};

DatasetStats ComputeStats(const AnnotationSet& set);
std::string StatsToJson(const DatasetStats& stats, const ClassMap& class_map);

}  // namespace annotations
}  // namespace airinspect

#endif  // AIRINSPECT_ANNOTATIONS_H_
