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
#include "airinspect/annotations.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace airinspect {
namespace annotations {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::vector<std::string> SplitWhitespace(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool ParseNumber(const std::string& token, double* out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

bool ParseInt(const std::string& token, int* out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

std::string Trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string StemOf(const std::string& file_name) {
  return fs::path(file_name).stem().string();
}

const json& Require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(where + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

}  // namespace

ClassMap ClassMap::Airsd() {
  return ClassMap{{"crack", "dent", "rust", "paint peeling", "scratch",
                   "rivet damage", "lightning strike", "bird strike",
                   "hail damage", "wrinkle", "missing fastener"}};
}

std::optional<int> ClassMap::Find(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

const ImageInfo* AnnotationSet::FindImage(int64_t id) const {
  for (const auto& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

void AnnotationSet::Validate() const {
  std::set<int64_t> ids;
  for (const auto& img : images) {
    if (!ids.insert(img.id).second) {
      throw ValidationError("duplicate image id " + std::to_string(img.id));
    }
  }
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto& a = annotations[i];
    if (a.class_id < 0 || a.class_id >= class_map.size()) {
      throw ValidationError("annotation " + std::to_string(i) + ": class id " +
                            std::to_string(a.class_id) + " outside [0, " +
                            std::to_string(class_map.size()) + ")");
    }
    if (!ids.count(a.image_id)) {
      throw ValidationError("annotation " + std::to_string(i) +
                            ": unknown image id " + std::to_string(a.image_id));
    }
    a.box.Validate();
  }
}

BBox2D ClampToImage(const BBox2D& box, const ImageInfo& image) {
  if (image.width <= 0 || image.height <= 0) return box;
  BBox2D out{std::clamp(box.x_min, 0.0, double(image.width)),
             std::clamp(box.y_min, 0.0, double(image.height)),
             std::clamp(box.x_max, 0.0, double(image.width)),
             std::clamp(box.y_max, 0.0, double(image.height))};
  if (!out.IsValid()) {
    std::ostringstream os;
    os << "box (" << box.x_min << ", " << box.y_min << ", " << box.x_max << ", "
       << box.y_max << ") lies outside image " << image.id << " ("
       << image.width << "x" << image.height << ")";
    throw ValidationError(os.str());
  }
  return out;
}

std::map<std::string, ImageSize> ReadSizeIndex(const fs::path& path) {
  std::istringstream in(ReadFile(path));
  std::map<std::string, ImageSize> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(Trim(f));
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 3) {
      throw ValidationError(where + ": expected file,width,height");
    }
    ImageSize size;
    size.file_name = fields[0];
    if (!ParseInt(fields[1], &size.width) || !ParseInt(fields[2], &size.height)) {
      if (line_no == 1) continue;  // header
      throw ValidationError(where + ": width/height must be integers");
    }
    if (size.width <= 0 || size.height <= 0) {
      throw ValidationError(where + ": width/height must be positive");
    }
    index[StemOf(size.file_name)] = size;
  }
  return index;
}

void WriteSizeIndex(const fs::path& path, const AnnotationSet& set) {
  std::ostringstream os;
  os << "file,width,height\n";
  for (const auto& img : set.images) {
    os << img.file_name << "," << img.width << "," << img.height << "\n";
  }
  WriteFile(path, os.str());
}

std::vector<GroundTruthRecord> ParseYoloLabels(const std::string& text,
                                               const ImageInfo& image,
                                               const ClassMap& class_map,
                                               const std::string& source_name) {
  std::vector<GroundTruthRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no);
    auto tok = SplitWhitespace(line);
    if (tok.empty()) continue;
    if (tok.size() != 5) {
      throw ValidationError(where + ": expected 5 fields, got " +
                            std::to_string(tok.size()));
    }
    int cls = 0;
    if (!ParseInt(tok[0], &cls)) {
      throw ValidationError(where + ": class '" + tok[0] +
                            "' is not an integer");
    }
    if (cls < 0 || cls >= class_map.size()) {
      throw ValidationError(where + ": class " + tok[0] + " outside [0, " +
                            std::to_string(class_map.size()) + ")");
    }
    double v[4];
    for (int i = 0; i < 4; ++i) {
      if (!ParseNumber(tok[i + 1], &v[i])) {
        throw ValidationError(where + ": '" + tok[i + 1] + "' is not a number");
      }
      if (v[i] < 0.0 || v[i] > 1.0) {
        throw ValidationError(where + ": normalized value " + tok[i + 1] +
                              " outside [0, 1]");
      }
    }
    if (!(v[2] > 0.0) || !(v[3] > 0.0)) {
      throw ValidationError(where + ": width and height must be positive");
    }
    const double W = image.width, H = image.height;
    BBox2D box{(v[0] - v[2] / 2.0) * W, (v[1] - v[3] / 2.0) * H,
               (v[0] + v[2] / 2.0) * W, (v[1] + v[3] / 2.0) * H};
    try {
      box = ClampToImage(box, image);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    out.push_back({image.id, cls, box});
  }
  return out;
}

AnnotationSet ParseYolo(const fs::path& label_dir,
                        const std::optional<fs::path>& size_index,
                        const ClassMap& class_map) {
  if (!fs::is_directory(label_dir)) {
    throw ValidationError(label_dir.string() + " is not a directory");
  }
  std::map<std::string, ImageSize> index;
  if (size_index) index = ReadSizeIndex(*size_index);

  // stem -> label file (may be empty for index-only images)
  std::map<std::string, fs::path> stems;
  for (const auto& entry : fs::directory_iterator(label_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    if (entry.path().filename() == "classes.txt") continue;
    stems[entry.path().stem().string()] = entry.path();
  }
  for (const auto& [stem, size] : index) stems.try_emplace(stem, fs::path());

  AnnotationSet set;
  set.class_map = class_map;
  int64_t next_id = 1;
  for (const auto& [stem, label_path] : stems) {
    ImageInfo img;
    img.id = next_id++;
    img.file_name = stem + ".jpg";
    if (auto it = index.find(stem); it != index.end()) {
      img.file_name = it->second.file_name;
      img.width = it->second.width;
      img.height = it->second.height;
    }
    set.images.push_back(img);
    if (label_path.empty()) continue;
    auto records = ParseYoloLabels(ReadFile(label_path), img, class_map,
                                   label_path.string());
    set.annotations.insert(set.annotations.end(), records.begin(),
                           records.end());
  }
  return set;
}

AnnotationSet ParseCocoString(const std::string& text,
                              const std::string& source_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source_name + ": malformed JSON: " + e.what());
  }
  AnnotationSet set;
  try {
    const json& images = Require(j, "images", source_name);
    const json& anns = Require(j, "annotations", source_name);
    const json& cats = Require(j, "categories", source_name);
    if (!images.is_array() || !anns.is_array() || !cats.is_array()) {
      throw ValidationError(source_name +
                            ": images, annotations and categories must be "
                            "arrays");
    }
    std::unordered_map<int64_t, int> category_index;
    for (const auto& c : cats) {
      const int64_t id = Require(c, "id", source_name + " category").get<int64_t>();
      if (!category_index.emplace(id, set.class_map.size()).second) {
        throw ValidationError(source_name + ": duplicate category id " +
                              std::to_string(id));
      }
      set.class_map.names.push_back(
          Require(c, "name", source_name + " category").get<std::string>());
    }
    for (const auto& im : images) {
      ImageInfo img;
      img.id = Require(im, "id", source_name + " image").get<int64_t>();
      img.width = im.value("width", 0);
      img.height = im.value("height", 0);
      img.file_name = im.value("file_name", std::to_string(img.id) + ".jpg");
      if (set.FindImage(img.id)) {
        throw ValidationError(source_name + ": duplicate image id " +
                              std::to_string(img.id));
      }
      set.images.push_back(img);
    }
    std::unordered_map<int64_t, std::size_t> image_pos;
    for (std::size_t i = 0; i < set.images.size(); ++i) {
      image_pos[set.images[i].id] = i;
    }
    for (std::size_t k = 0; k < anns.size(); ++k) {
      const auto& a = anns[k];
      const std::string where =
          source_name + ": annotation " +
          (a.contains("id") ? a.at("id").dump() : "#" + std::to_string(k));
      const int64_t image_id = Require(a, "image_id", where).get<int64_t>();
      const int64_t cat_id = Require(a, "category_id", where).get<int64_t>();
      auto im = image_pos.find(image_id);
      if (im == image_pos.end()) {
        throw ValidationError(where + " references missing image " +
                              std::to_string(image_id));
      }
      auto cat = category_index.find(cat_id);
      if (cat == category_index.end()) {
        throw ValidationError(where + " references missing category " +
                              std::to_string(cat_id));
      }
      const json& bbox = Require(a, "bbox", where);
      if (!bbox.is_array() || bbox.size() != 4) {
        throw ValidationError(where + ": bbox must be [x, y, width, height]");
      }
      const double x = bbox[0].get<double>(), y = bbox[1].get<double>();
      const double w = bbox[2].get<double>(), h = bbox[3].get<double>();
      if (!(w > 0.0) || !(h > 0.0)) {
        throw ValidationError(where + ": bbox width and height must be positive");
      }
      BBox2D box{x, y, x + w, y + h};
      try {
        box = ClampToImage(box, set.images[im->second]);
      } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
      }
      set.annotations.push_back({image_id, cat->second, box});
    }
  } catch (const json::exception& e) {
    throw ValidationError(source_name + ": " + e.what());
  }
  return set;
}

AnnotationSet ParseCoco(const fs::path& path) {
  return ParseCocoString(ReadFile(path), path.string());
}

std::string WriteCocoString(const AnnotationSet& set) {
  set.Validate();
  json j;
  j["info"] = {{"description", "airinspect annotation export"}};
  json images = json::array();
  for (const auto& img : set.images) {
    images.push_back({{"id", img.id},
                      {"file_name", img.file_name},
                      {"width", img.width},
                      {"height", img.height}});
  }
  json anns = json::array();
  int64_t next_id = 1;
  for (const auto& a : set.annotations) {
    const double w = a.box.Width(), h = a.box.Height();
    anns.push_back({{"id", next_id++},
                    {"image_id", a.image_id},
                    {"category_id", a.class_id + 1},
                    {"bbox", {a.box.x_min, a.box.y_min, w, h}},
                    {"area", w * h},
                    {"iscrowd", 0}});
  }
  json cats = json::array();
  for (int c = 0; c < set.class_map.size(); ++c) {
    cats.push_back({{"id", c + 1}, {"name", set.class_map.names[c]}});
  }
  j["images"] = images;
  j["annotations"] = anns;
  j["categories"] = cats;
  return j.dump(1) + "\n";
}

void WriteCoco(const fs::path& path, const AnnotationSet& set) {
  WriteFile(path, WriteCocoString(set));
}

std::string YoloLabelText(const AnnotationSet& set, const ImageInfo& image) {
  if (image.width <= 0 || image.height <= 0) {
    throw ValidationError("image " + std::to_string(image.id) + " (" +
                          image.file_name +
                          ") has no size; YOLO output needs width and height");
  }
  std::ostringstream os;
  char buf[160];
  const double W = image.width, H = image.height;
  for (const auto& a : set.annotations) {
    if (a.image_id != image.id) continue;
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", a.class_id,
                  (a.box.x_min + a.box.x_max) / 2.0 / W,
                  (a.box.y_min + a.box.y_max) / 2.0 / H, a.box.Width() / W,
                  a.box.Height() / H);
    os << buf;
  }
  return os.str();
}

void WriteYolo(const fs::path& out_dir, const AnnotationSet& set) {
  set.Validate();
  fs::create_directories(out_dir);
  std::set<std::string> stems;
  for (const auto& img : set.images) {
    const std::string stem = StemOf(img.file_name);
    if (!stems.insert(stem).second) {
      throw ValidationError("two images share the file stem '" + stem + "'");
    }
    WriteFile(out_dir / (stem + ".txt"), YoloLabelText(set, img));
  }
  std::ostringstream names;
  for (const auto& n : set.class_map.names) names << n << "\n";
  WriteFile(out_dir / "classes.txt", names.str());
  WriteSizeIndex(out_dir / "index.csv", set);
}

Format ParseFormat(const std::string& name) {
  if (name == "yolo") return Format::kYolo;
  if (name == "coco") return Format::kCoco;
  throw ValidationError("unknown format '" + name + "' (expected yolo or coco)");
}

void Convert(const AnnotationSet& set, Format target, const fs::path& output) {
  if (target == Format::kCoco) {
    WriteCoco(output, set);
  } else {
    WriteYolo(output, set);
  }
}

namespace {

SizeSummary Summarize(std::vector<double> values) {
  SizeSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  const std::size_t n = values.size();
  s.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return s;
}

json SummaryJson(const SizeSummary& s) {
  return {{"min", s.min}, {"mean", s.mean}, {"median", s.median}, {"max", s.max}};
}

}  // namespace

DatasetStats ComputeStats(const AnnotationSet& set) {
  DatasetStats stats;
  stats.num_images = static_cast<int64_t>(set.images.size());
  stats.num_annotations = static_cast<int64_t>(set.annotations.size());
  stats.per_class.assign(static_cast<std::size_t>(set.class_map.size()), 0);
  std::map<int64_t, int64_t> per_image;
  for (const auto& img : set.images) per_image[img.id] = 0;
  std::vector<double> widths, heights, areas;
  for (const auto& a : set.annotations) {
    if (a.class_id >= 0 && a.class_id < set.class_map.size()) {
      ++stats.per_class[a.class_id];
    }
    ++per_image[a.image_id];
    widths.push_back(a.box.Width());
    heights.push_back(a.box.Height());
    const double area = a.box.Area();
    areas.push_back(area);
    if (area < 32.0 * 32.0) {
      ++stats.small;
    } else if (area < 96.0 * 96.0) {
      ++stats.medium;
    } else {
      ++stats.large;
    }
  }
  for (const auto& [id, count] : per_image) ++stats.boxes_per_image[count];
  stats.width = Summarize(std::move(widths));
  stats.height = Summarize(std::move(heights));
  stats.area = Summarize(std::move(areas));
  return stats;
}

std::string StatsToJson(const DatasetStats& stats, const ClassMap& class_map) {
  json j;
  j["num_images"] = stats.num_images;
  j["num_annotations"] = stats.num_annotations;
  json per_class = json::array();
  for (std::size_t c = 0; c < stats.per_class.size(); ++c) {
    per_class.push_back(
        {{"class_id", c},
         {"name", c < class_map.names.size() ? class_map.names[c] : ""},
         {"count", stats.per_class[c]}});
  }
  j["per_class"] = per_class;
  json hist = json::array();
  for (const auto& [boxes, images] : stats.boxes_per_image) {
    hist.push_back({{"boxes", boxes}, {"images", images}});
  }
  j["boxes_per_image"] = hist;
  j["box_width"] = SummaryJson(stats.width);
  j["box_height"] = SummaryJson(stats.height);
  j["box_area"] = SummaryJson(stats.area);
  j["area_buckets"] = {{"small", stats.small},
                       {"medium", stats.medium},
                       {"large", stats.large}};
  return j.dump(2) + "\n";
}

}  // namespace annotations
}  // namespace airinspect
