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
#include <cmath>
#include <fstream>
#include <sstream>

#include "airinspect/common.h"
#include "airinspect/metrics.h"
#include "json.hpp"

namespace airinspect {
namespace metrics {

using nlohmann::json;

std::vector<DetectionRecord> ParseDetectionsJson(
    const std::string& text, const std::string& source_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source_name + ": malformed JSON: " + e.what());
  }
  if (!j.is_array()) {
    throw ValidationError(source_name + ": expected a list of detections");
  }
  std::vector<DetectionRecord> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where =
        source_name + ": detection " + std::to_string(i) + ": ";
    const json& e = j[i];
    DetectionRecord d;
    try {
      d.image_id = e.at("image_id").get<int64_t>();
      d.class_id = e.at("class_id").get<int>();
      d.confidence = e.at("confidence").get<double>();
      const json& b = e.at("bbox");
      if (!b.is_array() || b.size() != 4) {
        throw ValidationError(where + "bbox must have 4 numbers");
      }
      d.box = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
               b[3].get<double>()};
    } catch (const json::exception& ex) {
      throw ValidationError(where + ex.what());
    }
    if (d.class_id < 0) throw ValidationError(where + "negative class_id");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw ValidationError(where + "confidence outside [0, 1]");
    }
    try {
      d.box.Validate();
    } catch (const ValidationError& ex) {
      throw ValidationError(where + ex.what());
    }
    out.push_back(d);
  }
  return out;
}

std::vector<DetectionRecord> ReadDetections(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseDetectionsJson(buffer.str(), path.string());
}

std::string DetectionsToJson(std::span<const DetectionRecord> detections) {
  json j = json::array();
  for (const auto& d : detections) {
    j.push_back({{"image_id", d.image_id},
                 {"class_id", d.class_id},
                 {"bbox", {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max}},
                 {"confidence", d.confidence}});
  }
  return j.dump(2) + "\n";
}

namespace {

json PrJson(const PRCounts& c, const PrecisionRecall& pr) {
  return {{"tp", c.tp},
          {"fp", c.fp},
          {"fn", c.fn},
          {"precision", pr.precision},
          {"recall", pr.recall},
          {"f1", pr.f1}};
}

}  // namespace

std::string ReportToJson(const EvaluationReport& report,
                         const std::vector<std::string>& class_names) {
  json per_class = json::array();
  for (const auto& c : report.per_class) {
    json row = PrJson(c.counts, c.pr);
    row["class_id"] = c.class_id;
    if (c.class_id >= 0 &&
        static_cast<std::size_t>(c.class_id) < class_names.size()) {
      row["name"] = class_names[static_cast<std::size_t>(c.class_id)];
    }
    row["n_gt"] = c.n_gt;
    row["n_det"] = c.n_det;
    row["ap"] = c.ap ? json(*c.ap) : json(nullptr);
    per_class.push_back(row);
  }
  json overall = PrJson(report.counts, report.overall);
  overall["map"] = report.map;
  overall["map_defined"] = report.map_defined;
  json j = {{"iou_threshold", report.iou_threshold},
            {"per_class", per_class},
            {"overall", overall}};
  return j.dump(2) + "\n";
}

}  // namespace metrics
}  // namespace airinspect
