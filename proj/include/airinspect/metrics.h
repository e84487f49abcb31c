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
#ifndef AIRINSPECT_METRICS_H_
#define AIRINSPECT_METRICS_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "airinspect/common.h"

namespace airinspect {
namespace metrics {

struct PRCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;

  PRCounts& operator+=(const PRCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const PRCounts&) const = default;
};

struct MatchResult {
  // Indexed like the input detections.
  std::vector<bool> is_tp;
  // Index of the matched ground truth (input order), -1 for false positives.
  std::vector<int> matched_gt;
  PRCounts counts;
};

// Greedy matching within each (image_id, class_id) slice. Detections are
// visited by descending confidence (ties keep input order); each takes the
// still-unmatched ground truth of highest IoU if that IoU >= threshold.
MatchResult MatchDetections(std::span<const DetectionRecord> detections,
                            std::span<const GroundTruthRecord> ground_truth,
                            double iou_threshold);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R); each 0/0 is taken as 0.
PrecisionRecall PrecisionRecallF1(const PRCounts& counts);

// All-points AP: area under the monotone non-increasing envelope of the
// precision-recall curve. `flags` are TP (true) / FP (false) in descending
// confidence order. Returns nullopt when n_gt == 0 and there are no
// detections; with n_gt == 0 and detections present, warns and returns 0.
std::optional<double> AveragePrecision(const std::vector<bool>& flags,
                                       int64_t n_gt);

// Mean over the given per-class APs. Throws ValidationError when empty.
double MeanAp(std::span<const double> per_class_ap);

struct ClassMetrics {
  int class_id = 0;
  int64_t n_gt = 0;
  int64_t n_det = 0;
  PRCounts counts;
  PrecisionRecall pr;
  std::optional<double> ap;
};

struct EvaluationReport {
  double iou_threshold = 0.5;
  std::vector<ClassMetrics> per_class;  // ascending class_id
  PRCounts counts;                      // pooled over classes
  PrecisionRecall overall;              // micro-averaged
  double map = 0.0;
  // False when no class had a defined AP; map is then reported as 0.
  bool map_defined = false;
};

// Evaluates classes 0..num_classes-1 plus any other class id that occurs in
// the inputs. Throws ValidationError for confidences outside [0, 1],
// invalid boxes, negative class ids or a threshold outside (0, 1).
EvaluationReport Evaluate(std::span<const DetectionRecord> detections,
                          std::span<const GroundTruthRecord> ground_truth,
                          double iou_threshold, int num_classes = 0);

// Table with P, R, F1 and mAP columns (percent), one row per class plus
// an "All" row. class_names may be shorter than the class list.
std::string MarkdownTable(const EvaluationReport& report,
                          const std::vector<std::string>& class_names);

// Detections JSON: a list of
//   {"image_id": 1, "class_id": 0, "bbox": [x_min, y_min, x_max, y_max],
//    "confidence": 0.9}
// Parsing validates boxes, confidences in [0, 1] and class ids >= 0; errors
// name the source and the entry index.
std::vector<DetectionRecord> ParseDetectionsJson(
    const std::string& text, const std::string& source_name = "<detections>");
std::vector<DetectionRecord> ReadDetections(const std::filesystem::path& path);
std::string DetectionsToJson(std::span<const DetectionRecord> detections);

// Machine-readable form of an evaluation report. Undefined APs are null.
std::string ReportToJson(const EvaluationReport& report,
                         const std::vector<std::string>& class_names);

}  // namespace metrics
}  // namespace airinspect

#endif  // AIRINSPECT_METRICS_H_
