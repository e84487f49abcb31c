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
#include "airinspect/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace airinspect {
namespace metrics {
namespace {

using SliceKey = std::pair<int64_t, int>;

// Detection indices by descending confidence, ties in input order.
std::vector<std::size_t> ConfidenceOrder(
    std::span<const DetectionRecord> detections) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });
  return order;
}

void ValidateInputs(std::span<const DetectionRecord> detections,
                    std::span<const GroundTruthRecord> ground_truth,
                    double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw ValidationError("IoU threshold must lie in (0, 1)");
  }
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const auto& d = detections[i];
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw ValidationError("detection " + std::to_string(i) +
                            ": confidence must lie in [0, 1]");
    }
    if (d.class_id < 0) {
      throw ValidationError("detection " + std::to_string(i) +
                            ": negative class id");
    }
    try {
      d.box.Validate();
    } catch (const ValidationError& e) {
      throw ValidationError("detection " + std::to_string(i) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (ground_truth[i].class_id < 0) {
      throw ValidationError("ground truth " + std::to_string(i) +
                            ": negative class id");
    }
    try {
      ground_truth[i].box.Validate();
    } catch (const ValidationError& e) {
      throw ValidationError("ground truth " + std::to_string(i) + ": " +
                            e.what());
    }
  }
}

}  // namespace

MatchResult MatchDetections(std::span<const DetectionRecord> detections,
                            std::span<const GroundTruthRecord> ground_truth,
                            double iou_threshold) {
  MatchResult result;
  result.is_tp.assign(detections.size(), false);
  result.matched_gt.assign(detections.size(), -1);

  std::map<SliceKey, std::vector<std::size_t>> gt_by_slice;
  for (std::size_t g = 0; g < ground_truth.size(); ++g) {
    gt_by_slice[{ground_truth[g].image_id, ground_truth[g].class_id}]
        .push_back(g);
  }
  std::vector<bool> gt_taken(ground_truth.size(), false);

  for (std::size_t d : ConfidenceOrder(detections)) {
    const auto& det = detections[d];
    auto it = gt_by_slice.find({det.image_id, det.class_id});
    if (it == gt_by_slice.end()) continue;
    double best_iou = -1.0;
    int best = -1;
    for (std::size_t g : it->second) {
      if (gt_taken[g]) continue;
      double iou = BoxIou(det.box, ground_truth[g].box);
      if (iou > best_iou) {
        best_iou = iou;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou >= iou_threshold) {
      gt_taken[best] = true;
      result.is_tp[d] = true;
      result.matched_gt[d] = best;
    }
  }
  for (bool tp : result.is_tp) (tp ? result.counts.tp : result.counts.fp)++;
  result.counts.fn = static_cast<int64_t>(ground_truth.size()) - result.counts.tp;
  return result;
}

PrecisionRecall PrecisionRecallF1(const PRCounts& c) {
  PrecisionRecall out;
  if (c.tp + c.fp > 0) out.precision = double(c.tp) / double(c.tp + c.fp);
  if (c.tp + c.fn > 0) out.recall = double(c.tp) / double(c.tp + c.fn);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * (out.precision * out.recall) / (out.precision + out.recall);
  }
  return out;
}

std::optional<double> AveragePrecision(const std::vector<bool>& flags,
                                       int64_t n_gt) {
  if (n_gt < 0) throw ValidationError("AveragePrecision: negative n_gt");
  if (n_gt == 0) {
    if (flags.empty()) return std::nullopt;
    Warn("average precision requested for a class with no ground truth; "
         "reporting 0");
    return 0.0;
  }
  const std::size_t n = flags.size();
  std::vector<double> precision(n), recall(n);
  int64_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (flags[k]) ++tp;
    precision[k] = double(tp) / double(k + 1);
    recall[k] = double(tp) / double(n_gt);
  }
  // Envelope: precision at k becomes the max precision at any rank >= k.
  for (std::size_t k = n; k-- > 1;) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (recall[k] > prev_recall) {
      ap += (recall[k] - prev_recall) * precision[k];
      prev_recall = recall[k];
    }
  }
  return ap;
}

double MeanAp(std::span<const double> per_class_ap) {
  if (per_class_ap.empty()) {
    throw ValidationError("mAP requires at least one class with a defined AP");
  }
  double sum = 0.0;
  for (double ap : per_class_ap) sum += ap;
  return sum / static_cast<double>(per_class_ap.size());
}

EvaluationReport Evaluate(std::span<const DetectionRecord> detections,
                          std::span<const GroundTruthRecord> ground_truth,
                          double iou_threshold, int num_classes) {
  ValidateInputs(detections, ground_truth, iou_threshold);
  EvaluationReport report;
  report.iou_threshold = iou_threshold;

  std::set<int> classes;
  for (int c = 0; c < num_classes; ++c) classes.insert(c);
  for (const auto& d : detections) classes.insert(d.class_id);
  for (const auto& g : ground_truth) classes.insert(g.class_id);

  const MatchResult match =
      MatchDetections(detections, ground_truth, iou_threshold);
  const std::vector<std::size_t> order = ConfidenceOrder(detections);

  std::vector<double> defined_aps;
  for (int c : classes) {
    ClassMetrics m;
    m.class_id = c;
    std::vector<bool> flags;
    for (std::size_t d : order) {
      if (detections[d].class_id != c) continue;
      flags.push_back(match.is_tp[d]);
      (match.is_tp[d] ? m.counts.tp : m.counts.fp)++;
    }
    m.n_det = static_cast<int64_t>(flags.size());
    for (const auto& g : ground_truth) m.n_gt += g.class_id == c ? 1 : 0;
    m.counts.fn = m.n_gt - m.counts.tp;
    m.pr = PrecisionRecallF1(m.counts);
    m.ap = AveragePrecision(flags, m.n_gt);
    if (m.ap) defined_aps.push_back(*m.ap);
    report.counts += m.counts;
    report.per_class.push_back(std::move(m));
  }
  if (report.counts != match.counts) {
    throw InvariantError("Evaluate: per-class counts do not sum to the total");
  }
  report.overall = PrecisionRecallF1(report.counts);
  if (!defined_aps.empty()) {
    report.map = MeanAp(defined_aps);
    report.map_defined = true;
  }
  return report;
}

std::string MarkdownTable(const EvaluationReport& report,
                          const std::vector<std::string>& class_names) {
  std::ostringstream os;
  char buf[256];
  os << "| Class | P (%) | R (%) | F1 (%) | mAP (%) |\n"
     << "|---|---:|---:|---:|---:|\n";
  for (const auto& m : report.per_class) {
    std::string name = m.class_id < static_cast<int>(class_names.size())
                           ? class_names[m.class_id]
                           : "class " + std::to_string(m.class_id);
    std::string ap = "n/a";
    if (m.ap) {
      std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * *m.ap);
      ap = buf;
    }
    std::snprintf(buf, sizeof(buf), "| %s | %.1f | %.1f | %.1f | %s |\n",
                  name.c_str(), 100.0 * m.pr.precision, 100.0 * m.pr.recall,
                  100.0 * m.pr.f1, ap.c_str());
    os << buf;
  }
  std::string map = "n/a";
  if (report.map_defined) {
    std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * report.map);
    map = buf;
  }
  std::snprintf(buf, sizeof(buf), "| All | %.1f | %.1f | %.1f | %s |\n",
                100.0 * report.overall.precision, 100.0 * report.overall.recall,
                100.0 * report.overall.f1, map.c_str());
  os << buf;
  return os.str();
}

}  // namespace metrics
}  // namespace airinspect
