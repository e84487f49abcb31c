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
#ifndef AIRINSPECT_LOSSES_H_
#define AIRINSPECT_LOSSES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace airinspect {
namespace losses {

// Center-form box (x_c, y_c, w, h).
struct CenterBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;

  // Throws ValidationError unless w > 0 and h > 0 (and all finite).
  void Validate() const;
  bool operator==(const CenterBox&) const = default;
};

// Auxiliary box sharing the center of its source box, with both sides scaled
// by the ratio: left = x - w*ratio/2, right = x + w*ratio/2, etc.
struct InnerBox {
  double left = 0.0;
  double right = 0.0;
  double top = 0.0;
  double bottom = 0.0;
};

// Auxiliary-box scale factor. Must be positive; values outside the usual
// [0.5, 1.5] band are accepted with a warning.
class Ratio {
 public:
  explicit Ratio(double value);
  double value() const { return value_; }

  static constexpr double kTypicalMin = 0.5;
  static constexpr double kTypicalMax = 1.5;

 private:
  double value_;
};

enum class LossId { kIou, kGiou, kDiou, kCiou, kInnerIou, kInnerCiou };

inline constexpr std::array<LossId, 6> kAllLosses = {
    LossId::kIou,  LossId::kGiou,     LossId::kDiou,
    LossId::kCiou, LossId::kInnerIou, LossId::kInnerCiou};

std::string_view LossName(LossId id);
// Accepts the names returned by LossName ("iou", "giou", "diou", "ciou",
// "inner-iou", "inner-ciou"); throws ValidationError otherwise.
LossId ParseLossId(std::string_view name);

InnerBox MakeInnerBox(const CenterBox& box, Ratio ratio);

// Overlap measures, all in [0, 1].
double Iou(const CenterBox& a, const CenterBox& b);
// IoU of the ratio-scaled auxiliary boxes. Per-axis overlap is clamped at 0.
double InnerIou(const CenterBox& pred, const CenterBox& gt, Ratio ratio);

// Aspect-consistency term v = 4/pi^2 (atan(w_gt/h_gt) - atan(w/h))^2.
double AspectTerm(const CenterBox& pred, const CenterBox& gt);
// Trade-off weight alpha = v / ((1 - IoU) + v); 0 when both parts vanish.
double CiouAlpha(const CenterBox& pred, const CenterBox& gt);

double IouLoss(const CenterBox& pred, const CenterBox& gt);
double GiouLoss(const CenterBox& pred, const CenterBox& gt);
double DiouLoss(const CenterBox& pred, const CenterBox& gt);
double CiouLoss(const CenterBox& pred, const CenterBox& gt);
double InnerIouLoss(const CenterBox& pred, const CenterBox& gt, Ratio ratio);
// CIoU + IoU - IoU_inner.
double InnerCiouLoss(const CenterBox& pred, const CenterBox& gt, Ratio ratio);

// The ratio is ignored by losses that do not use auxiliary boxes.
double Loss(LossId id, const CenterBox& pred, const CenterBox& gt, Ratio ratio);

// d loss / d (x_c, y_c, w, h) of the predicted box.
struct LossGradient {
  std::array<double, 4> d{};
  // False when pred sits on a kink (coincident edges or exactly touching
  // boxes). d then holds the symmetric subgradient: every tied min/max and
  // every zero-overlap clamp contributes the mean of its one-sided slopes.
  bool differentiable = true;
};

// Analytic gradient. For CIoU and Inner-CIoU the weight alpha is held
// constant at its current value.
LossGradient Gradient(LossId id, const CenterBox& pred, const CenterBox& gt,
                      Ratio ratio);

struct TrajectoryStep {
  int step = 0;
  CenterBox box;
  double iou = 0.0;
  double loss = 0.0;
  // Set when the update pushed w or h to <= 0 and it was clamped.
  bool clamped = false;
  // Set when the gradient at this step was a subgradient.
  bool on_kink = false;
};

inline constexpr double kMinBoxSide = 1e-6;

// Plain gradient descent on the chosen loss, starting from init; the
// returned trajectory holds steps + 1 entries (step 0 is init).
std::vector<TrajectoryStep> RegressBox(const CenterBox& init,
                                       const CenterBox& gt, LossId id,
                                       Ratio ratio, int steps,
                                       double learning_rate);

// First step whose IoU reaches the threshold, if any.
std::optional<int> StepsToIou(const std::vector<TrajectoryStep>& trajectory,
                              double threshold);

// Start configurations for regression experiments.
enum class IouBand {
  kLow,   // IoU(init, gt) < 0.2
  kHigh,  // 0.7 < IoU(init, gt) < 0.9
  kAny,
};

enum class StartFamily {
  kTranslated,  // init is gt moved by a random offset, same size
  kMixed,       // init is moved and resized
};

struct RegressionStart {
  CenterBox init;
  CenterBox gt;
};

// Deterministic in (seed, band, family): gt is centered at the origin with
// sides in [1, 3]; init is redrawn until its IoU with gt lies in the band.
RegressionStart SampleRegressionStart(
    uint64_t seed, IouBand band,
    StartFamily family = StartFamily::kTranslated);
IouBand ParseIouBand(std::string_view name);
StartFamily ParseStartFamily(std::string_view name);

}  // namespace losses
}  // namespace airinspect

#endif  // AIRINSPECT_LOSSES_H_
