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
#include "airinspect/losses.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "airinspect/common.h"

namespace airinspect {
namespace losses {
namespace {

constexpr double kAspectScale = 4.0 / (std::numbers::pi * std::numbers::pi);

// A scalar together with its gradient w.r.t. the predicted (x, y, w, h).
struct Tracked {
  double v = 0.0;
  std::array<double, 4> d{};
};

Tracked Constant(double v) { return {v, {}}; }

Tracked operator+(const Tracked& a, const Tracked& b) {
  Tracked r{a.v + b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

Tracked operator-(const Tracked& a, const Tracked& b) {
  Tracked r{a.v - b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

Tracked operator*(const Tracked& a, const Tracked& b) {
  Tracked r{a.v * b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

Tracked operator*(double s, const Tracked& a) {
  Tracked r{s * a.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = s * a.d[i];
  return r;
}

Tracked operator/(const Tracked& a, const Tracked& b) {
  Tracked r{a.v / b.v, {}};
  const double b2 = b.v * b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / b2;
  return r;
}

Tracked Mean(const Tracked& a, const Tracked& b, double v) {
  Tracked r{v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = 0.5 * (a.d[i] + b.d[i]);
  return r;
}

// min/max/clamp with symmetric subgradients at ties; ties clear *smooth.
Tracked Min(const Tracked& a, const Tracked& b, bool* smooth) {
  if (a.v < b.v) return a;
  if (b.v < a.v) return b;
  *smooth = false;
  return Mean(a, b, a.v);
}

Tracked Max(const Tracked& a, const Tracked& b, bool* smooth) {
  if (a.v > b.v) return a;
  if (b.v > a.v) return b;
  *smooth = false;
  return Mean(a, b, a.v);
}

Tracked ClampAtZero(const Tracked& a, bool* smooth) {
  if (a.v > 0.0) return a;
  if (a.v < 0.0) return Constant(0.0);
  *smooth = false;
  Tracked r{0.0, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = 0.5 * a.d[i];
  return r;
}

struct TrackedEdges {
  Tracked left, right, top, bottom;
};

TrackedEdges PredEdges(const CenterBox& b, double ratio) {
  const double half = 0.5 * ratio;
  return {
      {b.x - half * b.w, {1.0, 0.0, -half, 0.0}},
      {b.x + half * b.w, {1.0, 0.0, half, 0.0}},
      {b.y - half * b.h, {0.0, 1.0, 0.0, -half}},
      {b.y + half * b.h, {0.0, 1.0, 0.0, half}},
  };
}

TrackedEdges GtEdges(const CenterBox& b, double ratio) {
  const double half = 0.5 * ratio;
  return {Constant(b.x - half * b.w), Constant(b.x + half * b.w),
          Constant(b.y - half * b.h), Constant(b.y + half * b.h)};
}

Tracked PredArea(const CenterBox& b) { return {b.w * b.h, {0.0, 0.0, b.h, b.w}}; }

struct TrackedOverlap {
  Tracked inter;
  Tracked uni;
  Tracked iou;
};

TrackedOverlap ScaledOverlap(const CenterBox& pred, const CenterBox& gt,
                             double ratio, bool* smooth) {
  const auto p = PredEdges(pred, ratio);
  const auto g = GtEdges(gt, ratio);
  Tracked ox = ClampAtZero(
      Min(p.right, g.right, smooth) - Max(p.left, g.left, smooth), smooth);
  Tracked oy = ClampAtZero(
      Min(p.bottom, g.bottom, smooth) - Max(p.top, g.top, smooth), smooth);
  TrackedOverlap o;
  o.inter = ox * oy;
  const double r2 = ratio * ratio;
  o.uni = r2 * (Constant(gt.w * gt.h) + PredArea(pred)) - o.inter;
  o.iou = o.inter / o.uni;
  return o;
}

struct TrackedEnclosure {
  Tracked area;      // |C|
  Tracked diag_sq;   // c^2
};

TrackedEnclosure Enclosure(const CenterBox& pred, const CenterBox& gt,
                           bool* smooth) {
  const auto p = PredEdges(pred, 1.0);
  const auto g = GtEdges(gt, 1.0);
  Tracked cw = Max(p.right, g.right, smooth) - Min(p.left, g.left, smooth);
  Tracked ch = Max(p.bottom, g.bottom, smooth) - Min(p.top, g.top, smooth);
  return {cw * ch, cw * cw + ch * ch};
}

Tracked CenterDistanceSq(const CenterBox& pred, const CenterBox& gt) {
  const double dx = pred.x - gt.x;
  const double dy = pred.y - gt.y;
  return {dx * dx + dy * dy, {2.0 * dx, 2.0 * dy, 0.0, 0.0}};
}

Tracked TrackedAspect(const CenterBox& pred, const CenterBox& gt) {
  const double delta = std::atan(gt.w / gt.h) - std::atan(pred.w / pred.h);
  const double denom = pred.w * pred.w + pred.h * pred.h;
  // d atan(w/h) = (h dw - w dh) / (w^2 + h^2)
  const double scale = -2.0 * kAspectScale * delta / denom;
  return {kAspectScale * delta * delta,
          {0.0, 0.0, scale * pred.h, -scale * pred.w}};
}

Tracked TrackedDiouPenalty(const CenterBox& pred, const CenterBox& gt,
                           bool* smooth) {
  return CenterDistanceSq(pred, gt) / Enclosure(pred, gt, smooth).diag_sq;
}

// CIoU with alpha frozen at its current value.
Tracked TrackedCiou(const CenterBox& pred, const CenterBox& gt, bool* smooth) {
  const auto o = ScaledOverlap(pred, gt, 1.0, smooth);
  const Tracked v = TrackedAspect(pred, gt);
  const double alpha = CiouAlpha(pred, gt);
  return Constant(1.0) - o.iou + TrackedDiouPenalty(pred, gt, smooth) +
         alpha * v;
}

double OverlapLength(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

struct Enclosing {
  double width;
  double height;
};

Enclosing EnclosingBox(const CenterBox& a, const CenterBox& b) {
  const double left = std::min(a.x - 0.5 * a.w, b.x - 0.5 * b.w);
  const double right = std::max(a.x + 0.5 * a.w, b.x + 0.5 * b.w);
  const double top = std::min(a.y - 0.5 * a.h, b.y - 0.5 * b.h);
  const double bottom = std::max(a.y + 0.5 * a.h, b.y + 0.5 * b.h);
  return {right - left, bottom - top};
}

double DiouPenalty(const CenterBox& pred, const CenterBox& gt) {
  const Enclosing c = EnclosingBox(pred, gt);
  const double dx = pred.x - gt.x;
  const double dy = pred.y - gt.y;
  return (dx * dx + dy * dy) / (c.width * c.width + c.height * c.height);
}

}  // namespace

void CenterBox::Validate() const {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) ||
      !std::isfinite(h) || !(w > 0.0) || !(h > 0.0)) {
    std::ostringstream os;
    os << "center box (" << x << ", " << y << ", " << w << ", " << h
       << "): width and height must be positive and finite";
    throw ValidationError(os.str());
  }
}

Ratio::Ratio(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "ratio must be positive, got " << value;
    throw ValidationError(os.str());
  }
  if (value < kTypicalMin || value > kTypicalMax) {
    std::ostringstream os;
    os << "ratio " << value << " is outside the usual range [" << kTypicalMin
       << ", " << kTypicalMax << "]";
    Warn(os.str());
  }
}

std::string_view LossName(LossId id) {
  switch (id) {
    case LossId::kIou: return "iou";
    case LossId::kGiou: return "giou";
    case LossId::kDiou: return "diou";
    case LossId::kCiou: return "ciou";
    case LossId::kInnerIou: return "inner-iou";
    case LossId::kInnerCiou: return "inner-ciou";
  }
  return "unknown";
}

LossId ParseLossId(std::string_view name) {
  for (LossId id : kAllLosses) {
    if (LossName(id) == name) return id;
  }
  throw ValidationError("unknown loss '" + std::string(name) +
                        "' (expected iou, giou, diou, ciou, inner-iou or "
                        "inner-ciou)");
}

InnerBox MakeInnerBox(const CenterBox& box, Ratio ratio) {
  const double hw = box.w * ratio.value() / 2.0;
  const double hh = box.h * ratio.value() / 2.0;
  return {box.x - hw, box.x + hw, box.y - hh, box.y + hh};
}

double Iou(const CenterBox& a, const CenterBox& b) {
  const double ix = OverlapLength(a.x - 0.5 * a.w, a.x + 0.5 * a.w,
                                  b.x - 0.5 * b.w, b.x + 0.5 * b.w);
  const double iy = OverlapLength(a.y - 0.5 * a.h, a.y + 0.5 * a.h,
                                  b.y - 0.5 * b.h, b.y + 0.5 * b.h);
  const double inter = ix * iy;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

double InnerIou(const CenterBox& pred, const CenterBox& gt, Ratio ratio) {
  const InnerBox g = MakeInnerBox(gt, ratio);
  const InnerBox p = MakeInnerBox(pred, ratio);
  const double inter = std::max(0.0, std::min(g.right, p.right) -
                                         std::max(g.left, p.left)) *
                       std::max(0.0, std::min(g.bottom, p.bottom) -
                                         std::max(g.top, p.top));
  const double r2 = ratio.value() * ratio.value();
  const double uni = (gt.w * gt.h) * r2 + (pred.w * pred.h) * r2 - inter;
  return inter / uni;
}

double AspectTerm(const CenterBox& pred, const CenterBox& gt) {
  const double delta = std::atan(gt.w / gt.h) - std::atan(pred.w / pred.h);
  return kAspectScale * delta * delta;
}

double CiouAlpha(const CenterBox& pred, const CenterBox& gt) {
  const double v = AspectTerm(pred, gt);
  const double denom = (1.0 - Iou(pred, gt)) + v;
  return denom > 0.0 ? v / denom : 0.0;
}

double IouLoss(const CenterBox& pred, const CenterBox& gt) {
  return 1.0 - Iou(pred, gt);
}

double GiouLoss(const CenterBox& pred, const CenterBox& gt) {
  const double ix = OverlapLength(pred.x - 0.5 * pred.w, pred.x + 0.5 * pred.w,
                                  gt.x - 0.5 * gt.w, gt.x + 0.5 * gt.w);
  const double iy = OverlapLength(pred.y - 0.5 * pred.h, pred.y + 0.5 * pred.h,
                                  gt.y - 0.5 * gt.h, gt.y + 0.5 * gt.h);
  const double inter = ix * iy;
  const double uni = pred.w * pred.h + gt.w * gt.h - inter;
  const Enclosing c = EnclosingBox(pred, gt);
  const double c_area = c.width * c.height;
  return 1.0 - inter / uni + (c_area - uni) / c_area;
}

double DiouLoss(const CenterBox& pred, const CenterBox& gt) {
  return 1.0 - Iou(pred, gt) + DiouPenalty(pred, gt);
}

double CiouLoss(const CenterBox& pred, const CenterBox& gt) {
  return DiouLoss(pred, gt) + CiouAlpha(pred, gt) * AspectTerm(pred, gt);
}

double InnerIouLoss(const CenterBox& pred, const CenterBox& gt, Ratio ratio) {
  return 1.0 - InnerIou(pred, gt, ratio);
}

double InnerCiouLoss(const CenterBox& pred, const CenterBox& gt, Ratio ratio) {
  return CiouLoss(pred, gt) + Iou(pred, gt) - InnerIou(pred, gt, ratio);
}

double Loss(LossId id, const CenterBox& pred, const CenterBox& gt,
            Ratio ratio) {
  pred.Validate();
  gt.Validate();
  switch (id) {
    case LossId::kIou: return IouLoss(pred, gt);
    case LossId::kGiou: return GiouLoss(pred, gt);
    case LossId::kDiou: return DiouLoss(pred, gt);
    case LossId::kCiou: return CiouLoss(pred, gt);
    case LossId::kInnerIou: return InnerIouLoss(pred, gt, ratio);
    case LossId::kInnerCiou: return InnerCiouLoss(pred, gt, ratio);
  }
  throw InvariantError("Loss: unhandled loss id");
}

LossGradient Gradient(LossId id, const CenterBox& pred, const CenterBox& gt,
                      Ratio ratio) {
  pred.Validate();
  gt.Validate();
  bool smooth = true;
  Tracked loss;
  switch (id) {
    case LossId::kIou:
      loss = Constant(1.0) - ScaledOverlap(pred, gt, 1.0, &smooth).iou;
      break;
    case LossId::kGiou: {
      const auto o = ScaledOverlap(pred, gt, 1.0, &smooth);
      const auto c = Enclosure(pred, gt, &smooth);
      loss = Constant(2.0) - o.iou - o.uni / c.area;
      break;
    }
    case LossId::kDiou:
      loss = Constant(1.0) - ScaledOverlap(pred, gt, 1.0, &smooth).iou +
             TrackedDiouPenalty(pred, gt, &smooth);
      break;
    case LossId::kCiou:
      loss = TrackedCiou(pred, gt, &smooth);
      break;
    case LossId::kInnerIou:
      loss = Constant(1.0) -
             ScaledOverlap(pred, gt, ratio.value(), &smooth).iou;
      break;
    case LossId::kInnerCiou:
      loss = TrackedCiou(pred, gt, &smooth) +
             ScaledOverlap(pred, gt, 1.0, &smooth).iou -
             ScaledOverlap(pred, gt, ratio.value(), &smooth).iou;
      break;
  }
  return {loss.d, smooth};
}

std::vector<TrajectoryStep> RegressBox(const CenterBox& init,
                                       const CenterBox& gt, LossId id,
                                       Ratio ratio, int steps,
                                       double learning_rate) {
  init.Validate();
  gt.Validate();
  if (!(learning_rate > 0.0)) {
    throw ValidationError("RegressBox: learning rate must be positive");
  }
  if (steps < 0) throw ValidationError("RegressBox: steps must be >= 0");
  std::vector<TrajectoryStep> trajectory;
  trajectory.reserve(static_cast<std::size_t>(steps) + 1);
  CenterBox box = init;
  bool clamped = false;
  for (int step = 0;; ++step) {
    TrajectoryStep entry;
    entry.step = step;
    entry.box = box;
    entry.iou = Iou(box, gt);
    entry.loss = Loss(id, box, gt, ratio);
    entry.clamped = clamped;
    if (step == steps) {
      trajectory.push_back(entry);
      break;
    }
    const LossGradient g = Gradient(id, box, gt, ratio);
    entry.on_kink = !g.differentiable;
    trajectory.push_back(entry);
    box.x -= learning_rate * g.d[0];
    box.y -= learning_rate * g.d[1];
    box.w -= learning_rate * g.d[2];
    box.h -= learning_rate * g.d[3];
    clamped = false;
    if (!(box.w > kMinBoxSide)) {
      box.w = kMinBoxSide;
      clamped = true;
    }
    if (!(box.h > kMinBoxSide)) {
      box.h = kMinBoxSide;
      clamped = true;
    }
  }
  return trajectory;
}

std::optional<int> StepsToIou(const std::vector<TrajectoryStep>& trajectory,
                              double threshold) {
  for (const auto& s : trajectory) {
    if (s.iou >= threshold) return s.step;
  }
  return std::nullopt;
}

namespace {

// SplitMix64 step; gives the same sequence on every platform.
uint64_t NextBits(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double NextUniform(uint64_t& state, double lo, double hi) {
  const double u = static_cast<double>(NextBits(state) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

bool InBand(double iou, IouBand band) {
  switch (band) {
    case IouBand::kLow: return iou < 0.2;
    case IouBand::kHigh: return iou > 0.7 && iou < 0.9;
    case IouBand::kAny: return true;
  }
  return false;
}

}  // namespace

RegressionStart SampleRegressionStart(uint64_t seed, IouBand band,
                                      StartFamily family) {
  uint64_t state = seed * 0x2545F4914F6CDD1DULL +
                   static_cast<uint64_t>(band) * 3 +
                   static_cast<uint64_t>(family);
  RegressionStart start;
  start.gt = {0.0, 0.0, NextUniform(state, 1.0, 3.0),
              NextUniform(state, 1.0, 3.0)};
  const bool high = band == IouBand::kHigh;
  const double spread = high ? 0.2 : 1.5;
  const double resize = family == StartFamily::kMixed ? (high ? 0.25 : 0.5)
                                                      : 0.0;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    CenterBox init = start.gt;
    init.x += NextUniform(state, -spread, spread) * start.gt.w;
    init.y += NextUniform(state, -spread, spread) * start.gt.h;
    if (resize > 0.0) {
      init.w *= 1.0 + NextUniform(state, -resize, resize);
      init.h *= 1.0 + NextUniform(state, -resize, resize);
    }
    if (InBand(Iou(init, start.gt), band)) {
      start.init = init;
      return start;
    }
  }
  throw InvariantError("SampleRegressionStart: no start found in band");
}

IouBand ParseIouBand(std::string_view name) {
  if (name == "low") return IouBand::kLow;
  if (name == "high") return IouBand::kHigh;
  if (name == "any") return IouBand::kAny;
  throw ValidationError("unknown IoU band '" + std::string(name) +
                        "' (expected low, high or any)");
}

StartFamily ParseStartFamily(std::string_view name) {
  if (name == "translated") return StartFamily::kTranslated;
  if (name == "mixed") return StartFamily::kMixed;
  throw ValidationError("unknown start family '" + std::string(name) +
                        "' (expected translated or mixed)");
}

}  // namespace losses
}  // namespace airinspect
