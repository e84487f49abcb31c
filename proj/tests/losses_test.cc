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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.h"
#include "test_util.h"

namespace airinspect {
namespace losses {
namespace {

const CenterBox kA{0, 0, 2, 2};
const CenterBox kShifted{1, 0, 2, 2};
const CenterBox kAdjacent{2, 0, 2, 2};

TEST(IouTest, Examples) {
  EXPECT_DOUBLE_EQ(Iou(kA, kA), 1.0);
  EXPECT_EQ(Iou({0, 0, 1, 1}, {10, 0, 1, 1}), 0.0);
  EXPECT_NEAR(Iou(kA, kShifted), 1.0 / 3.0, 1e-15);
}

TEST(IouTest, MatchesCornerOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5000; ++i) {
    CenterBox a = testing_util::RandomCenterBox(rng);
    CenterBox b = testing_util::NearbyBox(rng, a);
    auto corner = [](const CenterBox& c) {
      return BBox2D{c.x - c.w / 2, c.y - c.h / 2, c.x + c.w / 2, c.y + c.h / 2};
    };
    EXPECT_NEAR(Iou(a, b), oracle::CornerIou(corner(a), corner(b)), 1e-12);
  }
}

TEST(InnerIouTest, Examples) {
  EXPECT_DOUBLE_EQ(InnerIou(kA, kA, Ratio(0.7)), 1.0);
  EXPECT_EQ(InnerIou(kShifted, kA, Ratio(0.5)), 0.0);
  EXPECT_NEAR(InnerIou(kShifted, kA, Ratio(1.0)), 1.0 / 3.0, 1e-15);
  InnerBox ib = MakeInnerBox({1, 2, 4, 6}, Ratio(0.5));
  EXPECT_EQ(ib.left, 0.0);
  EXPECT_EQ(ib.right, 2.0);
  EXPECT_EQ(ib.top, 0.5);
  EXPECT_EQ(ib.bottom, 3.5);
}

TEST(InnerIouTest, RatioOneReducesToIou) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20000; ++i) {
    CenterBox a = testing_util::RandomCenterBox(rng);
    CenterBox b = i % 2 ? testing_util::NearbyBox(rng, a)
                        : testing_util::RandomCenterBox(rng);
    ASSERT_NEAR(InnerIou(a, b, Ratio(1.0)), Iou(a, b), 1e-12);
    ASSERT_NEAR(InnerCiouLoss(a, b, Ratio(1.0)), CiouLoss(a, b), 1e-12);
  }
}

TEST(InnerIouTest, BoundedAndSymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.3, 2.0);
  testing_util::WarningCapture quiet;
  for (int i = 0; i < 20000; ++i) {
    CenterBox a = testing_util::RandomCenterBox(rng);
    CenterBox b = testing_util::NearbyBox(rng, a);
    Ratio ratio(r(rng));
    double v = InnerIou(a, b, ratio);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_NEAR(v, InnerIou(b, a, ratio), 1e-12);
    ASSERT_NEAR(Iou(a, b), Iou(b, a), 1e-15);
  }
}

TEST(RatioTest, ValidationAndWarnings) {
  EXPECT_THROW(Ratio(0.0), ValidationError);
  EXPECT_THROW(Ratio(-1.0), ValidationError);
  EXPECT_THROW(Ratio(std::nan("")), ValidationError);
  testing_util::WarningCapture capture;
  Ratio(0.5);
  Ratio(1.5);
  EXPECT_TRUE(capture.messages().empty());
  Ratio(0.49);
  Ratio(2.0);
  EXPECT_EQ(capture.messages().size(), 2u);
}

TEST(CiouTest, Examples) {
  EXPECT_EQ(CiouLoss(kA, kA), 0.0);
  EXPECT_NEAR(CiouLoss(kA, kAdjacent), 1.2, 1e-15);
  const double v = 4.0 / (std::numbers::pi * std::numbers::pi) *
                   std::pow(std::atan(2.0) - std::atan(0.5), 2);
  EXPECT_NEAR(v, 0.167826, 1e-6);
  EXPECT_NEAR(AspectTerm({0, 0, 1, 2}, {0, 0, 2, 1}), v, 1e-15);
  // Concentric 1x2 and 2x1: IoU = 1/3, rho = 0.
  const double iou = 1.0 / 3.0;
  const double alpha = v / ((1 - iou) + v);
  EXPECT_NEAR(CiouAlpha({0, 0, 1, 2}, {0, 0, 2, 1}), alpha, 1e-15);
  EXPECT_NEAR(CiouLoss({0, 0, 1, 2}, {0, 0, 2, 1}), 1 - iou + alpha * v,
              1e-15);
}

TEST(CiouTest, AlphaZeroWhenBothPartsVanish) {
  EXPECT_EQ(CiouAlpha(kA, kA), 0.0);
}

TEST(GiouDiouTest, Examples) {
  EXPECT_EQ(GiouLoss(kA, kA), 0.0);
  EXPECT_EQ(DiouLoss(kA, kA), 0.0);
  EXPECT_NEAR(DiouLoss(kA, kAdjacent), 1.2, 1e-15);
  EXPECT_NEAR(GiouLoss(kA, kAdjacent), 1.0, 1e-15);
  // Disjoint with a gap: C = 6x2 = 12, union 8.
  EXPECT_NEAR(GiouLoss(kA, {4, 0, 2, 2}), 1.0 + 4.0 / 12.0, 1e-15);
  EXPECT_NEAR(IouLoss(kA, kShifted), 2.0 / 3.0, 1e-15);
}

TEST(InnerCiouTest, Examples) {
  EXPECT_EQ(InnerCiouLoss(kA, kA, Ratio(1.0)), 0.0);
  EXPECT_EQ(InnerCiouLoss(kShifted, kA, Ratio(1.0)), CiouLoss(kShifted, kA));
  EXPECT_NEAR(InnerCiouLoss(kShifted, kA, Ratio(0.5)),
              CiouLoss(kShifted, kA) + 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(InnerIouLoss(kShifted, kA, Ratio(0.5)), 1.0, 1e-15);
}

TEST(LossTest, DispatchAndNames) {
  for (LossId id : kAllLosses) {
    EXPECT_EQ(ParseLossId(LossName(id)), id);
  }
  EXPECT_THROW(ParseLossId("eiou"), ValidationError);
  Ratio r(0.8);
  EXPECT_EQ(Loss(LossId::kIou, kShifted, kA, r), IouLoss(kShifted, kA));
  EXPECT_EQ(Loss(LossId::kGiou, kShifted, kA, r), GiouLoss(kShifted, kA));
  EXPECT_EQ(Loss(LossId::kDiou, kShifted, kA, r), DiouLoss(kShifted, kA));
  EXPECT_EQ(Loss(LossId::kCiou, kShifted, kA, r), CiouLoss(kShifted, kA));
  EXPECT_EQ(Loss(LossId::kInnerIou, kShifted, kA, r),
            InnerIouLoss(kShifted, kA, r));
  EXPECT_EQ(Loss(LossId::kInnerCiou, kShifted, kA, r),
            InnerCiouLoss(kShifted, kA, r));
  EXPECT_THROW(Loss(LossId::kIou, {0, 0, 0, 1}, kA, r), ValidationError);
  EXPECT_THROW(Gradient(LossId::kIou, kA, {0, 0, 1, -1}, r), ValidationError);
}

TEST(LossTest, ZeroOnlyForIdenticalBoxes) {
  for (LossId id : kAllLosses) {
    EXPECT_NEAR(Loss(id, kA, kA, Ratio(0.7)), 0.0, 1e-15) << LossName(id);
    EXPECT_GT(Loss(id, kShifted, kA, Ratio(1.0)), 0.0) << LossName(id);
  }
}

TEST(LossTest, TranslationInvariance) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> t(-3, 3), r(0.5, 1.5);
  for (int i = 0; i < 5000; ++i) {
    CenterBox a = testing_util::RandomCenterBox(rng);
    CenterBox b = testing_util::NearbyBox(rng, a);
    double dx = t(rng), dy = t(rng);
    CenterBox a2{a.x + dx, a.y + dy, a.w, a.h}, b2{b.x + dx, b.y + dy, b.w, b.h};
    Ratio ratio(r(rng));
    for (LossId id : kAllLosses) {
      ASSERT_NEAR(Loss(id, a, b, ratio), Loss(id, a2, b2, ratio), 1e-12)
          << LossName(id);
    }
  }
}

TEST(LossTest, ScaleInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s(0.01, 100), r(0.5, 1.5);
  for (int i = 0; i < 5000; ++i) {
    CenterBox a = testing_util::RandomCenterBox(rng);
    CenterBox b = testing_util::NearbyBox(rng, a);
    double k = s(rng);
    CenterBox a2{a.x * k, a.y * k, a.w * k, a.h * k};
    CenterBox b2{b.x * k, b.y * k, b.w * k, b.h * k};
    Ratio ratio(r(rng));
    ASSERT_NEAR(Iou(a, b), Iou(a2, b2), 1e-9);
    ASSERT_NEAR(InnerIou(a, b, ratio), InnerIou(a2, b2, ratio), 1e-9);
    ASSERT_NEAR(GiouLoss(a, b), GiouLoss(a2, b2), 1e-9);
    ASSERT_NEAR(DiouLoss(a, b), DiouLoss(a2, b2), 1e-9);
    ASSERT_NEAR(CiouLoss(a, b), CiouLoss(a2, b2), 1e-9);
  }
}

TEST(GradientTest, CenterPulledTowardGroundTruth) {
  LossGradient g = Gradient(LossId::kCiou, kA, kAdjacent, Ratio(1.0));
  EXPECT_LT(g.d[0], 0.0);
  EXPECT_FALSE(g.differentiable);  // boxes touch exactly
  // Same sign slightly away from the kink.
  const CenterBox apart{2.1, 0.3, 2, 2.5};
  LossGradient g2 = Gradient(LossId::kCiou, kA, apart, Ratio(1.0));
  EXPECT_LT(g2.d[0], 0.0);
  EXPECT_TRUE(g2.differentiable);
  auto fd = oracle::FiniteDifferenceGradient(LossId::kCiou, kA, apart, Ratio(1.0));
  EXPECT_LT(fd[0], 0.0);
}

TEST(GradientTest, ZeroCenterGradientAtOptimum) {
  for (LossId id : kAllLosses) {
    LossGradient g = Gradient(id, {1, -2, 3, 1.5}, {1, -2, 3, 1.5}, Ratio(0.8));
    EXPECT_FALSE(g.differentiable) << LossName(id);
    EXPECT_NEAR(g.d[0], 0.0, 1e-15) << LossName(id);
    EXPECT_NEAR(g.d[1], 0.0, 1e-15) << LossName(id);
  }
}

TEST(GradientTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> r(0.5, 1.5);
  int checked = 0;
  while (checked < 3000) {
    CenterBox gt = testing_util::RandomCenterBox(rng);
    CenterBox pred = checked % 3 == 0 ? testing_util::RandomCenterBox(rng)
                                      : testing_util::NearbyBox(rng, gt);
    double ratio = r(rng);
    double scale = std::max({pred.w, pred.h, gt.w, gt.h});
    if (!oracle::FarFromKinks(pred, gt, ratio, 1e-3 * scale)) continue;
    LossId id = kAllLosses[checked % kAllLosses.size()];
    LossGradient g = Gradient(id, pred, gt, Ratio(ratio));
    ASSERT_TRUE(g.differentiable);
    auto fd = oracle::FiniteDifferenceGradient(id, pred, gt, Ratio(ratio));
    for (int k = 0; k < 4; ++k) {
      ASSERT_LE(oracle::RelativeError(g.d[k], fd[k]), 1e-4)
          << LossName(id) << " component " << k << " analytic " << g.d[k]
          << " numeric " << fd[k];
    }
    ++checked;
  }
}

TEST(RegressBoxTest, ConstantFromGroundTruth) {
  for (LossId id : kAllLosses) {
    auto traj = RegressBox(kA, kA, id, Ratio(1.0), 20, 0.05);
    ASSERT_EQ(traj.size(), 21u);
    for (const auto& s : traj) {
      EXPECT_EQ(s.box, kA) << LossName(id);
      EXPECT_NEAR(s.loss, 0.0, 1e-15);
      EXPECT_DOUBLE_EQ(s.iou, 1.0);
    }
  }
}

TEST(RegressBoxTest, CiouConvergesFromAdjacentStart) {
  auto traj = RegressBox(kA, kAdjacent, LossId::kCiou, Ratio(1.0), 200, 0.05);
  ASSERT_EQ(traj.size(), 201u);
  EXPECT_EQ(traj[0].step, 0);
  EXPECT_EQ(traj.back().step, 200);
  EXPECT_GE(traj.back().iou, 0.9);
  EXPECT_LT(traj.back().loss, traj.front().loss);
  ASSERT_TRUE(StepsToIou(traj, 0.9).has_value());
  EXPECT_GE(traj[*StepsToIou(traj, 0.9)].iou, 0.9);
}

TEST(RegressBoxTest, DeterministicAndValidated) {
  auto a = RegressBox({0.3, 0.1, 1, 3}, kA, LossId::kInnerCiou, Ratio(1.25),
                      50, 0.05);
  auto b = RegressBox({0.3, 0.1, 1, 3}, kA, LossId::kInnerCiou, Ratio(1.25),
                      50, 0.05);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].box, b[i].box);
  EXPECT_THROW(RegressBox(kA, kA, LossId::kIou, Ratio(1), 10, 0.0),
               ValidationError);
  EXPECT_THROW(RegressBox(kA, kA, LossId::kIou, Ratio(1), -1, 0.1),
               ValidationError);
}

TEST(RegressBoxTest, ClampsCollapsingSides) {
  // A huge step drives the width negative.
  auto traj = RegressBox({0, 0, 8, 0.5}, {0, 0, 0.5, 0.5}, LossId::kIou,
                         Ratio(1.0), 3, 1000.0);
  bool clamped = false;
  for (const auto& s : traj) {
    EXPECT_GE(s.box.w, kMinBoxSide);
    EXPECT_GE(s.box.h, kMinBoxSide);
    clamped = clamped || s.clamped;
  }
  EXPECT_TRUE(clamped);
}

TEST(RegressBoxTest, StepsToIouNeverReached) {
  auto traj = RegressBox({0, 0, 1, 1}, {50, 0, 1, 1}, LossId::kIou, Ratio(1),
                         5, 0.05);
  EXPECT_FALSE(StepsToIou(traj, 0.9).has_value());
}

}  // namespace
}  // namespace losses
}  // namespace airinspect
