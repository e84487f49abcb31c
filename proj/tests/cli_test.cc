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
#include "airinspect/cli.h"

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "airinspect/annotations.h"
#include "airinspect/point_cloud.h"
#include "airinspect/simulator.h"
#include "json.hpp"
#include "test_util.h"

namespace airinspect {
namespace cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing_util::ReadFile;
using testing_util::TempDir;
using testing_util::WriteFile;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

// Writes a small default scene into dir and returns its path.
fs::path Simulate(const TempDir& tmp, const std::string& name,
                  const std::string& seed = "4") {
  const fs::path dir = tmp / name;
  const Outcome o =
      Invoke({"simulate", "--seed", seed, "--out-dir", dir.string()});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  return dir;
}

TEST(CliTest, HelpExitsZero) {
  const Outcome o = Invoke({"--help"});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_NE(o.out.find("localize"), std::string::npos);
}

TEST(CliTest, UnknownFlagIsValidationError) {
  EXPECT_EQ(Invoke({"params", "--no-such-flag"}).code, kExitValidation);
  EXPECT_EQ(Invoke({}).code, kExitValidation);
}

TEST(CliTest, ParamsPrintsBothSums) {
  const Outcome o = Invoke({"params"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("1272656"), std::string::npos);
  EXPECT_NE(o.out.find("911456"), std::string::npos);
  EXPECT_NE(o.out.find("28.38%"), std::string::npos);
}

TEST(CliTest, ParamsBuiltinWritesFileAndManifest) {
  TempDir tmp("cli_params");
  const fs::path out = tmp / "table.md";
  const Outcome o =
      Invoke({"params", "--builtin", "air-yolo", "--out", out.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(ReadFile(out), o.out);
  const json manifest = json::parse(ReadFile(out.string() + ".manifest.json"));
  EXPECT_EQ(manifest["command"], "params");
  EXPECT_EQ(manifest["options"]["builtin"], "air-yolo");
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("duration_seconds"));
}

TEST(CliTest, ParamsRejectsMissingSpecFile) {
  TempDir tmp("cli_params_missing");
  const Outcome o =
      Invoke({"params", "--spec", (tmp / "absent.txt").string()});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_NE(o.err.find("absent.txt"), std::string::npos);
}

TEST(CliTest, LocalizeWithEmptyDetectionsSucceeds) {
  TempDir tmp("cli_empty");
  const fs::path scene = Simulate(tmp, "scene");
  WriteFile(tmp / "empty.json", "[]");
  const fs::path out = tmp / "loc";
  const Outcome o = Invoke({"localize", "--detections",
                            (tmp / "empty.json").string(), "--camera",
                            (scene / "camera_0.json").string(), "--cloud",
                            (scene / "scene.ply").string(), "--out-dir",
                            out.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(json::parse(ReadFile(out / "report.json")), json::array());
  EXPECT_TRUE(fs::exists(out / "colored.ply"));
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

TEST(CliTest, LocalizeRejectsMalformedCamera) {
  TempDir tmp("cli_badcam");
  const fs::path scene = Simulate(tmp, "scene");
  WriteFile(tmp / "cam.json", R"({"fx": 100, "fy": 100, "cx": 1})");
  const Outcome o = Invoke(
      {"localize", "--detections", (scene / "detections.json").string(),
       "--camera", (tmp / "cam.json").string(), "--cloud",
       (scene / "scene.ply").string(), "--out-dir", (tmp / "o").string()});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_NE(o.err.find("cam.json"), std::string::npos);
}

TEST(CliTest, LocalizeRejectsBadOptionValues) {
  TempDir tmp("cli_badopt");
  const fs::path scene = Simulate(tmp, "scene");
  const std::vector<std::string> base = {
      "localize",  "--detections", (scene / "detections.json").string(),
      "--camera",  (scene / "camera_0.json").string(),
      "--cloud",   (scene / "scene.ply").string(),
      "--out-dir", (tmp / "o").string()};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return Invoke(args).code;
  };
  EXPECT_EQ(with({"--zbuffer-cell", "0"}), kExitValidation);
  EXPECT_EQ(with({"--depth-tolerance", "-1"}), kExitValidation);
  EXPECT_EQ(with({"--occlusion", "maybe"}), kExitValidation);
  EXPECT_EQ(with({"--mode", "nearest"}), kExitValidation);
}

TEST(CliTest, LocalizeOnSimulatedSceneFindsPatchPoints) {
  TempDir tmp("cli_localize");
  const fs::path scene = Simulate(tmp, "scene");
  const json truth = json::parse(ReadFile(scene / "ground_truth.json"));
  const fs::path out = tmp / "loc";
  const Outcome o = Invoke(
      {"localize", "--detections", (scene / "detections.json").string(),
       "--camera", (scene / "camera_0.json").string(), "--cloud",
       (scene / "scene.ply").string(), "--out-dir", out.string(),
       "--image-id", "1", "--zbuffer-cell", "3", "--depth-tolerance",
       "0.002"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json report = json::parse(ReadFile(out / "report.json"));
  int expected = 0;
  for (const auto& a : truth["annotations"]) expected += a["image_id"] == 1;
  ASSERT_EQ(static_cast<int>(report.size()), expected);
  ASSERT_GT(expected, 0);

  const PointCloud cloud = ReadPointCloud(scene / "scene.ply");
  const PointCloud colored = ReadPointCloud(out / "colored.ply");
  ASSERT_EQ(colored.size(), cloud.size());
  ASSERT_TRUE(colored.labels.has_value());
  EXPECT_EQ(*colored.labels, *cloud.labels);
  for (const auto& entry : report) {
    std::map<int, int> label_counts;
    for (std::size_t idx : entry["indices"].get<std::vector<std::size_t>>()) {
      ++label_counts[(*cloud.labels)[idx]];
    }
    // The dominant label is a damage patch, not clean surface.
    int best_label = 0, best = 0;
    for (auto [label, count] : label_counts) {
      if (count > best) best = count, best_label = label;
    }
    EXPECT_GT(best_label, 0);
    EXPECT_EQ(entry["n_points"].get<int>(),
              static_cast<int>(entry["indices"].size()));
    // Camera 0 sits on the +x side; every kept point faces it.
    EXPECT_GT(entry["aabb"][0].get<double>(), 0.0);
  }
}

TEST(CliTest, EvalRejectsClassOutsideMap) {
  TempDir tmp("cli_evalclass");
  const fs::path scene = Simulate(tmp, "scene");
  WriteFile(tmp / "dets.json",
            R"([{"image_id": 1, "class_id": 11, "bbox": [0, 0, 5, 5],
                 "confidence": 0.5}])");
  const Outcome o = Invoke({"eval", "--detections",
                            (tmp / "dets.json").string(), "--annotations",
                            (scene / "ground_truth.json").string()});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_NE(o.err.find("class_id 11"), std::string::npos);
}

TEST(CliTest, EvalRejectsThresholdOutOfRange) {
  TempDir tmp("cli_evalthr");
  const fs::path scene = Simulate(tmp, "scene");
  const Outcome o = Invoke(
      {"eval", "--detections", (scene / "detections.json").string(),
       "--annotations", (scene / "ground_truth.json").string(),
       "--iou-threshold", "1.5"});
  EXPECT_EQ(o.code, kExitValidation);
}

TEST(CliTest, EvalOfGroundTruthIsPerfect) {
  TempDir tmp("cli_evalgt");
  const fs::path scene = Simulate(tmp, "scene");
  const fs::path out = tmp / "report.json";
  const Outcome o = Invoke(
      {"eval", "--detections", (scene / "detections.json").string(),
       "--annotations", (scene / "ground_truth.json").string(), "--out",
       out.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("| All |"), std::string::npos);
  const json report = json::parse(ReadFile(out));
  EXPECT_DOUBLE_EQ(report["overall"]["precision"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(report["overall"]["recall"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(report["overall"]["map"].get<double>(), 1.0);
  EXPECT_TRUE(fs::exists(out.string() + ".manifest.json"));
}

TEST(CliTest, SimulateIsByteIdenticalAcrossRuns) {
  TempDir tmp("cli_simdet");
  const fs::path a = Simulate(tmp, "a", "11");
  const fs::path b = Simulate(tmp, "b", "11");
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) {
    const std::string name = e.path().filename().string();
    if (name != "manifest.json") names.push_back(name);
  }
  ASSERT_GE(names.size(), 4u);
  for (const auto& name : names) {
    EXPECT_EQ(ReadFile(a / name), ReadFile(b / name)) << name;
  }
  EXPECT_NE(ReadFile(a / "scene.ply"),
            ReadFile(Simulate(tmp, "c", "12") / "scene.ply"));
}

TEST(CliTest, SimulateConfigFileAndValidation) {
  TempDir tmp("cli_simcfg");
  WriteFile(tmp / "cfg.json", R"({"seed": 2,
    "cylinder": {"radius": 1.5, "length": 3, "spacing": 0.05},
    "patches": [{"axial": 1.5, "azimuth_deg": 0, "radius": 0.3,
                 "class_id": 4}],
    "rig": {"count": 2},
    "visibility": {"zbuffer_cell": 6}})");
  const Outcome o = Invoke({"simulate", "--config",
                            (tmp / "cfg.json").string(), "--out-dir",
                            (tmp / "s").string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json truth = json::parse(ReadFile(tmp / "s" / "ground_truth.json"));
  EXPECT_EQ(truth["images"].size(), 2u);
  ASSERT_EQ(truth["annotations"].size(), 1u);
  EXPECT_EQ(truth["annotations"][0]["category_id"], 5);

  WriteFile(tmp / "bad.json", R"({"cylinder": {"radius": -1}})");
  EXPECT_EQ(Invoke({"simulate", "--config", (tmp / "bad.json").string(),
                    "--out-dir", (tmp / "t").string()})
                .code,
            kExitValidation);
}

std::vector<std::vector<std::string>> CsvRows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(CliTest, LossBenchInnerCiouMatchesCiouAtRatioOne) {
  const Outcome o = Invoke({"loss-bench", "--loss", "ciou", "inner-ciou",
                            "--ratio", "1", "--count", "6", "--steps", "200",
                            "--band", "any"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto rows = CsvRows(o.out);
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{
                         "loss_id", "ratio", "seed", "init_iou",
                         "steps_to_0.9", "final_iou", "final_loss"}));
  for (int i = 1; i <= 6; ++i) {
    const auto& c = rows[i];
    const auto& ic = rows[i + 6];
    ASSERT_EQ(c[0], "ciou");
    ASSERT_EQ(ic[0], "inner-ciou");
    EXPECT_EQ(c[2], ic[2]);
    EXPECT_EQ(c[3], ic[3]);
    EXPECT_EQ(c[4], ic[4]);
    EXPECT_NEAR(std::stod(c[5]), std::stod(ic[5]), 1e-12);
    EXPECT_NEAR(std::stod(c[6]), std::stod(ic[6]), 1e-12);
  }
}

TEST(CliTest, LossBenchCoversEveryCombination) {
  TempDir tmp("cli_bench");
  const fs::path out = tmp / "bench.csv";
  const Outcome o = Invoke({"loss-bench", "--count", "2", "--steps", "20",
                            "--out", out.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto rows = CsvRows(ReadFile(out));
  ASSERT_EQ(rows.size(), 1u + 6 * 3 * 2);
  std::map<std::pair<std::string, std::string>, int> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ++seen[{rows[i][0], rows[i][1]}];
    // Twenty steps from a low-IoU start never reach 0.9.
    EXPECT_EQ(rows[i][4], "NA");
  }
  EXPECT_EQ(seen.size(), 18u);
  EXPECT_TRUE(fs::exists(out.string() + ".manifest.json"));
}

TEST(CliTest, LossBenchRejectsBadArguments) {
  EXPECT_EQ(Invoke({"loss-bench", "--loss", "focal"}).code, kExitValidation);
  EXPECT_EQ(Invoke({"loss-bench", "--ratio", "0"}).code, kExitValidation);
  EXPECT_EQ(Invoke({"loss-bench", "--count", "0"}).code, kExitValidation);
}

TEST(CliTest, YoloCocoYoloRoundTrip) {
  TempDir tmp("cli_convert");
  const auto set = testing_util::ElevenClassFixture(5, 12);
  annotations::WriteYolo(tmp / "yolo", set);
  const fs::path coco = tmp / "out.json";
  Outcome o = Invoke({"dataset", "convert", "--input",
                      (tmp / "yolo").string(), "--format", "coco",
                      "--output", coco.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  o = Invoke({"dataset", "convert", "--input", coco.string(), "--format",
              "yolo", "--output", (tmp / "back").string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto back = annotations::ParseYolo(
      tmp / "back", tmp / "back" / "index.csv", set.class_map);
  EXPECT_LE(testing_util::MaxNormalizedDifference(set, back), 1e-6);
}

TEST(CliTest, DatasetStatsCountsClasses) {
  TempDir tmp("cli_stats");
  const auto set = testing_util::ElevenClassFixture(9, 20);
  annotations::WriteCoco(tmp / "set.json", set);
  const Outcome o =
      Invoke({"dataset", "stats", "--input", (tmp / "set.json").string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json stats = json::parse(o.out);
  int64_t total = 0;
  for (const auto& row : stats["per_class"]) total += row["count"].get<int64_t>();
  EXPECT_EQ(total, static_cast<int64_t>(set.annotations.size()));
}

TEST(CliTest, DatasetConvertReportsBadLabelLine) {
  TempDir tmp("cli_badlabel");
  WriteFile(tmp / "yolo" / "bad.txt", "0 0.5 0.5 0.2 0.2\n3 0.5 0.5 0.2\n");
  const Outcome o = Invoke({"dataset", "convert", "--input",
                            (tmp / "yolo").string(), "--format", "coco",
                            "--output", (tmp / "o.json").string()});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_NE(o.err.find("bad.txt:2"), std::string::npos);
}

}  // namespace
}  // namespace cli
}  // namespace airinspect
