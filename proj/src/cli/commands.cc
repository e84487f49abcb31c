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
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "airinspect/annotations.h"
#include "airinspect/arch.h"
#include "airinspect/camera_io.h"
#include "airinspect/cli.h"
#include "airinspect/common.h"
#include "airinspect/localization.h"
#include "airinspect/losses.h"
#include "airinspect/metrics.h"
#include "airinspect/point_cloud.h"
#include "airinspect/simulator.h"
#include "json.hpp"

namespace airinspect {
namespace cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Per-class colors for damaged points; class ids beyond the table wrap.
constexpr std::array<Rgb, 11> kPalette = {{
    {230, 25, 75},   {60, 180, 75},  {255, 225, 25}, {0, 130, 200},
    {245, 130, 48},  {145, 30, 180}, {70, 240, 240}, {240, 50, 230},
    {210, 245, 60},  {0, 128, 128},  {170, 110, 40},
}};
constexpr Rgb kGray = {128, 128, 128};

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Command name, inputs, options, version and duration, written next to the
// outputs of a run.
class RunManifest {
 public:
  explicit RunManifest(std::string command)
      : command_(std::move(command)),
        start_(std::chrono::steady_clock::now()) {}

  void AddInput(const std::string& path) { inputs_.push_back(path); }
  template <typename T>
  void SetOption(const std::string& name, const T& value) {
    options_[name] = value;
  }
  void AddOutput(const std::string& path) { outputs_.push_back(path); }

  void Write(const fs::path& path) const {
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
    json j = {{"command", command_},
              {"inputs", inputs_},
              {"options", options_},
              {"outputs", outputs_},
              {"version", std::string(kVersion)},
              {"duration_seconds", seconds}};
    WriteText(path, j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  json options_ = json::object();
};

// File outputs get "<file>.manifest.json", directory outputs
// "<dir>/manifest.json".
fs::path ManifestForFile(const fs::path& file) {
  return fs::path(file.string() + ".manifest.json");
}

annotations::ClassMap ClassMapForYoloDir(const fs::path& dir) {
  const fs::path classes = dir / "classes.txt";
  if (!fs::exists(classes)) return annotations::ClassMap::Airsd();
  annotations::ClassMap map;
  std::istringstream in(ReadText(classes));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (!line.empty()) map.names.push_back(line);
  }
  if (map.names.empty()) {
    throw ValidationError(classes.string() + ": no class names");
  }
  return map;
}

struct AnnotationSource {
  std::string path;
  std::string format;  // "", "yolo" or "coco"
  std::string size_index;
};

annotations::AnnotationSet LoadAnnotations(const AnnotationSource& src,
                                           RunManifest& manifest) {
  const fs::path path(src.path);
  manifest.AddInput(src.path);
  std::string format = src.format;
  if (format.empty()) format = fs::is_directory(path) ? "yolo" : "coco";
  if (annotations::ParseFormat(format) == annotations::Format::kCoco) {
    return annotations::ParseCoco(path);
  }
  if (!fs::is_directory(path)) {
    throw ValidationError(src.path + ": YOLO input must be a directory");
  }
  std::optional<fs::path> index;
  if (!src.size_index.empty()) {
    index = src.size_index;
  } else if (fs::exists(path / "index.csv")) {
    index = path / "index.csv";
  }
  if (index) manifest.AddInput(index->string());
  return annotations::ParseYolo(path, index, ClassMapForYoloDir(path));
}

localization::LocalizationOptions LocalizationFlags(
    const std::string& occlusion, double cell, double tolerance,
    const std::string& mode) {
  localization::LocalizationOptions o;
  o.occlusion_culling = occlusion == "on";
  o.zbuffer_cell = cell;
  o.depth_tolerance = tolerance;
  o.selection_mode = mode == "backprojected"
                         ? localization::SelectionMode::kBackprojected
                         : localization::SelectionMode::kOriginalPoints;
  o.Validate();
  return o;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ------------------------------------------------------------- localize

struct LocalizeArgs {
  std::string detections, camera, cloud, out_dir;
  std::string occlusion = "on";
  double zbuffer_cell = 1.0;
  double depth_tolerance = 0.01;
  std::string mode = "original-points";
  std::optional<int64_t> image_id;
};

int RunLocalize(const LocalizeArgs& a, std::ostream& out) {
  RunManifest manifest("localize");
  manifest.AddInput(a.detections);
  manifest.AddInput(a.camera);
  manifest.AddInput(a.cloud);
  manifest.SetOption("occlusion", a.occlusion);
  manifest.SetOption("zbuffer_cell", a.zbuffer_cell);
  manifest.SetOption("depth_tolerance", a.depth_tolerance);
  manifest.SetOption("mode", a.mode);
  if (a.image_id) manifest.SetOption("image_id", *a.image_id);

  const auto options =
      LocalizationFlags(a.occlusion, a.zbuffer_cell, a.depth_tolerance, a.mode);
  const auto camera = geometry::ReadCamera(a.camera);
  const PointCloud cloud = ReadPointCloud(a.cloud);
  const auto detections = metrics::ReadDetections(a.detections);

  json report = json::array();
  struct Paint {
    double confidence;
    int class_id;
    std::vector<std::size_t> indices;
  };
  std::vector<Paint> paint;
  std::size_t total_points = 0;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const auto& d = detections[i];
    if (a.image_id && d.image_id != *a.image_id) continue;
    auto result = localization::LocalizeDamage(
        d.box, camera.intrinsics, camera.pose, cloud, options, d.class_id);
    json entry = {{"detection_id", i},
                  {"class_id", d.class_id},
                  {"n_points", result.indices.size()},
                  {"centroid", nullptr},
                  {"aabb", nullptr},
                  {"indices", result.indices}};
    if (result.centroid) {
      const auto& c = *result.centroid;
      entry["centroid"] = {c.x(), c.y(), c.z()};
      const auto& b = *result.aabb;
      entry["aabb"] = {b.min.x(), b.min.y(), b.min.z(),
                       b.max.x(), b.max.y(), b.max.z()};
    }
    report.push_back(entry);
    total_points += result.indices.size();
    paint.push_back({d.confidence, d.class_id, std::move(result.indices)});
  }
  // Ascending confidence so stronger detections are painted last.
  std::stable_sort(paint.begin(), paint.end(),
                   [](const Paint& x, const Paint& y) {
                     return x.confidence < y.confidence;
                   });
  std::vector<Rgb> colors(cloud.size(), kGray);
  for (const Paint& p : paint) {
    const Rgb color =
        kPalette[static_cast<std::size_t>(p.class_id) % kPalette.size()];
    for (std::size_t idx : p.indices) colors[idx] = color;
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  WriteText(dir / "report.json", report.dump(2) + "\n");
  PlyWriteOptions ply;
  ply.write_labels = cloud.labels.has_value();
  ply.colors = &colors;
  WritePly(dir / "colored.ply", cloud, ply);
  manifest.AddOutput((dir / "report.json").string());
  manifest.AddOutput((dir / "colored.ply").string());
  manifest.Write(dir / "manifest.json");
  out << "localized " << report.size() << " detections, " << total_points
      << " points -> " << (dir / "report.json").string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string detections;
  AnnotationSource annotations;
  double iou_threshold = 0.5;
  std::string out;
};

int RunEval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest manifest("eval");
  manifest.AddInput(a.detections);
  manifest.SetOption("iou_threshold", a.iou_threshold);
  const auto set = LoadAnnotations(a.annotations, manifest);
  const auto detections = metrics::ReadDetections(a.detections);
  const int num_classes = set.class_map.size();
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].class_id >= num_classes) {
      throw ValidationError(a.detections + ": detection " + std::to_string(i) +
                            ": class_id " +
                            std::to_string(detections[i].class_id) +
                            " outside the " + std::to_string(num_classes) +
                            "-class map");
    }
    if (!set.FindImage(detections[i].image_id)) {
      err << "warning: detection " << i << " refers to image "
          << detections[i].image_id << " with no annotations entry\n";
    }
  }
  const auto report = metrics::Evaluate(detections, set.annotations,
                                        a.iou_threshold, num_classes);
  out << metrics::MarkdownTable(report, set.class_map.names);
  if (!a.out.empty()) {
    WriteText(a.out, metrics::ReportToJson(report, set.class_map.names));
    manifest.AddOutput(a.out);
    manifest.Write(ManifestForFile(a.out));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- params

struct ParamsArgs {
  std::string builtin;
  std::string spec;
  std::string out;
};

int RunParams(const ParamsArgs& a, std::ostream& out) {
  RunManifest manifest("params");
  std::string table;
  if (!a.spec.empty()) {
    manifest.AddInput(a.spec);
    table = arch::MarkdownTable(arch::Summarize(arch::ReadBackboneSpec(a.spec)));
  } else if (!a.builtin.empty()) {
    manifest.SetOption("builtin", a.builtin);
    table = arch::MarkdownTable(
        arch::Summarize(arch::BuiltinBackbone(a.builtin)));
  } else {
    table = arch::ComparisonTable(arch::Summarize(arch::Yolov8nBackbone()),
                                  arch::Summarize(arch::AirYoloBackbone()));
  }
  out << table;
  if (!a.out.empty()) {
    WriteText(a.out, table);
    manifest.AddOutput(a.out);
    manifest.Write(ManifestForFile(a.out));
  }
  return kExitOk;
}

// ------------------------------------------------------------ loss-bench

struct LossBenchArgs {
  std::vector<std::string> losses;
  std::vector<double> ratios = {0.75, 1.0, 1.25};
  uint64_t seed = 0;
  int count = 100;
  std::string band = "low";
  std::string family = "translated";
  int steps = 500;
  double lr = 0.05;
  std::string out;
};

int RunLossBench(const LossBenchArgs& a, std::ostream& out) {
  RunManifest manifest("loss-bench");
  std::vector<losses::LossId> ids;
  if (a.losses.empty()) {
    ids.assign(losses::kAllLosses.begin(), losses::kAllLosses.end());
  } else {
    for (const auto& name : a.losses) ids.push_back(losses::ParseLossId(name));
  }
  std::vector<losses::Ratio> ratios;
  for (double r : a.ratios) ratios.emplace_back(r);
  if (a.count < 1) throw ValidationError("--count must be >= 1");
  if (a.steps < 1) throw ValidationError("--steps must be >= 1");
  const auto band = losses::ParseIouBand(a.band);
  const auto family = losses::ParseStartFamily(a.family);
  manifest.SetOption("seed", a.seed);
  manifest.SetOption("count", a.count);
  manifest.SetOption("band", a.band);
  manifest.SetOption("family", a.family);
  manifest.SetOption("steps", a.steps);
  manifest.SetOption("lr", a.lr);
  manifest.SetOption("ratios", a.ratios);

  struct Job {
    losses::LossId id;
    std::size_t ratio;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto id : ids) {
    for (std::size_t r = 0; r < ratios.size(); ++r) {
      for (int i = 0; i < a.count; ++i) {
        jobs.push_back({id, r, a.seed + static_cast<uint64_t>(i)});
      }
    }
  }
  std::vector<std::string> rows(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const Job& job = jobs[j];
      const auto start = losses::SampleRegressionStart(job.seed, band, family);
      const auto traj =
          losses::RegressBox(start.init, start.gt, job.id,
                             ratios[job.ratio], a.steps, a.lr);
      const auto reached = losses::StepsToIou(traj, 0.9);
      std::string row = std::string(losses::LossName(job.id)) + "," +
                        FormatDouble(a.ratios[job.ratio]) + "," +
                        std::to_string(job.seed) + "," +
                        FormatDouble(traj.front().iou) + "," +
                        (reached ? std::to_string(*reached) : "NA") + "," +
                        FormatDouble(traj.back().iou) + "," +
                        FormatDouble(traj.back().loss) + "\n";
      rows[j] = std::move(row);
    }
  });
  std::string csv =
      "loss_id,ratio,seed,init_iou,steps_to_0.9,final_iou,final_loss\n";
  for (const auto& r : rows) csv += r;
  if (a.out.empty()) {
    out << csv;
  } else {
    WriteText(a.out, csv);
    manifest.AddOutput(a.out);
    manifest.Write(ManifestForFile(a.out));
    out << "wrote " << rows.size() << " rows to " << a.out << "\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------- dataset

struct DatasetArgs {
  AnnotationSource input;
  std::string format;
  std::string output;
};

int RunDatasetConvert(const DatasetArgs& a, std::ostream& out) {
  RunManifest manifest("dataset convert");
  manifest.SetOption("format", a.format);
  const auto set = LoadAnnotations(a.input, manifest);
  const auto target = annotations::ParseFormat(a.format);
  annotations::Convert(set, target, a.output);
  manifest.AddOutput(a.output);
  manifest.Write(target == annotations::Format::kYolo
                     ? fs::path(a.output) / "manifest.json"
                     : ManifestForFile(a.output));
  out << "converted " << set.images.size() << " images, "
      << set.annotations.size() << " annotations -> " << a.output << "\n";
  return kExitOk;
}

int RunDatasetStats(const DatasetArgs& a, std::ostream& out) {
  RunManifest manifest("dataset stats");
  const auto set = LoadAnnotations(a.input, manifest);
  const std::string text =
      annotations::StatsToJson(annotations::ComputeStats(set), set.class_map);
  out << text;
  if (!a.output.empty()) {
    WriteText(a.output, text);
    manifest.AddOutput(a.output);
    manifest.Write(ManifestForFile(a.output));
  }
  return kExitOk;
}

// -------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out_dir;
};

int RunSimulate(const SimulateArgs& a, std::ostream& out) {
  RunManifest manifest("simulate");
  sim::SimulationConfig config;
  if (a.config.empty()) {
    config = sim::DefaultSimulationConfig();
  } else {
    manifest.AddInput(a.config);
    config = sim::ParseSimulationConfig(ReadText(a.config));
  }
  if (a.seed) config.scene.seed = *a.seed;
  manifest.SetOption("seed", config.scene.seed);
  const sim::SceneSpec spec = sim::ResolvedSceneSpec(config);
  const sim::Scene scene = sim::GenerateScene(spec);
  const auto cameras =
      sim::GenerateCameraRing(config.rig, spec.cylinder_radius);
  const auto class_map = annotations::ClassMap::Airsd();
  const auto truth = sim::GroundTruthAnnotations(
      scene, cameras, config.rig, config.visibility, class_map);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  WritePly(dir / "scene.ply", scene.cloud);
  manifest.AddOutput((dir / "scene.ply").string());
  for (std::size_t c = 0; c < cameras.size(); ++c) {
    const fs::path p = dir / ("camera_" + std::to_string(c) + ".json");
    geometry::WriteCamera(p, cameras[c]);
    manifest.AddOutput(p.string());
  }
  annotations::WriteCoco(dir / "ground_truth.json", truth);
  manifest.AddOutput((dir / "ground_truth.json").string());
  // Ground-truth boxes as confidence-1 detections: a ready-made input for
  // localize and eval.
  std::vector<DetectionRecord> dets;
  for (const auto& g : truth.annotations) {
    dets.push_back({g.image_id, g.class_id, g.box, 1.0});
  }
  WriteText(dir / "detections.json", metrics::DetectionsToJson(dets));
  manifest.AddOutput((dir / "detections.json").string());
  manifest.Write(dir / "manifest.json");
  out << "simulated " << scene.cloud.size() << " points, "
      << spec.patches.size() << " patches, " << cameras.size() << " cameras, "
      << truth.annotations.size() << " visible boxes -> " << dir.string()
      << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Aircraft surface damage localization and evaluation tools",
               "airinspect"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  const std::vector<std::string> on_off = {"on", "off"};
  const std::vector<std::string> modes = {"original-points", "backprojected"};
  const std::vector<std::string> formats = {"yolo", "coco"};

  LocalizeArgs loc;
  auto* localize = app.add_subcommand(
      "localize", "Select the 3D points behind each 2D detection");
  localize->add_option("--detections", loc.detections, "Detections JSON")
      ->required();
  localize->add_option("--camera", loc.camera, "Camera JSON")->required();
  localize->add_option("--cloud", loc.cloud, "Point cloud (.ply or .xyz)")
      ->required();
  localize->add_option("--out-dir", loc.out_dir, "Output directory")
      ->required();
  localize->add_option("--occlusion", loc.occlusion, "Z-buffer culling")
      ->check(CLI::IsMember(on_off))
      ->capture_default_str();
  localize->add_option("--zbuffer-cell", loc.zbuffer_cell, "Cell size, px")
      ->capture_default_str();
  localize->add_option("--depth-tolerance", loc.depth_tolerance,
                       "Relative depth slack")
      ->capture_default_str();
  localize->add_option("--mode", loc.mode, "Coordinates to report")
      ->check(CLI::IsMember(modes))
      ->capture_default_str();
  localize->add_option("--image-id", loc.image_id,
                       "Only use detections of this image");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Precision, recall, F1 and mAP");
  eval->add_option("--detections", ev.detections, "Detections JSON")
      ->required();
  eval->add_option("--annotations", ev.annotations.path,
                   "COCO file or YOLO label directory")
      ->required();
  eval->add_option("--format", ev.annotations.format, "Annotation format")
      ->check(CLI::IsMember(formats));
  eval->add_option("--size-index", ev.annotations.size_index,
                   "CSV file,width,height for YOLO input");
  eval->add_option("--iou-threshold", ev.iou_threshold, "Match threshold")
      ->capture_default_str();
  eval->add_option("--out", ev.out, "Write the report as JSON");

  ParamsArgs pa;
  auto* params =
      app.add_subcommand("params", "Backbone parameter counts per layer");
  auto* builtin_opt =
      params->add_option("--builtin", pa.builtin, "Built-in backbone")
          ->check(CLI::IsMember({"yolov8n", "air-yolo"}));
  params->add_option("--spec", pa.spec, "Backbone spec file")
      ->excludes(builtin_opt);
  params->add_option("--out", pa.out, "Also write the table here");

  LossBenchArgs lb;
  auto* bench = app.add_subcommand(
      "loss-bench", "Gradient-descent box regression for each loss");
  bench->add_option("--loss", lb.losses, "Losses to run (default: all)");
  bench->add_option("--ratio", lb.ratios, "Auxiliary box ratios")
      ->capture_default_str();
  bench->add_option("--seed", lb.seed, "First seed")->capture_default_str();
  bench->add_option("--count", lb.count, "Starts per loss and ratio")
      ->capture_default_str();
  bench->add_option("--band", lb.band, "Initial IoU band")
      ->check(CLI::IsMember({"low", "high", "any"}))
      ->capture_default_str();
  bench->add_option("--family", lb.family, "Start family")
      ->check(CLI::IsMember({"translated", "mixed"}))
      ->capture_default_str();
  bench->add_option("--steps", lb.steps, "Descent steps")
      ->capture_default_str();
  bench->add_option("--lr", lb.lr, "Learning rate")->capture_default_str();
  bench->add_option("--out", lb.out, "CSV output (default: stdout)");

  DatasetArgs ds;
  auto* dataset = app.add_subcommand("dataset", "Annotation utilities");
  dataset->require_subcommand(1);
  auto* convert = dataset->add_subcommand("convert", "Convert YOLO <-> COCO");
  convert->add_option("--input", ds.input.path, "COCO file or YOLO directory")
      ->required();
  convert->add_option("--input-format", ds.input.format, "Input format")
      ->check(CLI::IsMember(formats));
  convert->add_option("--size-index", ds.input.size_index,
                      "CSV file,width,height for YOLO input");
  convert->add_option("--format", ds.format, "Target format")
      ->required()
      ->check(CLI::IsMember(formats));
  convert->add_option("--output", ds.output, "COCO file or YOLO directory")
      ->required();
  auto* stats = dataset->add_subcommand("stats", "Dataset statistics (JSON)");
  stats->add_option("--input", ds.input.path, "COCO file or YOLO directory")
      ->required();
  stats->add_option("--input-format", ds.input.format, "Input format")
      ->check(CLI::IsMember(formats));
  stats->add_option("--size-index", ds.input.size_index,
                    "CSV file,width,height for YOLO input");
  stats->add_option("--out", ds.output, "Also write the JSON here");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand(
      "simulate", "Synthetic fuselage scene with cameras and ground truth");
  simulate->add_option("--config", sa.config, "Scene JSON");
  simulate->add_option("--seed", sa.seed, "Overrides the config seed");
  simulate->add_option("--out-dir", sa.out_dir, "Output directory")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  WarningHandler previous = SetWarningHandler(
      [&err](std::string_view m) { err << "warning: " << m << "\n"; });
  int code = kExitOk;
  try {
    if (localize->parsed()) {
      code = RunLocalize(loc, out);
    } else if (eval->parsed()) {
      code = RunEval(ev, out, err);
    } else if (params->parsed()) {
      code = RunParams(pa, out);
    } else if (bench->parsed()) {
      code = RunLossBench(lb, out);
    } else if (convert->parsed()) {
      code = RunDatasetConvert(ds, out);
    } else if (stats->parsed()) {
      code = RunDatasetStats(ds, out);
    } else if (simulate->parsed()) {
      code = RunSimulate(sa, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitValidation;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    code = kExitInternal;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    code = kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    code = kExitInternal;
  }
  SetWarningHandler(previous);
  return code;
}

}  // namespace cli
}  // namespace airinspect
