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
#include "airinspect/arch.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "airinspect/common.h"

namespace airinspect {
namespace arch {
namespace {

std::string LayerLabel(const LayerSpec& l) { return std::string(KindName(l.kind)); }

bool ParseInt64(const std::string& token, int64_t* out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::string_view KindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConvBlock: return "Conv";
    case LayerKind::kC2f: return "C2f";
    case LayerKind::kC2fFaster: return "C2f_Faster";
    case LayerKind::kSppf: return "SPPF";
  }
  return "?";
}

LayerSpec LayerSpec::Conv(int64_t c_in, int64_t c_out, int64_t k,
                          int64_t stride) {
  return {LayerKind::kConvBlock, c_in, c_out, k, stride, 1};
}
LayerSpec LayerSpec::C2f(int64_t c_in, int64_t c_out, int64_t n) {
  return {LayerKind::kC2f, c_in, c_out, 1, 1, n};
}
LayerSpec LayerSpec::C2fFaster(int64_t c_in, int64_t c_out, int64_t n) {
  return {LayerKind::kC2fFaster, c_in, c_out, 1, 1, n};
}
LayerSpec LayerSpec::Sppf(int64_t c_in, int64_t c_out) {
  return {LayerKind::kSppf, c_in, c_out, 1, 1, 1};
}

void LayerSpec::Validate() const {
  const std::string what = LayerLabel(*this) + "(" + std::to_string(c_in) +
                           ", " + std::to_string(c_out) + ")";
  if (c_in <= 0 || c_out <= 0) {
    throw ValidationError(what + ": channel counts must be positive");
  }
  switch (kind) {
    case LayerKind::kConvBlock:
      if (k <= 0 || stride <= 0) {
        throw ValidationError(what + ": kernel and stride must be positive");
      }
      break;
    case LayerKind::kC2fFaster:
      if (c_out % 8 != 0) {
        throw ValidationError(what + ": c_out must be divisible by 8");
      }
      [[fallthrough]];
    case LayerKind::kC2f:
      if (c_out % 2 != 0) throw ValidationError(what + ": c_out must be even");
      if (n <= 0) throw ValidationError(what + ": repeat count must be >= 1");
      break;
    case LayerKind::kSppf:
      if (c_in % 2 != 0) throw ValidationError(what + ": c_in must be even");
      break;
  }
}

void BackboneSpec::Validate() const {
  if (layers.empty()) throw ValidationError("backbone spec has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    try {
      layers[i].Validate();
    } catch (const ValidationError& e) {
      throw ValidationError("layer " + std::to_string(i) + ": " + e.what());
    }
    if (i > 0 && layers[i - 1].c_out != layers[i].c_in) {
      throw ValidationError("layer " + std::to_string(i) + ": c_in " +
                            std::to_string(layers[i].c_in) +
                            " does not match previous c_out " +
                            std::to_string(layers[i - 1].c_out));
    }
  }
}

int64_t ConvBlockParams(int64_t c_in, int64_t c_out, int64_t k) {
  return c_in * c_out * k * k + 2 * c_out;
}

int64_t BottleneckParams(int64_t c) { return 2 * ConvBlockParams(c, c, 3); }

int64_t FasterBlockParams(int64_t c) {
  const int64_t partial = c / 4;
  const int64_t pconv = partial * partial * 9;
  const int64_t expand = ConvBlockParams(c, 2 * c, 1);
  const int64_t project = 2 * c * c;
  return pconv + expand + project;
}

int64_t ParamCount(const LayerSpec& layer) {
  layer.Validate();
  switch (layer.kind) {
    case LayerKind::kConvBlock:
      return ConvBlockParams(layer.c_in, layer.c_out, layer.k);
    case LayerKind::kC2f:
    case LayerKind::kC2fFaster: {
      const int64_t c = layer.c_out / 2;
      const int64_t outer = ConvBlockParams(layer.c_in, 2 * c, 1) +
                            ConvBlockParams((2 + layer.n) * c, layer.c_out, 1);
      const int64_t block = layer.kind == LayerKind::kC2f
                                ? BottleneckParams(c)
                                : FasterBlockParams(c);
      return outer + layer.n * block;
    }
    case LayerKind::kSppf:
      return ConvBlockParams(layer.c_in, layer.c_in / 2, 1) +
             ConvBlockParams(2 * layer.c_in, layer.c_out, 1);
  }
  throw InvariantError("ParamCount: unhandled layer kind");
}

BackboneSummary Summarize(const BackboneSpec& spec) {
  spec.Validate();
  BackboneSummary s;
  s.name = spec.name;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    SummaryRow row{static_cast<int>(i), spec.layers[i],
                   ParamCount(spec.layers[i])};
    s.total += row.params;
    s.rows.push_back(row);
  }
  return s;
}

double ReductionRatio(const BackboneSummary& candidate,
                      const BackboneSummary& baseline) {
  if (baseline.total <= 0) throw ValidationError("baseline has no parameters");
  return 1.0 - static_cast<double>(candidate.total) /
                   static_cast<double>(baseline.total);
}

std::vector<Shape> ShapePropagate(const Shape& input, const BackboneSpec& spec) {
  spec.Validate();
  if (input.height <= 0 || input.width <= 0 || input.channels <= 0) {
    throw ValidationError("input shape must be positive");
  }
  if (input.channels != spec.layers.front().c_in) {
    throw ValidationError("input has " + std::to_string(input.channels) +
                          " channels, first layer expects " +
                          std::to_string(spec.layers.front().c_in));
  }
  int64_t total_stride = 1;
  for (const auto& l : spec.layers) {
    if (l.kind == LayerKind::kConvBlock) total_stride *= l.stride;
  }
  if (input.height % total_stride != 0 || input.width % total_stride != 0) {
    throw ValidationError("input " + std::to_string(input.height) + "x" +
                          std::to_string(input.width) +
                          " is not divisible by the total stride " +
                          std::to_string(total_stride));
  }
  std::vector<Shape> shapes;
  Shape cur = input;
  for (const auto& l : spec.layers) {
    if (l.kind == LayerKind::kConvBlock) {
      cur.height /= l.stride;
      cur.width /= l.stride;
    }
    cur.channels = l.c_out;
    shapes.push_back(cur);
  }
  return shapes;
}

BackboneSpec Yolov8nBackbone() {
  return {"yolov8n",
          {LayerSpec::Conv(3, 16, 3, 2), LayerSpec::Conv(16, 32, 3, 2),
           LayerSpec::C2f(32, 32, 1), LayerSpec::Conv(32, 64, 3, 2),
           LayerSpec::C2f(64, 64, 2), LayerSpec::Conv(64, 128, 3, 2),
           LayerSpec::C2f(128, 128, 2), LayerSpec::Conv(128, 256, 3, 2),
           LayerSpec::C2f(256, 256, 1), LayerSpec::Sppf(256, 256)}};
}

BackboneSpec AirYoloBackbone() {
  BackboneSpec spec = Yolov8nBackbone();
  spec.name = "air-yolo";
  for (auto& l : spec.layers) {
    if (l.kind == LayerKind::kC2f) l.kind = LayerKind::kC2fFaster;
  }
  return spec;
}

BackboneSpec BuiltinBackbone(std::string_view name) {
  if (name == "yolov8n") return Yolov8nBackbone();
  if (name == "air-yolo") return AirYoloBackbone();
  throw ValidationError("unknown built-in backbone '" + std::string(name) +
                        "' (expected yolov8n or air-yolo)");
}

BackboneSpec ParseBackboneSpec(const std::string& text,
                               const std::string& source_name) {
  BackboneSpec spec;
  spec.name = source_name;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    std::vector<int64_t> nums;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      int64_t v = 0;
      if (!ParseInt64(tok[i], &v)) {
        throw ValidationError(where + "'" + tok[i] + "' is not an integer");
      }
      nums.push_back(v);
    }
    const std::string& kind = tok[0];
    LayerSpec layer;
    if (kind == "Conv" || kind == "ConvBlock") {
      if (nums.size() != 4) {
        throw ValidationError(where + kind + " expects c_in c_out k stride");
      }
      layer = LayerSpec::Conv(nums[0], nums[1], nums[2], nums[3]);
    } else if (kind == "C2f" || kind == "C2fFaster" || kind == "C2f_Faster") {
      if (nums.size() != 3) {
        throw ValidationError(where + kind + " expects c_in c_out n");
      }
      layer = kind == "C2f" ? LayerSpec::C2f(nums[0], nums[1], nums[2])
                            : LayerSpec::C2fFaster(nums[0], nums[1], nums[2]);
    } else if (kind == "SPPF") {
      if (nums.size() != 2) {
        throw ValidationError(where + "SPPF expects c_in c_out");
      }
      layer = LayerSpec::Sppf(nums[0], nums[1]);
    } else {
      throw ValidationError(where + "unknown layer kind '" + kind + "'");
    }
    try {
      layer.Validate();
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    spec.layers.push_back(layer);
  }
  spec.Validate();
  return spec;
}

BackboneSpec ReadBackboneSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  BackboneSpec spec = ParseBackboneSpec(buffer.str(), path.string());
  spec.name = path.stem().string();
  return spec;
}

std::string FormatBackboneSpec(const BackboneSpec& spec) {
  std::ostringstream os;
  os << "# kind c_in c_out [k stride | n]\n";
  for (const auto& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::kConvBlock:
        os << "Conv " << l.c_in << " " << l.c_out << " " << l.k << " "
           << l.stride << "\n";
        break;
      case LayerKind::kC2f:
        os << "C2f " << l.c_in << " " << l.c_out << " " << l.n << "\n";
        break;
      case LayerKind::kC2fFaster:
        os << "C2fFaster " << l.c_in << " " << l.c_out << " " << l.n << "\n";
        break;
      case LayerKind::kSppf:
        os << "SPPF " << l.c_in << " " << l.c_out << "\n";
        break;
    }
  }
  return os.str();
}

std::string MarkdownTable(const BackboneSummary& summary) {
  std::ostringstream os;
  os << "| NO. | Module (" << summary.name << ") | Input | Output | Params |\n"
     << "|---:|---|---:|---:|---:|\n";
  for (const auto& r : summary.rows) {
    os << "| " << r.index << " | " << KindName(r.layer.kind) << " | "
       << r.layer.c_in << " | " << r.layer.c_out << " | " << r.params << " |\n";
  }
  os << "| Sum | | | | " << summary.total << " |\n";
  return os.str();
}

std::string ComparisonTable(const BackboneSummary& baseline,
                            const BackboneSummary& candidate) {
  std::ostringstream os;
  os << "| NO. | Module (" << baseline.name << ") | Input | Output | Params "
     << "| Module (" << candidate.name << ") | Input | Output | Params |\n"
     << "|---:|---|---:|---:|---:|---|---:|---:|---:|\n";
  const std::size_t n = std::max(baseline.rows.size(), candidate.rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    os << "| " << i << " |";
    for (const BackboneSummary* s : {&baseline, &candidate}) {
      if (i < s->rows.size()) {
        const auto& r = s->rows[i];
        os << " " << KindName(r.layer.kind) << " | " << r.layer.c_in << " | "
           << r.layer.c_out << " | " << r.params << " |";
      } else {
        os << " | | | |";
      }
    }
    os << "\n";
  }
  os << "| Sum | | | | " << baseline.total << " | | | | " << candidate.total
     << " |\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "\nReduction: %.2f%% (%s vs %s)\n",
                100.0 * ReductionRatio(candidate, baseline),
                candidate.name.c_str(), baseline.name.c_str());
  os << buf;
  return os.str();
}

}  // namespace arch
}  // namespace airinspect
