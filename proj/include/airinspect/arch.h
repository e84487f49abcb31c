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
#ifndef AIRINSPECT_ARCH_H_
#define AIRINSPECT_ARCH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace airinspect {
namespace arch {

enum class LayerKind { kConvBlock, kC2f, kC2fFaster, kSppf };

std::string_view KindName(LayerKind kind);

// One backbone row. k and stride apply to ConvBlock only, n (bottleneck
// repeats) to C2f and C2fFaster only.
struct LayerSpec {
  LayerKind kind = LayerKind::kConvBlock;
  int64_t c_in = 0;
  int64_t c_out = 0;
  int64_t k = 1;
  int64_t stride = 1;
  int64_t n = 1;

  // Throws ValidationError: channels must be positive, C2f/C2fFaster need
  // an even c_out, C2fFaster needs c_out % 8 == 0, SPPF needs an even c_in.
  void Validate() const;

  static LayerSpec Conv(int64_t c_in, int64_t c_out, int64_t k, int64_t stride);
  static LayerSpec C2f(int64_t c_in, int64_t c_out, int64_t n);
  static LayerSpec C2fFaster(int64_t c_in, int64_t c_out, int64_t n);
  static LayerSpec Sppf(int64_t c_in, int64_t c_out);
};

struct BackboneSpec {
  std::string name;
  std::vector<LayerSpec> layers;

  // Validates every layer and the channel chain c_out[i] == c_in[i + 1].
  void Validate() const;
};

// Convolution without bias followed by a normalization layer with a scale
// and a shift per output channel.
int64_t ConvBlockParams(int64_t c_in, int64_t c_out, int64_t k);
// Two 3x3 ConvBlocks on c channels.
int64_t BottleneckParams(int64_t c);
// Partial 3x3 conv on c/4 channels (no bias, no norm), 1x1 expand to 2c
// with norm, 1x1 project back to c (no bias, no norm).
int64_t FasterBlockParams(int64_t c);

int64_t ParamCount(const LayerSpec& layer);

struct SummaryRow {
  int index = 0;
  LayerSpec layer;
  int64_t params = 0;
};

struct BackboneSummary {
  std::string name;
  std::vector<SummaryRow> rows;
  int64_t total = 0;
};

BackboneSummary Summarize(const BackboneSpec& spec);

// 1 - candidate / baseline.
double ReductionRatio(const BackboneSummary& candidate,
                      const BackboneSummary& baseline);

struct Shape {
  int64_t height = 0;
  int64_t width = 0;
  int64_t channels = 0;
  bool operator==(const Shape&) const = default;
};

// Output shape after each layer. Strided ConvBlocks divide H and W by the
// stride (same padding); other blocks keep them. Throws ValidationError when
// H or W is not divisible by the total stride or the input channels differ
// from the first layer's c_in.
std::vector<Shape> ShapePropagate(const Shape& input, const BackboneSpec& spec);

// Backbone rows 0-9 of the two reference networks.
BackboneSpec Yolov8nBackbone();
BackboneSpec AirYoloBackbone();
// "yolov8n" or "air-yolo".
BackboneSpec BuiltinBackbone(std::string_view name);

// Line format: "kind c_in c_out [k stride | n]" with kind one of Conv,
// ConvBlock, C2f, C2fFaster (or C2f_Faster), SPPF; '#' starts a comment.
BackboneSpec ParseBackboneSpec(const std::string& text,
                               const std::string& source_name = "<spec>");
BackboneSpec ReadBackboneSpec(const std::filesystem::path& path);
std::string FormatBackboneSpec(const BackboneSpec& spec);

// Markdown table with NO., Module, Input, Output, Params and a Sum row.
std::string MarkdownTable(const BackboneSummary& summary);
// Two summaries side by side, followed by the reduction percentage.
std::string ComparisonTable(const BackboneSummary& baseline,
                            const BackboneSummary& candidate);

}  // namespace arch
}  // namespace airinspect

#endif  // AIRINSPECT_ARCH_H_
