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
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "airinspect/common.h"
#include "airinspect/point_cloud.h"

namespace airinspect {
namespace {

std::string Where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

bool ParseDouble(const std::string& token, double* out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

struct PlyProperty {
  std::string name;
  bool is_list = false;
};

}  // namespace

void PointCloud::Validate() const {
  if (!labels) return;
  if (labels->size() != points.size()) {
    throw ValidationError("point cloud: " + std::to_string(labels->size()) +
                          " labels for " + std::to_string(points.size()) +
                          " points");
  }
  for (std::size_t i = 0; i < labels->size(); ++i) {
    if ((*labels)[i] < 0) {
      throw ValidationError("point cloud: negative label at index " +
                            std::to_string(i));
    }
  }
}

PointCloud ReadPly(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next() || line != "ply") {
    throw ValidationError(Where(path, 1) + "missing 'ply' magic");
  }
  bool in_vertex = false;
  bool seen_vertex = false;
  std::size_t vertex_count = 0;
  std::size_t elements_before_vertex = 0;
  std::vector<PlyProperty> props;
  bool header_done = false;
  while (next()) {
    auto tok = Tokens(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") {
        throw ValidationError(Where(path, line_no) +
                              "only ASCII PLY is supported");
      }
    } else if (tok[0] == "element") {
      if (tok.size() != 3) {
        throw ValidationError(Where(path, line_no) + "malformed element line");
      }
      in_vertex = tok[1] == "vertex";
      if (in_vertex) {
        seen_vertex = true;
        double count = 0;
        if (!ParseDouble(tok[2], &count) || count < 0) {
          throw ValidationError(Where(path, line_no) + "bad vertex count");
        }
        vertex_count = static_cast<std::size_t>(count);
      } else if (!seen_vertex) {
        ++elements_before_vertex;
      }
    } else if (tok[0] == "property") {
      if (in_vertex) {
        if (tok.size() >= 2 && tok[1] == "list") {
          props.push_back({tok.back(), true});
        } else if (tok.size() == 3) {
          props.push_back({tok[2], false});
        } else {
          throw ValidationError(Where(path, line_no) + "malformed property");
        }
      }
    } else if (tok[0] == "end_header") {
      header_done = true;
      break;
    } else {
      throw ValidationError(Where(path, line_no) + "unexpected header line '" +
                            line + "'");
    }
  }
  if (!header_done) throw ValidationError(path.string() + ": no end_header");
  if (!seen_vertex) throw ValidationError(path.string() + ": no vertex element");
  if (elements_before_vertex > 0) {
    throw ValidationError(path.string() +
                          ": vertex must be the first PLY element");
  }
  int ix = -1, iy = -1, iz = -1, ilabel = -1;
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (props[i].is_list) {
      throw ValidationError(path.string() + ": list properties on vertices "
                                            "are not supported");
    }
    if (props[i].name == "x") ix = static_cast<int>(i);
    if (props[i].name == "y") iy = static_cast<int>(i);
    if (props[i].name == "z") iz = static_cast<int>(i);
    if (props[i].name == "label") ilabel = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    throw ValidationError(path.string() + ": vertex lacks x/y/z properties");
  }
  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  if (ilabel >= 0) cloud.labels.emplace().reserve(vertex_count);
  std::vector<double> values(props.size());
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!next()) {
      throw ValidationError(path.string() + ": expected " +
                            std::to_string(vertex_count) + " vertices, got " +
                            std::to_string(v));
    }
    auto tok = Tokens(line);
    if (tok.size() != props.size()) {
      throw ValidationError(Where(path, line_no) + "expected " +
                            std::to_string(props.size()) + " values, got " +
                            std::to_string(tok.size()));
    }
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (!ParseDouble(tok[i], &values[i])) {
        throw ValidationError(Where(path, line_no) + "non-numeric value '" +
                              tok[i] + "'");
      }
    }
    cloud.points.emplace_back(values[ix], values[iy], values[iz]);
    if (ilabel >= 0) cloud.labels->push_back(static_cast<int32_t>(values[ilabel]));
  }
  cloud.Validate();
  return cloud;
}

PointCloud ReadXyz(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto tok = Tokens(line);
    if (tok.empty()) continue;
    if (tok.size() < 3) {
      throw ValidationError(Where(path, line_no) + "expected x y z");
    }
    double xyz[3];
    for (int i = 0; i < 3; ++i) {
      if (!ParseDouble(tok[i], &xyz[i])) {
        throw ValidationError(Where(path, line_no) + "non-numeric value '" +
                              tok[i] + "'");
      }
    }
    cloud.points.emplace_back(xyz[0], xyz[1], xyz[2]);
  }
  return cloud;
}

PointCloud ReadPointCloud(const std::filesystem::path& path) {
  if (path.extension() == ".ply") return ReadPly(path);
  return ReadXyz(path);
}

void WritePly(const std::filesystem::path& path, const PointCloud& cloud,
              const PlyWriteOptions& options) {
  cloud.Validate();
  const bool labels = options.write_labels && cloud.labels.has_value();
  if (options.colors && options.colors->size() != cloud.size()) {
    throw ValidationError("WritePly: color count does not match point count");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "ply\nformat ascii 1.0\n"
      << "comment airinspect point cloud, meters\n"
      << "element vertex " << cloud.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (labels) out << "property int label\n";
  if (options.colors) {
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  }
  out << "end_header\n";
  char buf[128];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    int n = std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g", p.x(), p.y(),
                          p.z());
    out.write(buf, n);
    if (labels) out << ' ' << (*cloud.labels)[i];
    if (options.colors) {
      const Rgb& c = (*options.colors)[i];
      out << ' ' << int(c[0]) << ' ' << int(c[1]) << ' ' << int(c[2]);
    }
    out << '\n';
  }
}

}  // namespace airinspect
