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
#ifndef AIRINSPECT_COMMON_H_
#define AIRINSPECT_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace airinspect {

// Bad input: malformed files, violated type invariants. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A postcondition the library itself should have guaranteed. CLI exit code 3.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Warnings go to stderr unless a handler is installed. Returns the previous
// handler so tests can capture and restore.
using WarningHandler = std::function<void(std::string_view)>;
WarningHandler SetWarningHandler(WarningHandler handler);
void Warn(std::string_view message);

// Worker count for ParallelFor: JDDL_THREADS if set and positive, otherwise
// the hardware concurrency.
int MaxThreads();

// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
// visited exactly once; callers write only to per-index slots so the result
// does not depend on the thread count.
void ParallelFor(std::size_t n,
                 const std::function<void(std::size_t, std::size_t)>& body,
                 int max_threads = 0);

// Axis-aligned pixel box in corner form.
struct BBox2D {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double Width() const { return x_max - x_min; }
  double Height() const { return y_max - y_min; }
  double Area() const { return Width() * Height(); }
  bool IsValid() const { return x_min < x_max && y_min < y_max; }
  // Closed-interval containment.
  bool Contains(double x, double y) const {
    return x_min <= x && x <= x_max && y_min <= y && y <= y_max;
  }
  // Throws ValidationError unless x_min < x_max and y_min < y_max.
  void Validate() const;

  bool operator==(const BBox2D&) const = default;
};

// Plain intersection-over-union of corner boxes; 0 when the union is empty.
double BoxIou(const BBox2D& a, const BBox2D& b);

struct DetectionRecord {
  int64_t image_id = 0;
  int class_id = 0;
  BBox2D box;
  double confidence = 0.0;

  bool operator==(const DetectionRecord&) const = default;
};

struct GroundTruthRecord {
  int64_t image_id = 0;
  int class_id = 0;
  BBox2D box;

  bool operator==(const GroundTruthRecord&) const = default;
};

inline constexpr std::string_view kVersion = "0.3.0";

}  // namespace airinspect

#endif  // AIRINSPECT_COMMON_H_
