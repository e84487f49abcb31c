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
#include "airinspect/common.h"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace airinspect {
namespace {

std::mutex& HandlerMutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& Handler() {
  static WarningHandler handler;
  return handler;
}

}  // namespace

WarningHandler SetWarningHandler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  WarningHandler previous = std::move(Handler());
  Handler() = std::move(handler);
  return previous;
}

void Warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  if (Handler()) {
    Handler()(message);
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

int MaxThreads() {
  if (const char* env = std::getenv("JDDL_THREADS")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void ParallelFor(std::size_t n,
                 const std::function<void(std::size_t, std::size_t)>& body,
                 int max_threads) {
  if (n == 0) return;
  int threads = max_threads > 0 ? max_threads : MaxThreads();
  // Small ranges are not worth a thread launch.
  constexpr std::size_t kMinChunk = 4096;
  std::size_t chunks = std::min<std::size_t>(
      static_cast<std::size_t>(threads), (n + kMinChunk - 1) / kMinChunk);
  if (chunks <= 1) {
    body(0, n);
    return;
  }
  std::size_t per_chunk = (n + chunks - 1) / chunks;
  std::vector<std::thread> workers;
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    std::size_t begin = c * per_chunk;
    std::size_t end = std::min(n, begin + per_chunk);
    if (begin >= end) break;
    workers.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& w : workers) w.join();
}

void BBox2D::Validate() const {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    std::ostringstream os;
    os << "invalid box (" << x_min << ", " << y_min << ", " << x_max << ", "
       << y_max << "): require x_min < x_max and y_min < y_max";
    throw ValidationError(os.str());
  }
}

double BoxIou(const BBox2D& a, const BBox2D& b) {
  double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  double inter = ix * iy;
  double uni = a.Area() + b.Area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace airinspect
