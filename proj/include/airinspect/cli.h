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
#ifndef AIRINSPECT_CLI_H_
#define AIRINSPECT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace airinspect {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInternal = 3;

// Runs the command line given without the program name. Output and
// diagnostics go to the given streams; the return value is the exit code.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cli
}  // namespace airinspect

#endif  // AIRINSPECT_CLI_H_
