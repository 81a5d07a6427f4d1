// Copyright 2026 The iccd Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICCD_CORE_RUNNER_HPP
#define ICCD_CORE_RUNNER_HPP

#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/error.hpp"

namespace iccd {

// 0 ok, 2 parse, 3 validation / invalid argument, 4 numerical, 5 I/O.
int exit_code_for(ErrorCode code);

struct RunResult {
  int exit_code = 0;
  int error = 0;                   // ErrorCode value of the failure, -1 internal
  std::string message;             // empty on success
  std::string output_dir;
  std::string summary_json;        // the text written to summary.json
  std::vector<std::string> artifacts;  // file names inside output_dir
};

// Executes cfg.command and writes CSV files, plot scripts and summary.json
// into `output_dir` (cfg.output when empty, else "iccd-out"). Never throws
// for numerical failures: they are reported through the exit code and a
// summary marked partial.
RunResult run(const RunConfig& cfg, const std::string& output_dir = "");

// Summary schema identifier written into every summary.json.
inline constexpr const char* kSummarySchema = "iccd-summary/1";

}  // namespace iccd

#endif  // ICCD_CORE_RUNNER_HPP
