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

#ifndef ICCD_CORE_ERROR_HPP
#define ICCD_CORE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace iccd {

// Failure taxonomy shared by every module. The numeric values are part of the
// C API (iccd_status) and must not be renumbered.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Divergence = 2,
  DefectiveMatrix = 3,
  OrbitMismatch = 4,
  NoConvergence = 5,
  SingularNewtonStep = 6,
  SaddleNotFound = 7,
  AmbiguousDirections = 8,
  BudgetExhausted = 9,
  NonClosingCurve = 10,
  DegenerateCloud = 11,
  ProjectionFold = 12,
  SelfIntersectingProjection = 13,
  NoDoublingEigenvalue = 14,
  DensityViolation = 15,
  OrthogonalStep = 16,
  EvenPeriodCylinder = 17,
  NoCrossing = 18,
  CycleLost = 19,
  ParseError = 20,
  ValidationError = 21,
  RankDeficient = 22,
  Io = 23,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long index = -1)
      : std::runtime_error(message), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  // Point index, line number or iteration count the failure refers to; -1 if
  // not applicable.
  long index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  long index_;
};

}  // namespace iccd

#endif  // ICCD_CORE_ERROR_HPP
