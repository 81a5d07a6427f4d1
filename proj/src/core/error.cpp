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

#include "core/error.hpp"

namespace iccd {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorCode::OrbitMismatch: return "OrbitMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularNewtonStep: return "SingularNewtonStep";
    case ErrorCode::SaddleNotFound: return "SaddleNotFound";
    case ErrorCode::AmbiguousDirections: return "AmbiguousDirections";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::NonClosingCurve: return "NonClosingCurve";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::ProjectionFold: return "ProjectionFold";
    case ErrorCode::SelfIntersectingProjection: return "SelfIntersectingProjection";
    case ErrorCode::NoDoublingEigenvalue: return "NoDoublingEigenvalue";
    case ErrorCode::DensityViolation: return "DensityViolation";
    case ErrorCode::OrthogonalStep: return "OrthogonalStep";
    case ErrorCode::EvenPeriodCylinder: return "EvenPeriodCylinder";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::CycleLost: return "CycleLost";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace iccd
