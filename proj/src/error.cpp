// Copyright 2026 The coherency Authors.
//
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

#include "coherency/error.hpp"

namespace coherency {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownBus: return "UnknownBus";
    case ErrorCode::EigenSolveFailure: return "EigenSolveFailure";
    case ErrorCode::SingularInteriorBlock: return "SingularInteriorBlock";
    case ErrorCode::EmptyKeepSet: return "EmptyKeepSet";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::OutOfTabulatedRange: return "OutOfTabulatedRange";
    case ErrorCode::AssumptionOneViolated: return "AssumptionOneViolated";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::BreakpointEvaluation: return "BreakpointEvaluation";
    case ErrorCode::NotABreakpoint: return "NotABreakpoint";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::OutsideCohesiveSet: return "OutsideCohesiveSet";
    case ErrorCode::ThetaStarSolveFailure: return "ThetaStarSolveFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::LeftCohesiveSet: return "LeftCohesiveSet";
    case ErrorCode::AssumptionTwoFailed: return "AssumptionTwoFailed";
    case ErrorCode::RhoOutOfRange: return "RhoOutOfRange";
    case ErrorCode::NoSteadyInit: return "NoSteadyInit";
    case ErrorCode::JumpTooLarge: return "JumpTooLarge";
    case ErrorCode::RateTooLarge: return "RateTooLarge";
    case ErrorCode::AssumptionMismatch: return "AssumptionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace coherency
