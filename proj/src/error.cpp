// Copyright 2026 The srnf Authors
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

#include "srnf/error.hpp"

namespace srnf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSpecMismatch: return "SpecMismatch";
    case ErrorCode::kBasisMismatch: return "BasisMismatch";
    case ErrorCode::kZeroArea: return "ZeroArea";
    case ErrorCode::kGridTooCoarse: return "GridTooCoarse";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kResolutionNotHalvable: return "ResolutionNotHalvable";
    case ErrorCode::kNonFiniteEnergy: return "NonFiniteEnergy";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyTraining: return "EmptyTraining";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

}  // namespace srnf
