// Copyright 2026 The urdfplus Authors
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

#include "urdfplus/error.h"

namespace urdfplus {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonUnitAxis: return "NonUnitAxis";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kNotAnAncestor: return "NotAnAncestor";
    case ErrorCode::kDegenerateLoop: return "DegenerateLoop";
    case ErrorCode::kInternalInconsistency: return "InternalInconsistency";
    case ErrorCode::kSingularDependentBlock: return "SingularDependentBlock";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kIncompatibleCoupling: return "IncompatibleCoupling";
    case ErrorCode::kRotationLogSingular: return "RotationLogSingular";
    case ErrorCode::kXmlSyntaxError: return "XmlSyntaxError";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kMissingAttribute: return "MissingAttribute";
    case ErrorCode::kMissingElement: return "MissingElement";
    case ErrorCode::kDuplicateElement: return "DuplicateElement";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kInvalidNumber: return "InvalidNumber";
    case ErrorCode::kUnknownJointType: return "UnknownJointType";
    case ErrorCode::kUnknownReference: return "UnknownReference";
    case ErrorCode::kUnsupportedMimicOffset: return "UnsupportedMimicOffset";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace urdfplus
