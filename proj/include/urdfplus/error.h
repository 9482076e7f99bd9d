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

#ifndef URDFPLUS_ERROR_H_
#define URDFPLUS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace urdfplus {

enum class ErrorCode {
  kNonUnitAxis,
  kDimensionMismatch,
  kInvalidModel,
  kNotAnAncestor,
  kDegenerateLoop,
  kInternalInconsistency,
  kSingularDependentBlock,
  kCountMismatch,
  kIncompatibleCoupling,
  kRotationLogSingular,
  kXmlSyntaxError,
  kUnknownElement,
  kMissingAttribute,
  kMissingElement,
  kDuplicateElement,
  kInvalidValue,
  kInvalidNumber,
  kUnknownJointType,
  kUnknownReference,
  kUnsupportedMimicOffset,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures raised by the library carry one of the codes
// above so callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace urdfplus

#endif  // URDFPLUS_ERROR_H_
