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

// Reading and writing URDF+ documents. Plain URDF is accepted unchanged; the
// extensions are the robot-level <loop> and <coupling> elements and the
// optional `independent` attribute on <joint>.

#ifndef URDFPLUS_URDF_XML_H_
#define URDFPLUS_URDF_XML_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "urdfplus/error.h"
#include "urdfplus/model.h"

namespace urdfplus {

struct ParseDiagnostic {
  enum class Severity { kError, kWarning };

  Severity severity = Severity::kError;
  ErrorCode code = ErrorCode::kXmlSyntaxError;
  int line = 0;
  int column = 0;
  std::string message;
  std::string path;  // e.g. /robot/joint[knee]/axis

  // "line:col: error: message (path)"
  std::string ToString() const;
};

struct ParseResult {
  std::optional<RobotModel> model;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
  bool HasError(ErrorCode code) const;
};

// Never throws for malformed input; failures come back as diagnostics and
// an empty model. Mimic annotations are translated into couplings.
// Structural validation (roots, cycles, coupling compatibility) is left to
// ValidateModel.
ParseResult ParseUrdfPlus(std::string_view xml_text);
ParseResult ParseUrdfPlusFile(const std::filesystem::path& path);

// 2-space indented document; attributes ordered name, type, independent;
// numbers in shortest round-trip form; preserved payloads verbatim.
std::string SerializeUrdfPlus(const RobotModel& model);

// Replaces every mimic annotation with an equivalent coupling whose
// predecessor is the mimicking joint's child, successor the mimicked joint's
// child, and ratio the multiplier. Throws kUnsupportedMimicOffset for a
// nonzero offset and kUnknownReference for an unknown mimicked joint.
RobotModel TranslateMimic(const RobotModel& model);

}  // namespace urdfplus

#endif  // URDFPLUS_URDF_XML_H_
