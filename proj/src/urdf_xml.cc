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

#include "urdfplus/urdf_xml.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "urdfplus/xml_reader.h"

namespace urdfplus {
namespace {

using xml::Element;

constexpr std::string_view kPreservedRobotChildren[] = {
    "material", "transmission", "gazebo", "sensor"};

// Aborts parsing of the current robot-level element after a diagnostic has
// been recorded.
struct ElementFailed {};

class UrdfReader {
 public:
  UrdfReader(std::string_view text, std::vector<ParseDiagnostic>& diagnostics)
      : text_(text), diagnostics_(diagnostics) {}

  std::optional<RobotModel> Read(const Element& root) {
    if (root.name != "robot") {
      Error(ErrorCode::kUnknownElement, root, "/" + root.name,
            "root element must be <robot>, found <" + root.name + ">");
      return std::nullopt;
    }
    RobotModel model;
    try {
      model.name = RequiredAttribute(root, "name", "/robot");
    } catch (const ElementFailed&) {
    }
    for (const Element& child : root.children) {
      const std::string path = "/robot/" + child.name;
      try {
        if (child.name == "link") {
          model.links.push_back(ReadLink(child));
        } else if (child.name == "joint") {
          model.tree_joints.push_back(ReadJoint(child));
        } else if (child.name == "loop") {
          model.loop_joints.push_back(ReadLoop(child, model.loop_joints.size()));
        } else if (child.name == "coupling") {
          model.couplings.push_back(ReadCoupling(child, model.couplings.size()));
        } else if (std::find(std::begin(kPreservedRobotChildren),
                             std::end(kPreservedRobotChildren),
                             child.name) != std::end(kPreservedRobotChildren)) {
          model.extras.push_back(Raw(child));
        } else {
          Error(ErrorCode::kUnknownElement, child, path,
                "unknown element <" + child.name + "> under <robot>");
        }
      } catch (const ElementFailed&) {
      }
    }
    if (failed_) return std::nullopt;
    try {
      return TranslateMimics(std::move(model));
    } catch (const ElementFailed&) {
      return std::nullopt;
    }
  }

 private:
  void Diagnose(ParseDiagnostic::Severity severity, ErrorCode code,
                xml::SourceLocation loc, const std::string& path,
                const std::string& message) {
    diagnostics_.push_back({severity, code, loc.line, loc.column, message, path});
  }

  void Error(ErrorCode code, const Element& el, const std::string& path,
             const std::string& message) {
    failed_ = true;
    Diagnose(ParseDiagnostic::Severity::kError, code, el.location, path, message);
  }

  [[noreturn]] void Fail(ErrorCode code, xml::SourceLocation loc,
                         const std::string& path, const std::string& message) {
    failed_ = true;
    Diagnose(ParseDiagnostic::Severity::kError, code, loc, path, message);
    throw ElementFailed{};
  }

  [[noreturn]] void Fail(ErrorCode code, const Element& el,
                         const std::string& path, const std::string& message) {
    Fail(code, el.location, path, message);
  }

  void Warn(const Element& el, const std::string& path,
            const std::string& message) {
    Diagnose(ParseDiagnostic::Severity::kWarning, ErrorCode::kInvalidValue,
             el.location, path, message);
  }

  Payload Raw(const Element& el) const {
    return Payload(text_.substr(el.begin, el.end - el.begin));
  }

  std::string RequiredAttribute(const Element& el, std::string_view name,
                                const std::string& path) {
    const xml::Attribute* attr = el.FindAttribute(name);
    if (!attr) {
      Fail(ErrorCode::kMissingAttribute, el, path,
           "<" + el.name + "> is missing required attribute '" +
               std::string(name) + "'");
    }
    return attr->value;
  }

  std::optional<std::string> OptionalAttribute(const Element& el,
                                               std::string_view name) const {
    const xml::Attribute* attr = el.FindAttribute(name);
    if (!attr) return std::nullopt;
    return attr->value;
  }

  std::vector<double> Numbers(const xml::Attribute& attr,
                              const std::string& path) {
    std::vector<double> values;
    std::string_view s = attr.value;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i >= s.size()) break;
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      std::string_view token = s.substr(i, j - i);
      if (token.size() > 1 && token[0] == '+') token.remove_prefix(1);
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size() ||
          !std::isfinite(value)) {
        Fail(ErrorCode::kInvalidNumber, attr.location, path,
             "attribute '" + attr.name + "' has invalid number '" +
                 std::string(s.substr(i, j - i)) + "'");
      }
      values.push_back(value);
      i = j;
    }
    return values;
  }

  double Scalar(const Element& el, std::string_view name,
                const std::string& path, std::optional<double> fallback) {
    const xml::Attribute* attr = el.FindAttribute(name);
    if (!attr) {
      if (fallback) return *fallback;
      RequiredAttribute(el, name, path);
    }
    const std::vector<double> v = Numbers(*attr, path);
    if (v.size() != 1) {
      Fail(ErrorCode::kInvalidNumber, attr->location, path,
           "attribute '" + attr->name + "' must hold a single number");
    }
    return v[0];
  }

  Vec3 Triple(const Element& el, std::string_view name, const std::string& path,
              const Vec3& fallback) {
    const xml::Attribute* attr = el.FindAttribute(name);
    if (!attr) return fallback;
    const std::vector<double> v = Numbers(*attr, path);
    if (v.size() != 3) {
      Fail(ErrorCode::kInvalidNumber, attr->location, path,
           "attribute '" + attr->name + "' must hold three numbers, got " +
               std::to_string(v.size()));
    }
    return {v[0], v[1], v[2]};
  }

  Pose ReadOrigin(const Element& el, const std::string& path) {
    Pose pose;
    pose.xyz = Triple(el, "xyz", path, Vec3::Zero());
    pose.rpy = Triple(el, "rpy", path, Vec3::Zero());
    return pose;
  }

  Vec3 ReadAxis(const Element& el, const std::string& path) {
    const Vec3 axis = Triple(el, "xyz", path, Vec3::UnitX());
    if (axis.norm() < 1e-12) {
      Fail(ErrorCode::kInvalidValue, el, path, "axis must be nonzero");
    }
    // Already-unit axes are kept bit for bit so re-parsing is a fixed point.
    if (std::abs(axis.norm() - 1.0) <= 1e-12) return axis;
    return axis.normalized();
  }

  // Rejects a second occurrence of a singleton child element.
  void Once(std::set<std::string>& seen, const Element& el,
            const std::string& path) {
    if (!seen.insert(el.name).second) {
      Fail(ErrorCode::kDuplicateElement, el, path,
           "duplicate <" + el.name + "> element");
    }
  }

  JointType ReadJointType(const Element& el, const std::string& path) {
    const std::string type = RequiredAttribute(el, "type", path);
    if (const auto t = JointTypeFromName(type)) return *t;
    const xml::Attribute* attr = el.FindAttribute("type");
    if (type == "planar") {
      Fail(ErrorCode::kUnknownJointType, attr->location, path,
           "joint type 'planar' is not supported");
    }
    Fail(ErrorCode::kUnknownJointType, attr->location, path,
         "unknown joint type '" + type + "'");
  }

  Link ReadLink(const Element& el) {
    Link link;
    link.name = RequiredAttribute(el, "name", "/robot/link");
    const std::string path = "/robot/link[" + link.name + "]";
    for (const Element& child : el.children) {
      if (child.name == "inertial") {
        if (link.inertial) {
          Fail(ErrorCode::kDuplicateElement, child, path + "/inertial",
               "duplicate <inertial> element");
        }
        link.inertial = ReadInertial(child, path + "/inertial");
      } else {
        link.payloads.push_back(Raw(child));
      }
    }
    return link;
  }

  Inertial ReadInertial(const Element& el, const std::string& path) {
    Inertial in;
    std::set<std::string> seen;
    bool has_mass = false;
    for (const Element& child : el.children) {
      const std::string cpath = path + "/" + child.name;
      if (child.name == "origin") {
        Once(seen, child, cpath);
        in.origin = ReadOrigin(child, cpath);
      } else if (child.name == "mass") {
        Once(seen, child, cpath);
        in.mass = Scalar(child, "value", cpath, std::nullopt);
        has_mass = true;
      } else if (child.name == "inertia") {
        Once(seen, child, cpath);
        const double ixx = Scalar(child, "ixx", cpath, std::nullopt);
        const double ixy = Scalar(child, "ixy", cpath, std::nullopt);
        const double ixz = Scalar(child, "ixz", cpath, std::nullopt);
        const double iyy = Scalar(child, "iyy", cpath, std::nullopt);
        const double iyz = Scalar(child, "iyz", cpath, std::nullopt);
        const double izz = Scalar(child, "izz", cpath, std::nullopt);
        in.inertia << ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz;
      } else {
        Fail(ErrorCode::kUnknownElement, child, cpath,
             "unknown element <" + child.name + "> in <inertial>");
      }
    }
    if (!has_mass) {
      Fail(ErrorCode::kMissingElement, el, path, "<inertial> has no <mass>");
    }
    return in;
  }

  std::string LinkReference(const Element& el, const std::string& path) {
    // Plain URDF uses `link`; the URDF+ listings also write `name`.
    if (auto v = OptionalAttribute(el, "link")) return *v;
    if (auto v = OptionalAttribute(el, "name")) return *v;
    Fail(ErrorCode::kMissingAttribute, el, path,
         "<" + el.name + "> is missing attribute 'link'");
  }

  TreeJoint ReadJoint(const Element& el) {
    TreeJoint joint;
    joint.name = RequiredAttribute(el, "name", "/robot/joint");
    const std::string path = "/robot/joint[" + joint.name + "]";
    const JointType type = ReadJointType(el, path);
    if (const xml::Attribute* ind = el.FindAttribute("independent")) {
      if (ind->value == "true") {
        joint.independent = Independence::kTrue;
      } else if (ind->value == "false") {
        joint.independent = Independence::kFalse;
      } else {
        Fail(ErrorCode::kInvalidValue, ind->location, path,
             "attribute 'independent' must be 'true' or 'false', got '" +
                 ind->value + "'");
      }
    }
    std::set<std::string> seen;
    bool has_parent = false;
    bool has_child = false;
    Vec3 axis = Vec3::UnitX();
    std::optional<Vec3> axis2;
    for (const Element& child : el.children) {
      const std::string cpath = path + "/" + child.name;
      if (child.name == "origin") {
        Once(seen, child, cpath);
        joint.origin = ReadOrigin(child, cpath);
      } else if (child.name == "parent") {
        Once(seen, child, cpath);
        joint.parent = LinkReference(child, cpath);
        has_parent = true;
      } else if (child.name == "child") {
        Once(seen, child, cpath);
        joint.child = LinkReference(child, cpath);
        has_child = true;
      } else if (child.name == "axis") {
        Once(seen, child, cpath);
        axis = ReadAxis(child, cpath);
      } else if (child.name == "axis2") {
        Once(seen, child, cpath);
        axis2 = ReadAxis(child, cpath);
        if (type != JointType::kUniversal) {
          Warn(child, cpath, "<axis2> is ignored for non-universal joints");
        }
      } else if (child.name == "mimic") {
        Once(seen, child, cpath);
        Mimic mimic;
        mimic.joint = RequiredAttribute(child, "joint", cpath);
        mimic.multiplier = Scalar(child, "multiplier", cpath, 1.0);
        mimic.offset = Scalar(child, "offset", cpath, 0.0);
        joint.mimic = mimic;
        mimic_locations_[joint.name] = child.location;
      } else {
        joint.payloads.push_back(Raw(child));
      }
    }
    if (!has_parent) {
      Fail(ErrorCode::kMissingElement, el, path, "joint has no <parent> element");
    }
    if (!has_child) {
      Fail(ErrorCode::kMissingElement, el, path, "joint has no <child> element");
    }
    joint.model = MakeJointModel(type, axis, axis2);
    return joint;
  }

  // Shared reader for the predecessor/successor children of loop and
  // coupling elements.
  std::pair<std::string, Pose> ReadEndpoint(const Element& el,
                                            const std::string& path,
                                            bool allow_origin) {
    const std::string name = RequiredAttribute(el, "name", path);
    Pose pose;
    std::set<std::string> seen;
    for (const Element& child : el.children) {
      const std::string cpath = path + "/" + child.name;
      if (allow_origin && child.name == "origin") {
        Once(seen, child, cpath);
        pose = ReadOrigin(child, cpath);
      } else {
        Fail(ErrorCode::kUnknownElement, child, cpath,
             "unknown element <" + child.name + "> in <" + el.name + ">");
      }
    }
    return {name, pose};
  }

  std::string ClosureName(const Element& el, const std::string& kind,
                          std::size_t ordinal) {
    if (auto name = OptionalAttribute(el, "name")) return *name;
    std::string generated = kind + "_" + std::to_string(ordinal + 1);
    Warn(el, "/robot/" + kind,
         "<" + kind + "> has no name; using '" + generated + "'");
    return generated;
  }

  LoopJoint ReadLoop(const Element& el, std::size_t ordinal) {
    LoopJoint loop;
    loop.name = ClosureName(el, "loop", ordinal);
    const std::string path = "/robot/loop[" + loop.name + "]";
    const JointType type = ReadJointType(el, path);
    std::set<std::string> seen;
    Vec3 axis = Vec3::UnitX();
    std::optional<Vec3> axis2;
    for (const Element& child : el.children) {
      const std::string cpath = path + "/" + child.name;
      if (child.name == "predecessor") {
        Once(seen, child, cpath);
        std::tie(loop.predecessor, loop.predecessor_origin) =
            ReadEndpoint(child, cpath, true);
      } else if (child.name == "successor") {
        Once(seen, child, cpath);
        std::tie(loop.successor, loop.successor_origin) =
            ReadEndpoint(child, cpath, true);
      } else if (child.name == "axis") {
        Once(seen, child, cpath);
        axis = ReadAxis(child, cpath);
      } else if (child.name == "axis2") {
        Once(seen, child, cpath);
        axis2 = ReadAxis(child, cpath);
      } else {
        Fail(ErrorCode::kUnknownElement, child, cpath,
             "unknown element <" + child.name + "> in <loop>");
      }
    }
    for (const char* required : {"predecessor", "successor"}) {
      if (!seen.count(required)) {
        Fail(ErrorCode::kMissingElement, el, path,
             std::string("loop has no <") + required + "> element");
      }
    }
    loop.model = MakeJointModel(type, axis, axis2);
    return loop;
  }

  Coupling ReadCoupling(const Element& el, std::size_t ordinal) {
    Coupling coupling;
    coupling.name = ClosureName(el, "coupling", ordinal);
    const std::string path = "/robot/coupling[" + coupling.name + "]";
    std::set<std::string> seen;
    for (const Element& child : el.children) {
      const std::string cpath = path + "/" + child.name;
      if (child.name == "predecessor") {
        Once(seen, child, cpath);
        coupling.predecessor = ReadEndpoint(child, cpath, false).first;
      } else if (child.name == "successor") {
        Once(seen, child, cpath);
        coupling.successor = ReadEndpoint(child, cpath, false).first;
      } else if (child.name == "ratio") {
        Once(seen, child, cpath);
        coupling.ratio = Scalar(child, "value", cpath, std::nullopt);
      } else {
        Fail(ErrorCode::kUnknownElement, child, cpath,
             "unknown element <" + child.name + "> in <coupling>");
      }
    }
    for (const char* required : {"predecessor", "successor", "ratio"}) {
      if (!seen.count(required)) {
        Fail(ErrorCode::kMissingElement, el, path,
             std::string("coupling has no <") + required + "> element");
      }
    }
    return coupling;
  }

  RobotModel TranslateMimics(RobotModel model) {
    for (const TreeJoint& joint : model.tree_joints) {
      if (!joint.mimic) continue;
      const xml::SourceLocation loc = mimic_locations_.at(joint.name);
      const std::string path = "/robot/joint[" + joint.name + "]/mimic";
      const TreeJoint* target = model.FindTreeJoint(joint.mimic->joint);
      if (!target) {
        Fail(ErrorCode::kUnknownReference, loc, path,
             "mimic refers to unknown joint '" + joint.mimic->joint + "'");
      }
      if (joint.mimic->offset != 0.0) {
        Fail(ErrorCode::kUnsupportedMimicOffset, loc, path,
             "mimic offset must be 0; a nonzero offset has no coupling "
             "equivalent");
      }
      if (target->parent != joint.parent) {
        Diagnose(ParseDiagnostic::Severity::kWarning, ErrorCode::kInvalidValue,
                 loc, path,
                 "mimic between joints with different parents becomes a "
                 "coupling over their full path subchains");
      }
    }
    return TranslateMimic(model);
  }

  std::string_view text_;
  std::vector<ParseDiagnostic>& diagnostics_;
  std::unordered_map<std::string, xml::SourceLocation> mimic_locations_;
  bool failed_ = false;
};

// ---------------------------------------------------------------------------
// Writer

std::string FormatNumber(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatTriple(const Vec3& v) {
  return FormatNumber(v.x()) + " " + FormatNumber(v.y()) + " " +
         FormatNumber(v.z());
}

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Writer {
 public:
  std::string Finish() { return out_.str(); }

  void Line(int depth, const std::string& s) {
    out_ << std::string(2 * depth, ' ') << s << '\n';
  }

  void Origin(int depth, const Pose& pose) {
    if (pose.IsIdentity()) return;
    Line(depth, "<origin xyz=\"" + FormatTriple(pose.xyz) + "\" rpy=\"" +
                    FormatTriple(pose.rpy) + "\"/>");
  }

  void Axes(int depth, const JointModel& model) {
    if (!JointUsesAxis(model.type)) return;
    Line(depth, "<axis xyz=\"" + FormatTriple(model.axis) + "\"/>");
    if (model.type == JointType::kUniversal) {
      Line(depth, "<axis2 xyz=\"" + FormatTriple(model.axis2) + "\"/>");
    }
  }

  void Payloads(int depth, const std::vector<Payload>& payloads) {
    for (const Payload& p : payloads) Line(depth, p);
  }

  void Endpoint(int depth, const char* tag, const std::string& name,
                const Pose* pose) {
    const std::string open =
        std::string("<") + tag + " name=\"" + Escape(name) + "\"";
    if (!pose || pose->IsIdentity()) {
      Line(depth, open + "/>");
      return;
    }
    Line(depth, open + ">");
    Origin(depth + 1, *pose);
    Line(depth, std::string("</") + tag + ">");
  }

  void LinkElement(const Link& link) {
    const std::string open = "<link name=\"" + Escape(link.name) + "\"";
    if (!link.inertial && link.payloads.empty()) {
      Line(1, open + "/>");
      return;
    }
    Line(1, open + ">");
    if (link.inertial) {
      const Inertial& in = *link.inertial;
      Line(2, "<inertial>");
      Origin(3, in.origin);
      Line(3, "<mass value=\"" + FormatNumber(in.mass) + "\"/>");
      const Eigen::Matrix3d& i = in.inertia;
      Line(3, "<inertia ixx=\"" + FormatNumber(i(0, 0)) + "\" ixy=\"" +
                  FormatNumber(i(0, 1)) + "\" ixz=\"" + FormatNumber(i(0, 2)) +
                  "\" iyy=\"" + FormatNumber(i(1, 1)) + "\" iyz=\"" +
                  FormatNumber(i(1, 2)) + "\" izz=\"" + FormatNumber(i(2, 2)) +
                  "\"/>");
      Line(2, "</inertial>");
    }
    Payloads(2, link.payloads);
    Line(1, "</link>");
  }

  void JointElement(const TreeJoint& joint) {
    std::string open = "<joint name=\"" + Escape(joint.name) + "\" type=\"" +
                       std::string(JointTypeName(joint.model.type)) + "\"";
    if (joint.independent != Independence::kUnspecified) {
      open += std::string(" independent=\"") +
              (joint.independent == Independence::kTrue ? "true" : "false") +
              "\"";
    }
    Line(1, open + ">");
    Origin(2, joint.origin);
    Line(2, "<parent link=\"" + Escape(joint.parent) + "\"/>");
    Line(2, "<child link=\"" + Escape(joint.child) + "\"/>");
    Axes(2, joint.model);
    if (joint.mimic) {
      Line(2, "<mimic joint=\"" + Escape(joint.mimic->joint) +
                  "\" multiplier=\"" + FormatNumber(joint.mimic->multiplier) +
                  "\" offset=\"" + FormatNumber(joint.mimic->offset) + "\"/>");
    }
    Payloads(2, joint.payloads);
    Line(1, "</joint>");
  }

  void LoopElement(const LoopJoint& loop) {
    Line(1, "<loop name=\"" + Escape(loop.name) + "\" type=\"" +
                std::string(JointTypeName(loop.model.type)) + "\">");
    Endpoint(2, "predecessor", loop.predecessor, &loop.predecessor_origin);
    Endpoint(2, "successor", loop.successor, &loop.successor_origin);
    Axes(2, loop.model);
    Line(1, "</loop>");
  }

  void CouplingElement(const Coupling& coupling) {
    Line(1, "<coupling name=\"" + Escape(coupling.name) + "\">");
    Endpoint(2, "predecessor", coupling.predecessor, nullptr);
    Endpoint(2, "successor", coupling.successor, nullptr);
    Line(2, "<ratio value=\"" + FormatNumber(coupling.ratio) + "\"/>");
    Line(1, "</coupling>");
  }

 private:
  std::ostringstream out_;
};

}  // namespace

std::string ParseDiagnostic::ToString() const {
  std::string s = std::to_string(line) + ":" + std::to_string(column) + ": " +
                  (severity == Severity::kError ? "error" : "warning") + ": " +
                  message;
  if (!path.empty()) s += " (" + path + ")";
  return s;
}

bool ParseResult::HasError(ErrorCode code) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [code](const ParseDiagnostic& d) {
                       return d.severity == ParseDiagnostic::Severity::kError &&
                              d.code == code;
                     });
}

ParseResult ParseUrdfPlus(std::string_view xml_text) {
  ParseResult result;
  xml::Element root;
  try {
    root = xml::Parse(xml_text);
  } catch (const xml::SyntaxError& e) {
    result.diagnostics.push_back({ParseDiagnostic::Severity::kError,
                                  ErrorCode::kXmlSyntaxError, e.location().line,
                                  e.location().column, e.what(), ""});
    return result;
  }
  UrdfReader reader(xml_text, result.diagnostics);
  result.model = reader.Read(root);
  return result;
}

ParseResult ParseUrdfPlusFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult result;
    result.diagnostics.push_back({ParseDiagnostic::Severity::kError,
                                  ErrorCode::kXmlSyntaxError, 0, 0,
                                  "cannot read file '" + path.string() + "'",
                                  ""});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseUrdfPlus(buffer.str());
}

std::string SerializeUrdfPlus(const RobotModel& model) {
  Writer w;
  w.Line(0, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
  w.Line(0, "<robot name=\"" + Escape(model.name) + "\">");
  for (const Link& link : model.links) w.LinkElement(link);
  for (const TreeJoint& joint : model.tree_joints) w.JointElement(joint);
  for (const LoopJoint& loop : model.loop_joints) w.LoopElement(loop);
  for (const Coupling& coupling : model.couplings) w.CouplingElement(coupling);
  w.Payloads(1, model.extras);
  w.Line(0, "</robot>");
  return w.Finish();
}

RobotModel TranslateMimic(const RobotModel& model) {
  RobotModel out = model;
  for (TreeJoint& joint : out.tree_joints) {
    if (!joint.mimic) continue;
    const TreeJoint* target = model.FindTreeJoint(joint.mimic->joint);
    if (!target) {
      throw Error(ErrorCode::kUnknownReference,
                  "joint '" + joint.name + "' mimics unknown joint '" +
                      joint.mimic->joint + "'");
    }
    if (joint.mimic->offset != 0.0) {
      throw Error(ErrorCode::kUnsupportedMimicOffset,
                  "joint '" + joint.name +
                      "' mimic offset must be 0 to map onto a coupling");
    }
    Coupling coupling;
    coupling.name = joint.name + "_mimic";
    coupling.predecessor = joint.child;
    coupling.successor = target->child;
    coupling.ratio = joint.mimic->multiplier;
    out.couplings.push_back(std::move(coupling));
    joint.mimic.reset();
  }
  return out;
}

}  // namespace urdfplus
