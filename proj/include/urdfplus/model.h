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

// In-memory robot model: the direct image of a URDF+ file, plus structural
// validation, regular numbering and degree-of-freedom accounting.

#ifndef URDFPLUS_MODEL_H_
#define URDFPLUS_MODEL_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "urdfplus/spatial.h"

namespace urdfplus {

// An `origin` element: translation xyz (m) and fixed-axis rpy (rad).
struct Pose {
  Vec3 xyz = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();

  SpatialTransform Transform() const {
    return {RotFromRpy(rpy.x(), rpy.y(), rpy.z()), xyz};
  }
  bool IsIdentity() const { return xyz.isZero(0.0) && rpy.isZero(0.0); }
};

struct Inertial {
  Pose origin;
  double mass = 0.0;
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
};

// Raw XML text of an element the library carries but does not interpret
// (visual, collision, limit, transmission, vendor extensions, ...).
using Payload = std::string;

struct Link {
  std::string name;
  std::optional<Inertial> inertial;
  std::vector<Payload> payloads;
};

enum class Independence { kUnspecified, kTrue, kFalse };

// A URDF `mimic` annotation captured during parsing; consumed when the
// model's mimics are translated into couplings.
struct Mimic {
  std::string joint;
  double multiplier = 1.0;
  double offset = 0.0;
};

struct TreeJoint {
  std::string name;
  JointModel model;
  std::string parent;
  std::string child;
  Pose origin;
  Independence independent = Independence::kUnspecified;
  std::optional<Mimic> mimic;
  std::vector<Payload> payloads;
};

struct LoopJoint {
  std::string name;
  JointModel model;
  std::string predecessor;
  Pose predecessor_origin;
  std::string successor;
  Pose successor_origin;
};

struct Coupling {
  std::string name;
  std::string predecessor;
  std::string successor;
  double ratio = 1.0;
};

struct RobotModel {
  std::string name;
  std::vector<Link> links;
  std::vector<TreeJoint> tree_joints;
  std::vector<LoopJoint> loop_joints;
  std::vector<Coupling> couplings;
  // Preserved robot-level elements (material, transmission, gazebo, sensor).
  std::vector<Payload> extras;

  const Link* FindLink(std::string_view link_name) const;
  const TreeJoint* FindTreeJoint(std::string_view joint_name) const;
};

// Field-level equality: names, types, payload bytes, numerics within tol.
bool StructurallyEqual(const RobotModel& a, const RobotModel& b,
                       double tol = 1e-12);

enum class ViolationCode {
  kEmptyModel,
  kEmptyName,
  kDuplicateName,
  kDanglingReference,
  kNoRoot,
  kMultipleRoots,
  kMultipleParents,
  kSelfJoint,
  kTreeCycle,
  kDegenerateLoop,
  kInvalidAxis,
  kInvalidInertial,
  kZeroCouplingRatio,
  kCouplingDofMismatch,
  kCouplingMotionMismatch,
  kUnsupportedMimic,
};

std::string_view ViolationCodeName(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string subject;  // name of the offending element
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(ViolationCode code) const;
};

ValidationReport ValidateModel(const RobotModel& model);

enum class ClosureKind { kLoop, kCoupling };

// Loop joint or coupling; both close loops of the spanning tree.
struct ClosureRef {
  ClosureKind kind;
  std::size_t position;  // index into loop_joints or couplings
};

// A validated model with regular numbering: bodies 0..N_B with the root at
// 0, tree joint i connecting body i to parent(i) < i, and closures l = 0..
// N_L-1 carrying joint number N_B + 1 + l.
struct NumberedModel {
  RobotModel model;
  std::vector<std::string> body_names;
  std::unordered_map<std::string, int> body_index;
  std::vector<int> parent;             // parent[0] == -1
  std::vector<std::size_t> tree_joint; // body i >= 1 -> model.tree_joints pos
  std::vector<ClosureRef> closures;

  int num_bodies() const { return static_cast<int>(body_names.size()) - 1; }
  int num_closures() const { return static_cast<int>(closures.size()); }
  int num_joints() const { return num_bodies() + num_closures(); }

  const TreeJoint& joint_of_body(int body) const {
    return model.tree_joints[tree_joint[body]];
  }
  int BodyIndex(std::string_view link_name) const;
  std::string ClosureName(int l) const;
  int ClosureJointNumber(int l) const { return num_bodies() + 1 + l; }
  // Constraint rows contributed by closure l (n^c_k); couplings give 1.
  int ClosureConstraintCount(int l) const;
  std::string_view ClosurePredecessor(int l) const;
  std::string_view ClosureSuccessor(int l) const;
};

// Breadth-first from the root, children in joint declaration order; loop
// joints are numbered before couplings, each in declaration order. Throws
// kInvalidModel when ValidateModel reports violations.
NumberedModel RegularNumbering(const RobotModel& model);

struct DofCount {
  int n = 0;    // tree joint variables
  int n_c = 0;  // closure constraint rows
};

DofCount CountDegreesOfFreedom(const NumberedModel& model);

}  // namespace urdfplus

#endif  // URDFPLUS_MODEL_H_
