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

#include "urdfplus/model.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_set>

#include "urdfplus/error.h"

namespace urdfplus {
namespace {

bool Near(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.size() == 0 || (a - b).cwiseAbs().maxCoeff() <= tol);
}

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool PoseEqual(const Pose& a, const Pose& b, double tol) {
  return Near(a.xyz, b.xyz, tol) && Near(a.rpy, b.rpy, tol);
}

bool JointModelEqual(const JointModel& a, const JointModel& b, double tol) {
  if (a.type != b.type) return false;
  if (JointUsesAxis(a.type) && !Near(a.axis, b.axis, tol)) return false;
  if (a.type == JointType::kUniversal && !Near(a.axis2, b.axis2, tol)) {
    return false;
  }
  return true;
}

bool LinkEqual(const Link& a, const Link& b, double tol) {
  if (a.name != b.name || a.payloads != b.payloads) return false;
  if (a.inertial.has_value() != b.inertial.has_value()) return false;
  if (a.inertial) {
    return PoseEqual(a.inertial->origin, b.inertial->origin, tol) &&
           Near(a.inertial->mass, b.inertial->mass, tol) &&
           Near(a.inertial->inertia, b.inertial->inertia, tol);
  }
  return true;
}

bool TreeJointEqual(const TreeJoint& a, const TreeJoint& b, double tol) {
  if (a.mimic.has_value() != b.mimic.has_value()) return false;
  if (a.mimic && (a.mimic->joint != b.mimic->joint ||
                  !Near(a.mimic->multiplier, b.mimic->multiplier, tol) ||
                  !Near(a.mimic->offset, b.mimic->offset, tol))) {
    return false;
  }
  return a.name == b.name && a.parent == b.parent && a.child == b.child &&
         a.independent == b.independent && a.payloads == b.payloads &&
         JointModelEqual(a.model, b.model, tol) &&
         PoseEqual(a.origin, b.origin, tol);
}

bool LoopJointEqual(const LoopJoint& a, const LoopJoint& b, double tol) {
  return a.name == b.name && a.predecessor == b.predecessor &&
         a.successor == b.successor && JointModelEqual(a.model, b.model, tol) &&
         PoseEqual(a.predecessor_origin, b.predecessor_origin, tol) &&
         PoseEqual(a.successor_origin, b.successor_origin, tol);
}

bool CouplingEqual(const Coupling& a, const Coupling& b, double tol) {
  return a.name == b.name && a.predecessor == b.predecessor &&
         a.successor == b.successor && Near(a.ratio, b.ratio, tol);
}

template <typename T, typename Eq>
bool AllEqual(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

class Validator {
 public:
  explicit Validator(const RobotModel& model) : model_(model) {}

  ValidationReport Run() {
    if (model_.links.empty()) {
      Add(ViolationCode::kEmptyModel, model_.name, "robot has no links");
      return std::move(report_);
    }
    CheckNames();
    CheckLinks();
    CheckTreeJoints();
    const bool tree_ok = CheckTreeShape();
    CheckLoops();
    CheckCouplings(tree_ok);
    return std::move(report_);
  }

 private:
  void Add(ViolationCode code, const std::string& subject,
           const std::string& message) {
    report_.violations.push_back({code, subject, message});
  }

  bool LinkExists(const std::string& name) const {
    return link_names_.count(name) > 0;
  }

  void CheckNames() {
    for (const Link& link : model_.links) {
      if (link.name.empty()) {
        Add(ViolationCode::kEmptyName, "", "link with empty name");
      } else if (!link_names_.insert(link.name).second) {
        Add(ViolationCode::kDuplicateName, link.name,
            "duplicate link name '" + link.name + "'");
      }
    }
    std::unordered_set<std::string> joint_names;
    auto check_joint_name = [&](const std::string& name, const char* kind) {
      if (name.empty()) {
        Add(ViolationCode::kEmptyName, "", std::string(kind) + " with empty name");
      } else if (!joint_names.insert(name).second) {
        Add(ViolationCode::kDuplicateName, name,
            "duplicate joint name '" + name + "'");
      }
    };
    for (const TreeJoint& j : model_.tree_joints) check_joint_name(j.name, "joint");
    for (const LoopJoint& j : model_.loop_joints) check_joint_name(j.name, "loop");
    for (const Coupling& c : model_.couplings) check_joint_name(c.name, "coupling");
  }

  void CheckLinks() {
    for (const Link& link : model_.links) {
      if (!link.inertial) continue;
      const Inertial& in = *link.inertial;
      if (!std::isfinite(in.mass) || in.mass < 0.0) {
        Add(ViolationCode::kInvalidInertial, link.name,
            "link '" + link.name + "' has negative or non-finite mass");
      }
      if (!in.inertia.allFinite() ||
          (in.inertia - in.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        Add(ViolationCode::kInvalidInertial, link.name,
            "link '" + link.name + "' has a non-symmetric inertia");
      }
    }
  }

  void CheckAxis(const JointModel& joint, const std::string& name) {
    if (!JointUsesAxis(joint.type)) return;
    auto unit = [](const Vec3& a) {
      return a.allFinite() && std::abs(a.norm() - 1.0) <= kUnitAxisTolerance;
    };
    if (!unit(joint.axis)) {
      Add(ViolationCode::kInvalidAxis, name,
          "joint '" + name + "' axis must be a unit vector");
    }
    if (joint.type == JointType::kUniversal) {
      if (!unit(joint.axis2)) {
        Add(ViolationCode::kInvalidAxis, name,
            "joint '" + name + "' axis2 must be a unit vector");
      } else if (std::abs(joint.axis.dot(joint.axis2)) > kUnitAxisTolerance) {
        Add(ViolationCode::kInvalidAxis, name,
            "universal joint '" + name + "' axes must be orthogonal");
      }
    }
  }

  void CheckTreeJoints() {
    for (const TreeJoint& j : model_.tree_joints) {
      bool refs_ok = true;
      for (const std::string* ref : {&j.parent, &j.child}) {
        if (!LinkExists(*ref)) {
          Add(ViolationCode::kDanglingReference, j.name,
              "joint '" + j.name + "' references unknown link '" + *ref + "'");
          refs_ok = false;
        }
      }
      CheckAxis(j.model, j.name);
      if (j.mimic && j.mimic->offset != 0.0) {
        Add(ViolationCode::kUnsupportedMimic, j.name,
            "joint '" + j.name + "' mimic with nonzero offset has no coupling "
            "equivalent");
      }
      if (!refs_ok) continue;
      if (j.parent == j.child) {
        Add(ViolationCode::kSelfJoint, j.name,
            "joint '" + j.name + "' connects link '" + j.parent +
                "' to itself");
        continue;
      }
      auto [it, inserted] = parent_of_.emplace(j.child, j.parent);
      if (!inserted) {
        Add(ViolationCode::kMultipleParents, j.child,
            "link '" + j.child + "' is the child of more than one joint");
      }
    }
  }

  // Returns true when the tree joints form a single rooted tree.
  bool CheckTreeShape() {
    std::vector<std::string> roots;
    for (const Link& link : model_.links) {
      if (!parent_of_.count(link.name)) roots.push_back(link.name);
    }
    bool ok = !report_.Has(ViolationCode::kMultipleParents) &&
              !report_.Has(ViolationCode::kDanglingReference) &&
              !report_.Has(ViolationCode::kSelfJoint) &&
              !report_.Has(ViolationCode::kDuplicateName);
    if (roots.empty()) {
      Add(ViolationCode::kNoRoot, model_.name,
          "every link is the child of a joint; no root link");
      ok = false;
    } else if (roots.size() > 1) {
      std::string names;
      for (const std::string& r : roots) names += (names.empty() ? "" : ", ") + r;
      Add(ViolationCode::kMultipleRoots, model_.name,
          "multiple roots: " + names);
      ok = false;
    }
    // Walk parent pointers; anything that never reaches a root is on (or
    // hangs off) a cycle.
    std::set<std::string> reported;
    for (const Link& link : model_.links) {
      std::vector<std::string> path;
      std::unordered_set<std::string> seen;
      std::string cur = link.name;
      while (parent_of_.count(cur) && !seen.count(cur)) {
        seen.insert(cur);
        path.push_back(cur);
        cur = parent_of_.at(cur);
      }
      if (!parent_of_.count(cur)) continue;  // reached a root
      // cur is on a cycle; report the cycle once by its smallest member.
      std::vector<std::string> cycle{cur};
      for (std::string x = parent_of_.at(cur); x != cur; x = parent_of_.at(x)) {
        cycle.push_back(x);
      }
      const std::string key = *std::min_element(cycle.begin(), cycle.end());
      if (reported.insert(key).second) {
        std::string names;
        for (const std::string& c : cycle) names += (names.empty() ? "" : " -> ") + c;
        Add(ViolationCode::kTreeCycle, key, "tree joints form a cycle: " + names);
      }
      ok = false;
    }
    if (ok) root_ = roots.front();
    return ok;
  }

  void CheckLoops() {
    for (const LoopJoint& l : model_.loop_joints) {
      for (const std::string* ref : {&l.predecessor, &l.successor}) {
        if (!LinkExists(*ref)) {
          Add(ViolationCode::kDanglingReference, l.name,
              "loop '" + l.name + "' references unknown link '" + *ref + "'");
        }
      }
      if (l.predecessor == l.successor) {
        Add(ViolationCode::kDegenerateLoop, l.name,
            "loop '" + l.name + "' has the same predecessor and successor");
      }
      CheckAxis(l.model, l.name);
    }
  }

  std::vector<std::string> Ancestry(const std::string& link) const {
    std::vector<std::string> chain{link};
    for (auto it = parent_of_.find(link); it != parent_of_.end();
         it = parent_of_.find(it->second)) {
      chain.push_back(it->second);
    }
    std::reverse(chain.begin(), chain.end());  // root first
    return chain;
  }

  void CheckCouplings(bool tree_ok) {
    std::unordered_map<std::string, const TreeJoint*> joint_of_child;
    for (const TreeJoint& j : model_.tree_joints) joint_of_child[j.child] = &j;
    for (const Coupling& c : model_.couplings) {
      bool refs_ok = true;
      for (const std::string* ref : {&c.predecessor, &c.successor}) {
        if (!LinkExists(*ref)) {
          Add(ViolationCode::kDanglingReference, c.name,
              "coupling '" + c.name + "' references unknown link '" + *ref + "'");
          refs_ok = false;
        }
      }
      if (!std::isfinite(c.ratio) || c.ratio == 0.0) {
        Add(ViolationCode::kZeroCouplingRatio, c.name,
            "coupling '" + c.name + "' ratio must be finite and nonzero");
      }
      if (c.predecessor == c.successor) {
        Add(ViolationCode::kDegenerateLoop, c.name,
            "coupling '" + c.name + "' has the same predecessor and successor");
        continue;
      }
      if (!tree_ok || !refs_ok) continue;
      const auto pa = Ancestry(c.predecessor);
      const auto sa = Ancestry(c.successor);
      std::size_t common = 0;
      while (common < pa.size() && common < sa.size() && pa[common] == sa[common]) {
        ++common;
      }
      std::vector<const TreeJoint*> involved;
      for (std::size_t i = common; i < pa.size(); ++i) involved.push_back(joint_of_child[pa[i]]);
      for (std::size_t i = common; i < sa.size(); ++i) involved.push_back(joint_of_child[sa[i]]);
      std::optional<MotionKind> kind;
      bool dof_ok = true;
      bool kind_ok = true;
      for (const TreeJoint* j : involved) {
        if (j->model.dof() != 1) dof_ok = false;
        const MotionKind k = JointMotionKind(j->model.type);
        if (kind && *kind != k) kind_ok = false;
        kind = k;
      }
      if (!dof_ok) {
        Add(ViolationCode::kCouplingDofMismatch, c.name,
            "coupling '" + c.name + "' spans a joint that is not 1-DoF; coupled "
            "joints must all be 1-DoF");
      } else if (!kind_ok) {
        Add(ViolationCode::kCouplingMotionMismatch, c.name,
            "coupling '" + c.name + "': coupled joints must share motion type "
            "(rotation or translation)");
      }
    }
  }

  const RobotModel& model_;
  ValidationReport report_;
  std::unordered_set<std::string> link_names_;
  std::unordered_map<std::string, std::string> parent_of_;
  std::string root_;
};

}  // namespace

const Link* RobotModel::FindLink(std::string_view link_name) const {
  for (const Link& l : links) {
    if (l.name == link_name) return &l;
  }
  return nullptr;
}

const TreeJoint* RobotModel::FindTreeJoint(std::string_view joint_name) const {
  for (const TreeJoint& j : tree_joints) {
    if (j.name == joint_name) return &j;
  }
  return nullptr;
}

bool StructurallyEqual(const RobotModel& a, const RobotModel& b, double tol) {
  auto link_eq = [tol](const Link& x, const Link& y) { return LinkEqual(x, y, tol); };
  auto tree_eq = [tol](const TreeJoint& x, const TreeJoint& y) {
    return TreeJointEqual(x, y, tol);
  };
  auto loop_eq = [tol](const LoopJoint& x, const LoopJoint& y) {
    return LoopJointEqual(x, y, tol);
  };
  auto coupling_eq = [tol](const Coupling& x, const Coupling& y) {
    return CouplingEqual(x, y, tol);
  };
  return a.name == b.name && a.extras == b.extras &&
         AllEqual(a.links, b.links, link_eq) &&
         AllEqual(a.tree_joints, b.tree_joints, tree_eq) &&
         AllEqual(a.loop_joints, b.loop_joints, loop_eq) &&
         AllEqual(a.couplings, b.couplings, coupling_eq);
}

std::string_view ViolationCodeName(ViolationCode code) {
  switch (code) {
    case ViolationCode::kEmptyModel: return "empty-model";
    case ViolationCode::kEmptyName: return "empty-name";
    case ViolationCode::kDuplicateName: return "duplicate-name";
    case ViolationCode::kDanglingReference: return "dangling-reference";
    case ViolationCode::kNoRoot: return "no-root";
    case ViolationCode::kMultipleRoots: return "multiple-roots";
    case ViolationCode::kMultipleParents: return "multiple-parents";
    case ViolationCode::kSelfJoint: return "self-joint";
    case ViolationCode::kTreeCycle: return "tree-cycle";
    case ViolationCode::kDegenerateLoop: return "degenerate-loop";
    case ViolationCode::kInvalidAxis: return "invalid-axis";
    case ViolationCode::kInvalidInertial: return "invalid-inertial";
    case ViolationCode::kZeroCouplingRatio: return "zero-coupling-ratio";
    case ViolationCode::kCouplingDofMismatch: return "coupling-dof-mismatch";
    case ViolationCode::kCouplingMotionMismatch: return "coupling-motion-mismatch";
    case ViolationCode::kUnsupportedMimic: return "unsupported-mimic";
  }
  return "unknown";
}

bool ValidationReport::Has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation& v) { return v.code == code; });
}

ValidationReport ValidateModel(const RobotModel& model) {
  return Validator(model).Run();
}

int NumberedModel::BodyIndex(std::string_view link_name) const {
  auto it = body_index.find(std::string(link_name));
  if (it == body_index.end()) {
    throw Error(ErrorCode::kUnknownReference,
                "unknown link '" + std::string(link_name) + "'");
  }
  return it->second;
}

std::string NumberedModel::ClosureName(int l) const {
  const ClosureRef& c = closures.at(l);
  return c.kind == ClosureKind::kLoop ? model.loop_joints[c.position].name
                                      : model.couplings[c.position].name;
}

int NumberedModel::ClosureConstraintCount(int l) const {
  const ClosureRef& c = closures.at(l);
  if (c.kind == ClosureKind::kCoupling) return 1;
  return JointConstraintCount(model.loop_joints[c.position].model.type);
}

std::string_view NumberedModel::ClosurePredecessor(int l) const {
  const ClosureRef& c = closures.at(l);
  return c.kind == ClosureKind::kLoop ? model.loop_joints[c.position].predecessor
                                      : model.couplings[c.position].predecessor;
}

std::string_view NumberedModel::ClosureSuccessor(int l) const {
  const ClosureRef& c = closures.at(l);
  return c.kind == ClosureKind::kLoop ? model.loop_joints[c.position].successor
                                      : model.couplings[c.position].successor;
}

NumberedModel RegularNumbering(const RobotModel& model) {
  const ValidationReport report = ValidateModel(model);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidModel,
                "cannot number an invalid model: " +
                    report.violations.front().message);
  }
  NumberedModel out;
  out.model = model;

  std::unordered_map<std::string, std::vector<std::size_t>> children;
  std::unordered_set<std::string> is_child;
  for (std::size_t j = 0; j < model.tree_joints.size(); ++j) {
    children[model.tree_joints[j].parent].push_back(j);
    is_child.insert(model.tree_joints[j].child);
  }
  std::string root;
  for (const Link& link : model.links) {
    if (!is_child.count(link.name)) {
      root = link.name;
      break;
    }
  }

  out.body_names.push_back(root);
  out.parent.push_back(-1);
  out.tree_joint.push_back(0);
  out.body_index[root] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int body = queue.front();
    queue.pop_front();
    auto it = children.find(out.body_names[body]);
    if (it == children.end()) continue;
    for (std::size_t j : it->second) {
      const int index = static_cast<int>(out.body_names.size());
      const std::string& child = model.tree_joints[j].child;
      out.body_names.push_back(child);
      out.parent.push_back(body);
      out.tree_joint.push_back(j);
      out.body_index[child] = index;
      queue.push_back(index);
    }
  }

  for (std::size_t k = 0; k < model.loop_joints.size(); ++k) {
    out.closures.push_back({ClosureKind::kLoop, k});
  }
  for (std::size_t k = 0; k < model.couplings.size(); ++k) {
    out.closures.push_back({ClosureKind::kCoupling, k});
  }
  return out;
}

DofCount CountDegreesOfFreedom(const NumberedModel& model) {
  DofCount count;
  for (int i = 1; i <= model.num_bodies(); ++i) {
    count.n += model.joint_of_body(i).model.dof();
  }
  for (int l = 0; l < model.num_closures(); ++l) {
    count.n_c += model.ClosureConstraintCount(l);
  }
  return count;
}

}  // namespace urdfplus
