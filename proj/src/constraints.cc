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

#include "urdfplus/constraints.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "urdfplus/error.h"

namespace urdfplus {
namespace {

const LoopJoint& LoopOf(const NumberedModel& model, int l) {
  const ClosureRef& ref = model.closures.at(l);
  if (ref.kind != ClosureKind::kLoop) {
    throw Error(ErrorCode::kInvalidModel,
                "closure '" + model.ClosureName(l) + "' is not a loop joint");
  }
  return model.model.loop_joints[ref.position];
}

const Coupling& CouplingOf(const NumberedModel& model, int l) {
  const ClosureRef& ref = model.closures.at(l);
  if (ref.kind != ClosureKind::kCoupling) {
    throw Error(ErrorCode::kInvalidModel,
                "closure '" + model.ClosureName(l) + "' is not a coupling");
  }
  return model.model.couplings[ref.position];
}

// Involved joints ascending with their sign (-1 predecessor side).
std::vector<std::pair<int, int>> SignedJoints(const ConnectivityGraph& g,
                                              int l) {
  const LoopSubchains s = ClosureSubchains(g, l);
  std::vector<std::pair<int, int>> out;
  for (int b : s.predecessor_side) out.emplace_back(b, -1);
  for (int b : s.successor_side) out.emplace_back(b, +1);
  std::sort(out.begin(), out.end());
  return out;
}

// Loop frames F_{p,k} and F_{s,k} in root coordinates.
std::pair<SpatialTransform, SpatialTransform> LoopFrames(
    const NumberedModel& model, const ConnectivityGraph& g, int l,
    const std::vector<SpatialTransform>& pose) {
  const LoopJoint& loop = LoopOf(model, l);
  const LoopEdge& e = g.loop(l);
  return {ComposeTransform(pose[e.predecessor], loop.predecessor_origin.Transform()),
          ComposeTransform(pose[e.successor], loop.successor_origin.Transform())};
}

double MaxAbs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

CoordinateLayout MakeCoordinateLayout(const NumberedModel& model) {
  CoordinateLayout layout;
  const int nodes = model.num_bodies() + 1;
  layout.offset.assign(nodes, 0);
  layout.dof.assign(nodes, 0);
  for (int i = 1; i < nodes; ++i) {
    layout.offset[i] = layout.size;
    layout.dof[i] = model.joint_of_body(i).model.dof();
    layout.size += layout.dof[i];
  }
  return layout;
}

std::vector<std::string> CoordinateLabels(const NumberedModel& model) {
  std::vector<std::string> labels;
  for (int i = 1; i <= model.num_bodies(); ++i) {
    const TreeJoint& j = model.joint_of_body(i);
    const int dof = j.model.dof();
    if (dof == 1) {
      labels.push_back(j.name);
      continue;
    }
    for (int k = 0; k < dof; ++k) {
      labels.push_back(j.name + "[" + std::to_string(k) + "]");
    }
  }
  return labels;
}

std::vector<SpatialTransform> ForwardKinematics(const NumberedModel& model,
                                                const Eigen::VectorXd& q) {
  const CoordinateLayout layout = MakeCoordinateLayout(model);
  if (q.size() != layout.size) {
    throw Error(ErrorCode::kDimensionMismatch,
                "configuration has " + std::to_string(q.size()) +
                    " values, model needs " + std::to_string(layout.size));
  }
  std::vector<SpatialTransform> pose(model.num_bodies() + 1);
  for (int i = 1; i <= model.num_bodies(); ++i) {
    const TreeJoint& j = model.joint_of_body(i);
    pose[i] = ComposeTransform(
        ComposeTransform(pose[model.parent[i]], j.origin.Transform()),
        JointTransform(j.model, layout.Segment(q, i)));
  }
  return pose;
}

LoopJacobian ImplicitLoopJacobian(const NumberedModel& model,
                                  const ConnectivityGraph& g, int l,
                                  const Eigen::VectorXd& q) {
  const LoopJoint& loop = LoopOf(model, l);
  const CoordinateLayout layout = MakeCoordinateLayout(model);
  const auto pose = ForwardKinematics(model, q);
  const SpatialTransform a_inv = InvertTransform(LoopFrames(model, g, l, pose).first);
  const Matrix6X psi = ConstraintForceSubspace(loop.model);

  LoopJacobian jac;
  jac.closure = l;
  const auto joints = SignedJoints(g, l);
  int cols = 0;
  for (const auto& [j, sign] : joints) {
    jac.joints.push_back(j);
    jac.column_offset.push_back(cols);
    cols += layout.dof[j];
  }
  jac.matrix = Eigen::MatrixXd::Zero(psi.cols(), cols);
  for (std::size_t c = 0; c < joints.size(); ++c) {
    const auto [j, sign] = joints[c];
    const TreeJoint& tj = model.joint_of_body(j);
    if (layout.dof[j] == 0) continue;
    const Matrix6X s = SpatialMotionMap(ComposeTransform(a_inv, pose[j]),
                                        MotionSubspace(tj.model, layout.Segment(q, j)));
    jac.matrix.block(0, jac.column_offset[c], psi.cols(), layout.dof[j]) =
        sign * (psi.transpose() * s);
  }
  return jac;
}

Eigen::VectorXd LoopResidual(const NumberedModel& model,
                             const ConnectivityGraph& g, int l,
                             const Eigen::VectorXd& q) {
  if (model.closures.at(l).kind == ClosureKind::kCoupling) {
    const Coupling& c = CouplingOf(model, l);
    const CoordinateLayout layout = MakeCoordinateLayout(model);
    double phi = 0.0;
    for (const auto& [j, sign] : SignedJoints(g, l)) {
      if (layout.dof[j] != 1) {
        throw Error(ErrorCode::kIncompatibleCoupling,
                    "coupling '" + c.name + "' spans a joint without exactly one DoF");
      }
      phi += (sign < 0 ? 1.0 : -c.ratio) * q[layout.offset[j]];
    }
    return Eigen::VectorXd::Constant(1, phi);
  }
  const LoopJoint& loop = LoopOf(model, l);
  const auto pose = ForwardKinematics(model, q);
  const auto [a, b] = LoopFrames(model, g, l, pose);
  const SpatialTransform e = ComposeTransform(InvertTransform(a), b);
  Vec6 err;
  err.head<3>() = RotationLog(e.rotation());
  err.tail<3>() = e.translation();
  return ConstraintForceSubspace(loop.model).transpose() * err;
}

LoopJacobian CouplingRow(const NumberedModel& model, const ConnectivityGraph& g,
                         int l) {
  const Coupling& c = CouplingOf(model, l);
  LoopJacobian jac;
  jac.closure = l;
  const auto joints = SignedJoints(g, l);
  std::optional<MotionKind> kind;
  for (const auto& [j, sign] : joints) {
    const JointModel& jm = model.joint_of_body(j).model;
    if (jm.dof() != 1) {
      throw Error(ErrorCode::kIncompatibleCoupling,
                  "coupling '" + c.name + "' spans joint '" +
                      model.joint_of_body(j).name + "' with " +
                      std::to_string(jm.dof()) + " DoF");
    }
    const MotionKind mk = JointMotionKind(jm.type);
    if (kind && *kind != mk) {
      throw Error(ErrorCode::kIncompatibleCoupling,
                  "coupling '" + c.name + "' mixes revolute and prismatic joints");
    }
    kind = mk;
  }
  jac.matrix = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(joints.size()));
  for (std::size_t k = 0; k < joints.size(); ++k) {
    jac.joints.push_back(joints[k].first);
    jac.column_offset.push_back(static_cast<int>(k));
    jac.matrix(0, static_cast<Eigen::Index>(k)) = joints[k].second < 0 ? 1.0 : -c.ratio;
  }
  return jac;
}

LoopJacobian ClosureJacobian(const NumberedModel& model,
                             const ConnectivityGraph& g, int l,
                             const Eigen::VectorXd& q) {
  if (model.closures.at(l).kind == ClosureKind::kCoupling) {
    return CouplingRow(model, g, l);
  }
  return ImplicitLoopJacobian(model, g, l, q);
}

StackedJacobian StackJacobians(const std::vector<LoopJacobian>& blocks,
                               const std::vector<int>& joints,
                               const CoordinateLayout& layout,
                               double rank_tolerance) {
  StackedJacobian k;
  k.joints = joints;
  std::unordered_map<int, int> column_of;
  int cols = 0;
  for (int j : joints) {
    column_of[j] = cols;
    k.column_offset.push_back(cols);
    cols += layout.dof.at(j);
  }
  int rows = 0;
  for (const LoopJacobian& b : blocks) rows += b.rows();
  k.matrix = Eigen::MatrixXd::Zero(rows, cols);
  int row = 0;
  for (const LoopJacobian& b : blocks) {
    k.closures.push_back(b.closure);
    for (std::size_t c = 0; c < b.joints.size(); ++c) {
      const auto it = column_of.find(b.joints[c]);
      if (it == column_of.end()) {
        throw Error(ErrorCode::kInternalInconsistency,
                    "closure joint " + std::to_string(b.joints[c]) +
                        " is outside the stacked joint set");
      }
      const int dof = layout.dof[b.joints[c]];
      k.matrix.block(row, it->second, b.rows(), dof) =
          b.matrix.block(0, b.column_offset[c], b.rows(), dof);
    }
    k.rank_sum += NumericalRank(b.matrix, rank_tolerance);
    row += b.rows();
  }
  return k;
}

ExplicitJacobian ExplicitFromImplicit(const StackedJacobian& k,
                                      const std::vector<int>& independent_columns,
                                      double rank_tolerance) {
  const int cols = static_cast<int>(k.matrix.cols());
  const int rows = static_cast<int>(k.matrix.rows());
  std::vector<int> ind = independent_columns;
  std::sort(ind.begin(), ind.end());
  ind.erase(std::unique(ind.begin(), ind.end()), ind.end());
  for (int c : ind) {
    if (c < 0 || c >= cols) {
      throw Error(ErrorCode::kDimensionMismatch, "independent column out of range");
    }
  }
  const int expected = cols - k.rank_sum;
  if (static_cast<int>(ind.size()) != expected) {
    throw Error(ErrorCode::kCountMismatch,
                "expected " + std::to_string(expected) +
                    " independent coordinates, got " + std::to_string(ind.size()));
  }

  std::vector<int> dep;
  for (int c = 0, next = 0; c < cols; ++c) {
    if (next < static_cast<int>(ind.size()) && ind[next] == c) {
      ++next;
    } else {
      dep.push_back(c);
    }
  }
  const int d = static_cast<int>(dep.size());
  const int y = static_cast<int>(ind.size());

  // Augmented [K_d | -K_y].
  Eigen::MatrixXd aug(rows, d + y);
  for (int c = 0; c < d; ++c) aug.col(c) = k.matrix.col(dep[c]);
  for (int c = 0; c < y; ++c) aug.col(d + c) = -k.matrix.col(ind[c]);

  const double scale = MaxAbs(k.matrix);
  const double threshold = rank_tolerance * scale;
  for (int c = 0; c < d; ++c) {
    int pivot = -1;
    double best = threshold;
    for (int r = c; r < rows; ++r) {
      if (std::abs(aug(r, c)) > best) {
        best = std::abs(aug(r, c));
        pivot = r;
      }
    }
    if (pivot < 0) {
      throw Error(ErrorCode::kSingularDependentBlock,
                  "dependent block is singular at coordinate column " +
                      std::to_string(dep[c]));
    }
    aug.row(c).swap(aug.row(pivot));
    for (int r = c + 1; r < rows; ++r) {
      const double f = aug(r, c) / aug(c, c);
      if (f != 0.0) aug.row(r) -= f * aug.row(c);
    }
  }
  // Leftover rows must be consistent combinations of the pivot rows.
  const double leftover = rows > d ? MaxAbs(aug.bottomRows(rows - d)) : 0.0;
  if (leftover > 100.0 * threshold) {
    throw Error(ErrorCode::kSingularDependentBlock,
                "constraints restrict the independent coordinates");
  }

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, y);
  for (int c = d - 1; c >= 0; --c) {
    Eigen::RowVectorXd rhs = aug.block(c, d, 1, y);
    for (int t = c + 1; t < d; ++t) rhs -= aug(c, t) * x.row(t);
    x.row(c) = rhs / aug(c, c);
  }

  ExplicitJacobian g;
  g.independent_columns = ind;
  g.matrix = Eigen::MatrixXd::Zero(cols, y);
  for (int c = 0; c < y; ++c) g.matrix(ind[c], c) = 1.0;
  for (int t = 0; t < d; ++t) g.matrix.row(dep[t]) = x.row(t);
  return g;
}

StackedJacobian FullConstraintJacobian(const SystemGraphs& system,
                                       const Eigen::VectorXd& q,
                                       double rank_tolerance) {
  const NumberedModel& nm = system.numbered;
  std::vector<LoopJacobian> blocks;
  for (int l = 0; l < nm.num_closures(); ++l) {
    blocks.push_back(ClosureJacobian(nm, system.cg, l, q));
  }
  std::vector<int> joints;
  for (int i = 1; i <= nm.num_bodies(); ++i) joints.push_back(i);
  return StackJacobians(blocks, joints, MakeCoordinateLayout(nm), rank_tolerance);
}

namespace {

bool AnyFlagged(const NumberedModel& nm) {
  for (const TreeJoint& j : nm.model.tree_joints) {
    if (j.independent != Independence::kUnspecified) return true;
  }
  return false;
}

bool JointIndependent(const SystemGraphs& system, int body) {
  const TreeJoint& j = system.numbered.joint_of_body(body);
  if (j.independent == Independence::kTrue) return true;
  if (j.independent == Independence::kFalse) return false;
  const int agg = system.lacg.aggregate_of_body[body];
  return system.lacg.aggregates[agg].closures.empty();
}

}  // namespace

std::vector<bool> IndependentCoordinates(const SystemGraphs& system) {
  const NumberedModel& nm = system.numbered;
  const CoordinateLayout layout = MakeCoordinateLayout(nm);
  std::vector<bool> flags(layout.size, false);
  for (int i = 1; i <= nm.num_bodies(); ++i) {
    if (!JointIndependent(system, i)) continue;
    for (int k = 0; k < layout.dof[i]; ++k) flags[layout.offset[i] + k] = true;
  }
  return flags;
}

IndependentCheck IndependentCoordinateCheck(
    const SystemGraphs& system, const std::vector<ClosureReport>& closures) {
  const NumberedModel& nm = system.numbered;
  IndependentCheck check;
  check.active = AnyFlagged(nm);
  const CoordinateLayout layout = MakeCoordinateLayout(nm);
  int rank_sum = 0;
  for (const ClosureReport& c : closures) rank_sum += c.rank;
  check.expected = layout.size - rank_sum;
  if (!check.active) {
    check.actual = check.expected;
    return check;
  }
  const std::vector<bool> flags = IndependentCoordinates(system);
  check.actual = static_cast<int>(std::count(flags.begin(), flags.end(), true));
  if (check.actual != check.expected) {
    check.passed = false;
    check.message = "expected " + std::to_string(check.expected) +
                    " independent coordinates, got " + std::to_string(check.actual);
    return check;
  }
  // The same count must hold inside every aggregate.
  const LoopAggregatedGraph& lacg = system.lacg;
  for (int k = 0; k < lacg.num_aggregates(); ++k) {
    int dof = 0;
    int actual = 0;
    for (int b : lacg.aggregates[k].bodies) {
      if (b == 0) continue;
      dof += layout.dof[b];
      if (JointIndependent(system, b)) actual += layout.dof[b];
    }
    int ranks = 0;
    for (const ClosureReport& c : closures) {
      if (c.aggregate == k) ranks += c.rank;
    }
    if (actual != dof - ranks) {
      check.passed = false;
      check.message = "aggregate A" + std::to_string(k) + ": expected " +
                      std::to_string(dof - ranks) +
                      " independent coordinates, got " + std::to_string(actual);
      return check;
    }
  }
  return check;
}

ConstraintReport AnalyzeConstraints(const SystemGraphs& system,
                                    const Eigen::VectorXd& q,
                                    const AnalysisOptions& options) {
  const NumberedModel& nm = system.numbered;
  const CoordinateLayout layout = MakeCoordinateLayout(nm);
  if (q.size() != layout.size) {
    throw Error(ErrorCode::kDimensionMismatch,
                "configuration has " + std::to_string(q.size()) +
                    " values, model needs " + std::to_string(layout.size));
  }
  ConstraintReport report;
  report.robot = nm.model.name;
  const DofCount count = CountDegreesOfFreedom(nm);
  report.n = count.n;
  report.n_c = count.n_c;
  report.coordinate_labels = CoordinateLabels(nm);
  report.body_names = nm.body_names;
  report.joint_names.assign(1, "");
  for (int i = 1; i <= nm.num_bodies(); ++i) {
    report.joint_names.push_back(nm.joint_of_body(i).name);
  }

  for (int l = 0; l < nm.num_closures(); ++l) {
    ClosureReport c;
    c.closure = l;
    c.name = nm.ClosureName(l);
    c.kind = nm.closures[l].kind;
    c.joint_type = c.kind == ClosureKind::kCoupling
                       ? "coupling"
                       : std::string(JointTypeName(LoopOf(nm, l).model.type));
    c.joint_number = nm.ClosureJointNumber(l);
    c.aggregate = system.lacg.aggregate_of_closure[l];
    c.jacobian = ClosureJacobian(nm, system.cg, l, q);
    c.rank = NumericalRank(c.jacobian.matrix, options.rank_tolerance);
    try {
      const Eigen::VectorXd phi = LoopResidual(nm, system.cg, l, q);
      c.residual = phi.size() == 0 ? 0.0 : phi.cwiseAbs().maxCoeff();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRotationLogSingular) throw;
      c.residual = std::numeric_limits<double>::infinity();
      report.warnings.push_back("closure '" + c.name + "': " + e.what());
    }
    report.max_residual = std::max(report.max_residual, c.residual);
    if (c.residual > options.residual_tolerance) {
      report.warnings.push_back("closure '" + c.name +
                                "' is not closed at this configuration (residual " +
                                std::to_string(c.residual) + ")");
    }
    report.rank_sum += c.rank;
    report.closures.push_back(std::move(c));
  }
  report.n_i = report.n - report.rank_sum;

  for (int k = 0; k < system.lacg.num_aggregates(); ++k) {
    const Aggregate& agg = system.lacg.aggregates[k];
    AggregateReport a;
    a.index = k;
    a.parent = agg.parent;
    a.bodies = agg.bodies;
    a.closures = agg.closures;
    for (int b : agg.bodies) a.dof += layout.dof[b];
    for (int l : agg.closures) a.rank_sum += report.closures[l].rank;
    report.aggregates.push_back(std::move(a));
  }

  report.check = IndependentCoordinateCheck(system, report.closures);
  if (!report.check.active || !report.check.passed) return report;

  // Block-diagonal G assembled from one solve per constrained aggregate.
  const std::vector<bool> flags = IndependentCoordinates(system);
  std::vector<int> global_column(layout.size, -1);
  ExplicitJacobian g;
  for (int c = 0; c < layout.size; ++c) {
    if (!flags[c]) continue;
    global_column[c] = static_cast<int>(g.independent_columns.size());
    g.independent_columns.push_back(c);
  }
  g.matrix = Eigen::MatrixXd::Zero(layout.size, g.independent_columns.size());
  for (int c : g.independent_columns) g.matrix(c, global_column[c]) = 1.0;

  for (const AggregateReport& a : report.aggregates) {
    if (a.closures.empty()) continue;
    std::vector<LoopJacobian> blocks;
    for (int l : a.closures) blocks.push_back(report.closures[l].jacobian);
    const StackedJacobian k =
        StackJacobians(blocks, a.bodies, layout, options.rank_tolerance);
    // Stacked column -> global coordinate.
    std::vector<int> global;
    for (int b : a.bodies) {
      for (int d = 0; d < layout.dof[b]; ++d) global.push_back(layout.offset[b] + d);
    }
    std::vector<int> local_ind;
    for (std::size_t c = 0; c < global.size(); ++c) {
      if (flags[global[c]]) local_ind.push_back(static_cast<int>(c));
    }
    ExplicitJacobian local;
    try {
      local = ExplicitFromImplicit(k, local_ind, options.rank_tolerance);
    } catch (const Error& e) {
      report.check.passed = false;
      report.check.message = "aggregate A" + std::to_string(a.index) + ": " + e.what();
      return report;
    }
    for (std::size_t r = 0; r < global.size(); ++r) {
      for (std::size_t c = 0; c < local_ind.size(); ++c) {
        g.matrix(global[r], global_column[global[local_ind[c]]]) =
            local.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  report.explicit_jacobian = std::move(g);
  return report;
}

Eigen::VectorXd ParseConfiguration(std::string_view text,
                                   const NumberedModel& model) {
  const CoordinateLayout layout = MakeCoordinateLayout(model);
  std::unordered_map<std::string, int> body_of_joint;
  for (int i = 1; i <= model.num_bodies(); ++i) {
    body_of_joint[model.joint_of_body(i).name] = i;
  }
  Eigen::VectorXd q = Eigen::VectorXd::Zero(layout.size);
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto fail = [&](const std::string& msg) {
      throw Error(ErrorCode::kConfigError,
                  "config line " + std::to_string(line_no) + ": " + msg);
    };
    const auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) return std::string_view();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) fail("expected 'joint: values'");
    const std::string name(trim(line.substr(0, colon)));
    const auto it = body_of_joint.find(name);
    if (it == body_of_joint.end()) fail("unknown joint '" + name + "'");
    if (!seen.insert(name).second) fail("joint '" + name + "' listed twice");

    std::vector<double> values;
    std::string_view rest = line.substr(colon + 1);
    while (true) {
      const auto b = rest.find_first_not_of(" \t\r,");
      if (b == std::string_view::npos) break;
      rest = rest.substr(b);
      const auto e = rest.find_first_of(" \t\r,");
      const std::string_view tok = rest.substr(0, e);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        fail("bad number '" + std::string(tok) + "'");
      }
      values.push_back(v);
      if (e == std::string_view::npos) break;
      rest = rest.substr(e);
    }
    const int body = it->second;
    if (static_cast<int>(values.size()) != layout.dof[body]) {
      fail("joint '" + name + "' takes " + std::to_string(layout.dof[body]) +
           " values, got " + std::to_string(values.size()));
    }
    for (int k = 0; k < layout.dof[body]; ++k) q[layout.offset[body] + k] = values[k];
  }
  return q;
}

}  // namespace urdfplus
