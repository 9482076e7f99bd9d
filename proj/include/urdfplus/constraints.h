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

// Loop-closure constraints over spanning-tree coordinates: forward
// kinematics, implicit Jacobians K_l and residuals for loop joints, constant
// rows for couplings, and the explicit Jacobian G derived from K for a
// declared set of independent coordinates.
//
// Coordinates are the tree-joint positions concatenated in joint number
// order (joint i belongs to body i). Loop Jacobian blocks are expressed in
// the predecessor-side loop frame F_{p(k),k}.

#ifndef URDFPLUS_CONSTRAINTS_H_
#define URDFPLUS_CONSTRAINTS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "urdfplus/graph.h"
#include "urdfplus/model.h"
#include "urdfplus/spatial.h"

namespace urdfplus {

struct CoordinateLayout {
  std::vector<int> offset;  // per body; offset[0] == 0 and is unused
  std::vector<int> dof;     // per body; dof[0] == 0
  int size = 0;

  Eigen::VectorXd Segment(const Eigen::VectorXd& q, int body) const {
    return q.segment(offset[body], dof[body]);
  }
};

CoordinateLayout MakeCoordinateLayout(const NumberedModel& model);

// "joint" for 1-DoF joints, "joint[k]" for each coordinate otherwise.
std::vector<std::string> CoordinateLabels(const NumberedModel& model);

// pose[0] = identity; pose[i] = pose[parent(i)] * X_T(i) * X_J(i)(q_i).
// Throws kDimensionMismatch when q has the wrong length.
std::vector<SpatialTransform> ForwardKinematics(const NumberedModel& model,
                                                const Eigen::VectorXd& q);

// One closure's Jacobian restricted to the joints on its path subchains.
struct LoopJacobian {
  int closure = 0;
  std::vector<int> joints;         // ascending joint (= body) numbers
  std::vector<int> column_offset;  // parallel to joints
  Eigen::MatrixXd matrix;          // n^c_k x n_nu

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

// Block column for joint j is eps_j Psi_k^T S_j with S_j mapped into
// F_{p(k),k}; eps = -1 on the predecessor subchain, +1 on the successor
// subchain. Throws kInvalidModel if closure l is a coupling.
LoopJacobian ImplicitLoopJacobian(const NumberedModel& model,
                                  const ConnectivityGraph& g, int l,
                                  const Eigen::VectorXd& q);

// Loop joints: Psi_k^T [log(R_rel); p_rel] for the relative pose of the
// successor-side loop frame in the predecessor-side loop frame.
// Couplings: sum(q over nu_p) - ratio * sum(q over nu_s).
Eigen::VectorXd LoopResidual(const NumberedModel& model,
                             const ConnectivityGraph& g, int l,
                             const Eigen::VectorXd& q);

// Velocity form of sum(q over nu_p) = ratio * sum(q over nu_s): +1 on
// predecessor-side joints, -ratio on successor-side joints. Throws
// kIncompatibleCoupling unless every involved joint is 1-DoF of one motion
// kind.
LoopJacobian CouplingRow(const NumberedModel& model, const ConnectivityGraph& g,
                         int l);

// Dispatches on the closure kind.
LoopJacobian ClosureJacobian(const NumberedModel& model,
                             const ConnectivityGraph& g, int l,
                             const Eigen::VectorXd& q);

// Several closure Jacobians scattered into the columns of a joint set.
struct StackedJacobian {
  std::vector<int> joints;
  std::vector<int> column_offset;
  std::vector<int> closures;
  Eigen::MatrixXd matrix;
  int rank_sum = 0;  // sum of per-closure ranks
};

// Closures in the given order; columns for `joints` (ascending) using the
// layout's DoF. Every closure joint must be in `joints`.
StackedJacobian StackJacobians(const std::vector<LoopJacobian>& blocks,
                               const std::vector<int>& joints,
                               const CoordinateLayout& layout,
                               double rank_tolerance = kDefaultRankTolerance);

struct ExplicitJacobian {
  Eigen::MatrixXd matrix;               // stacked columns x independent count
  std::vector<int> independent_columns; // ascending, into stacked columns
};

// Solves K_d X = -K_y by Gaussian elimination with partial pivoting so that
// K G = 0 with identity rows at the independent columns. K may carry
// redundant rows; they must be consistent. Throws kCountMismatch unless
// |independent| == cols - rank_sum, and kSingularDependentBlock when the
// dependent columns are rank deficient at the tolerance.
ExplicitJacobian ExplicitFromImplicit(const StackedJacobian& k,
                                      const std::vector<int>& independent_columns,
                                      double rank_tolerance = kDefaultRankTolerance);

// --- reporting -------------------------------------------------------------

struct AnalysisOptions {
  double rank_tolerance = kDefaultRankTolerance;
  double residual_tolerance = 1e-6;
};

struct ClosureReport {
  int closure = 0;
  std::string name;
  ClosureKind kind = ClosureKind::kLoop;
  std::string joint_type;  // loop joint type, or "coupling"
  int joint_number = 0;
  int rank = 0;
  int aggregate = 0;
  double residual = 0.0;  // max abs of the residual vector
  LoopJacobian jacobian;
};

struct AggregateReport {
  int index = 0;
  int parent = -1;
  std::vector<int> bodies;
  std::vector<int> closures;
  int dof = 0;
  int rank_sum = 0;
};

struct IndependentCheck {
  bool active = false;  // some joint carries the attribute
  bool passed = true;
  int expected = 0;
  int actual = 0;
  std::string message;
};

struct ConstraintReport {
  std::string robot;
  int n = 0;
  int n_c = 0;
  int rank_sum = 0;
  int n_i = 0;
  std::vector<ClosureReport> closures;
  std::vector<AggregateReport> aggregates;
  IndependentCheck check;
  // n x n_i over all coordinates when the independent set is valid.
  std::optional<ExplicitJacobian> explicit_jacobian;
  std::vector<std::string> coordinate_labels;
  std::vector<std::string> body_names;
  std::vector<std::string> joint_names;  // per body; [0] is empty
  double max_residual = 0.0;
  std::vector<std::string> warnings;

  bool kinematic_tree() const { return closures.empty(); }
};

// Coordinates treated as independent: joints flagged true, plus unflagged
// joints outside every constrained aggregate. Returns a failing check with
// expected/actual counts on mismatch; inactive when no joint is flagged.
IndependentCheck IndependentCoordinateCheck(
    const SystemGraphs& system, const std::vector<ClosureReport>& closures);

// Per-coordinate independence flags per the rule above.
std::vector<bool> IndependentCoordinates(const SystemGraphs& system);

ConstraintReport AnalyzeConstraints(const SystemGraphs& system,
                                    const Eigen::VectorXd& q,
                                    const AnalysisOptions& options = {});

// Rows over all coordinates for every closure, closures in index order.
StackedJacobian FullConstraintJacobian(const SystemGraphs& system,
                                       const Eigen::VectorXd& q,
                                       double rank_tolerance = kDefaultRankTolerance);

// One `joint: v1 v2 ...` line per joint; '#' starts a comment. Joints not
// listed stay at zero. Throws kConfigError.
Eigen::VectorXd ParseConfiguration(std::string_view text,
                                   const NumberedModel& model);

// Text and JSON renderings of a report; the JSON carries every text field.
std::string FormatReport(const ConstraintReport& report);
std::string ReportToJson(const ConstraintReport& report);

}  // namespace urdfplus

#endif  // URDFPLUS_CONSTRAINTS_H_
