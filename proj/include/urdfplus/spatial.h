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

// Spatial-algebra kernel: rotations, rigid transforms, joint motion and
// constraint-force subspaces, and tolerance-based numerical rank.
//
// Spatial motion vectors use Plucker coordinates with the angular part in
// rows 0..2 and the linear part in rows 3..5. The linear part of a motion
// expressed in frame F is the velocity of the body-fixed point currently at
// the origin of F.

#ifndef URDFPLUS_SPATIAL_H_
#define URDFPLUS_SPATIAL_H_

#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace urdfplus {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Rotation3 = Eigen::Matrix3d;
using Matrix6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;

inline constexpr double kDefaultRankTolerance = 1e-10;
inline constexpr double kUnitAxisTolerance = 1e-9;

// Pose of a child frame C relative to a parent frame P: a point with
// coordinates p in C has coordinates rotation * p + translation in P.
class SpatialTransform {
 public:
  SpatialTransform() = default;
  SpatialTransform(const Rotation3& rotation, const Vec3& translation)
      : rotation_(rotation), translation_(translation) {}

  static SpatialTransform Identity() { return {}; }
  static SpatialTransform FromTranslation(const Vec3& t) {
    return {Rotation3::Identity(), t};
  }
  static SpatialTransform FromRotation(const Rotation3& r) {
    return {r, Vec3::Zero()};
  }

  const Rotation3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 Apply(const Vec3& point) const {
    return rotation_ * point + translation_;
  }

  bool IsApprox(const SpatialTransform& other, double tol) const;

 private:
  Rotation3 rotation_ = Rotation3::Identity();
  Vec3 translation_ = Vec3::Zero();
};

// R = Rz(yaw) * Ry(pitch) * Rx(roll), the URDF fixed-axis convention.
Rotation3 RotFromRpy(double roll, double pitch, double yaw);

// Rodrigues rotation of `angle` radians about unit `axis`.
Rotation3 RotAboutAxis(const Vec3& axis, double angle);

// Axis-angle logarithm with angle in [0, pi]. Throws kRotationLogSingular
// within 1e-9 of pi where the map is not differentiable.
Vec3 RotationLog(const Rotation3& r);

// a * b: maps coordinates through b, then a.
SpatialTransform ComposeTransform(const SpatialTransform& a,
                                  const SpatialTransform& b);
SpatialTransform InvertTransform(const SpatialTransform& x);

// Re-expresses a motion vector given in the child frame of `x` in its parent
// frame: angular' = R w, linear' = R v + t x (R w).
Vec6 SpatialMotionMap(const SpatialTransform& x, const Vec6& v);
Matrix6X SpatialMotionMap(const SpatialTransform& x, const Matrix6X& columns);

enum class JointType {
  kFixed,
  kRevolute,
  kContinuous,
  kPrismatic,
  kUniversal,
  kFloating,
};

enum class MotionKind { kNone, kRotation, kTranslation, kMixed };

int JointDof(JointType type);
inline int JointConstraintCount(JointType type) { return 6 - JointDof(type); }
MotionKind JointMotionKind(JointType type);
bool JointUsesAxis(JointType type);
std::string_view JointTypeName(JointType type);
std::optional<JointType> JointTypeFromName(std::string_view name);

// Unit vector orthogonal to `axis`: Gram-Schmidt against the canonical basis
// vector least aligned with it (lowest index wins ties).
Vec3 DefaultSecondAxis(const Vec3& axis);

// Joint type plus the axes it needs. axis2 is only meaningful for universal
// joints and is the rotation axis applied second.
struct JointModel {
  JointType type = JointType::kFixed;
  Vec3 axis = Vec3::UnitX();
  Vec3 axis2 = Vec3::UnitY();

  int dof() const { return JointDof(type); }
};

// Builds a universal-aware model, filling axis2 with DefaultSecondAxis when
// absent.
JointModel MakeJointModel(JointType type, const Vec3& axis,
                          const std::optional<Vec3>& axis2 = std::nullopt);

// Motion subspace at the zero configuration, expressed in the child frame.
Matrix6X MotionSubspace(JointType type, const Vec3& axis);
// Configuration-dependent motion subspace in the child frame. Only the
// universal joint actually depends on q. An empty q means zero.
Matrix6X MotionSubspace(const JointModel& joint,
                        const Eigen::VectorXd& q = Eigen::VectorXd());

// Orthonormal basis of the orthogonal complement of the motion subspace.
Matrix6X ConstraintForceSubspace(JointType type, const Vec3& axis);
Matrix6X ConstraintForceSubspace(const JointModel& joint,
                                 const Eigen::VectorXd& q = Eigen::VectorXd());

// Pose of the child frame relative to the joint's parent-side frame.
// Throws kDimensionMismatch when q.size() != dof.
SpatialTransform JointTransform(const JointModel& joint,
                                const Eigen::VectorXd& q);

// Row reduction with partial pivoting; a pivot counts when its magnitude
// exceeds tol * max|m_ij| of the input.
int NumericalRank(const Eigen::MatrixXd& m, double tol = kDefaultRankTolerance);

}  // namespace urdfplus

#endif  // URDFPLUS_SPATIAL_H_
