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

#include "urdfplus/spatial.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "urdfplus/error.h"

namespace urdfplus {
namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix3d Skew(const Vec3& v) {
  Eigen::Matrix3d s;
  s << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return s;
}

Vec3 Vee(const Eigen::Matrix3d& m) {
  return {m(2, 1), m(0, 2), m(1, 0)};
}

void CheckUnit(const Vec3& axis, std::string_view what) {
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > kUnitAxisTolerance) {
    throw Error(ErrorCode::kNonUnitAxis,
                std::string(what) + " must be a unit vector");
  }
}

void CheckAxes(const JointModel& joint) {
  if (!JointUsesAxis(joint.type)) return;
  CheckUnit(joint.axis, "joint axis");
  if (joint.type == JointType::kUniversal) CheckUnit(joint.axis2, "axis2");
}

// Orthonormal basis of the complement of span(columns), picking canonical
// basis vectors greedily by largest residual so the canonical constructions
// come out exactly axis-aligned.
Matrix6X OrthogonalComplement(const Matrix6X& columns) {
  std::vector<Vec6> basis;
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Vec6 v = columns.col(c);
    for (const Vec6& b : basis) v -= b.dot(v) * b;
    basis.push_back(v.normalized());
  }
  const auto span_dim = static_cast<Eigen::Index>(basis.size());
  Matrix6X result(6, 6 - span_dim);
  std::vector<bool> used(6, false);
  for (Eigen::Index k = 0; k < result.cols(); ++k) {
    int best = -1;
    double best_norm = -1.0;
    Vec6 best_residual = Vec6::Zero();
    for (int i = 0; i < 6; ++i) {
      if (used[i]) continue;
      Vec6 r = Vec6::Unit(i);
      for (const Vec6& b : basis) r -= b.dot(r) * b;
      const double norm = r.norm();
      if (norm > best_norm + 1e-15) {
        best = i;
        best_norm = norm;
        best_residual = r;
      }
    }
    used[best] = true;
    Vec6 col = best_residual / best_norm;
    // Second sweep keeps the column orthogonal to machine precision.
    for (const Vec6& b : basis) col -= b.dot(col) * b;
    col.normalize();
    basis.push_back(col);
    result.col(k) = col;
  }
  return result;
}

}  // namespace

bool SpatialTransform::IsApprox(const SpatialTransform& other,
                                double tol) const {
  return (rotation_ - other.rotation_).cwiseAbs().maxCoeff() <= tol &&
         (translation_ - other.translation_).cwiseAbs().maxCoeff() <= tol;
}

Rotation3 RotFromRpy(double roll, double pitch, double yaw) {
  return RotAboutAxis(Vec3::UnitZ(), yaw) * RotAboutAxis(Vec3::UnitY(), pitch) *
         RotAboutAxis(Vec3::UnitX(), roll);
}

Rotation3 RotAboutAxis(const Vec3& axis, double angle) {
  const Eigen::Matrix3d k = Skew(axis);
  return Rotation3::Identity() + std::sin(angle) * k +
         (1.0 - std::cos(angle)) * k * k;
}

Vec3 RotationLog(const Rotation3& r) {
  const double cos_angle = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  if (angle < 1e-8) {
    return Vee(r - r.transpose()) / 2.0;
  }
  if (kPi - angle < 1e-9) {
    throw Error(ErrorCode::kRotationLogSingular,
                "rotation logarithm is singular at an angle of pi");
  }
  if (angle < 3.0) {
    return angle / (2.0 * std::sin(angle)) * Vee(r - r.transpose());
  }
  // Near pi the antisymmetric part vanishes; recover the axis from the
  // symmetric part (1 - cos) a a^T and take its sign from the remainder.
  const Eigen::Matrix3d b =
      (r + r.transpose()) / 2.0 - cos_angle * Eigen::Matrix3d::Identity();
  Eigen::Index col = 0;
  b.diagonal().maxCoeff(&col);
  Vec3 axis = b.col(col).normalized();
  if (axis.dot(Vee(r - r.transpose())) < 0.0) axis = -axis;
  return angle * axis;
}

SpatialTransform ComposeTransform(const SpatialTransform& a,
                                  const SpatialTransform& b) {
  return {a.rotation() * b.rotation(),
          a.rotation() * b.translation() + a.translation()};
}

SpatialTransform InvertTransform(const SpatialTransform& x) {
  const Rotation3 rt = x.rotation().transpose();
  return {rt, -(rt * x.translation())};
}

Vec6 SpatialMotionMap(const SpatialTransform& x, const Vec6& v) {
  Vec6 out;
  const Vec3 w = x.rotation() * v.head<3>();
  out.head<3>() = w;
  out.tail<3>() = x.rotation() * v.tail<3>() + x.translation().cross(w);
  return out;
}

Matrix6X SpatialMotionMap(const SpatialTransform& x, const Matrix6X& columns) {
  Matrix6X out(6, columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    out.col(c) = SpatialMotionMap(x, Vec6(columns.col(c)));
  }
  return out;
}

int JointDof(JointType type) {
  switch (type) {
    case JointType::kFixed:
      return 0;
    case JointType::kRevolute:
    case JointType::kContinuous:
    case JointType::kPrismatic:
      return 1;
    case JointType::kUniversal:
      return 2;
    case JointType::kFloating:
      return 6;
  }
  return 0;
}

MotionKind JointMotionKind(JointType type) {
  switch (type) {
    case JointType::kFixed:
      return MotionKind::kNone;
    case JointType::kRevolute:
    case JointType::kContinuous:
    case JointType::kUniversal:
      return MotionKind::kRotation;
    case JointType::kPrismatic:
      return MotionKind::kTranslation;
    case JointType::kFloating:
      return MotionKind::kMixed;
  }
  return MotionKind::kNone;
}

bool JointUsesAxis(JointType type) {
  return type == JointType::kRevolute || type == JointType::kContinuous ||
         type == JointType::kPrismatic || type == JointType::kUniversal;
}

std::string_view JointTypeName(JointType type) {
  switch (type) {
    case JointType::kFixed:
      return "fixed";
    case JointType::kRevolute:
      return "revolute";
    case JointType::kContinuous:
      return "continuous";
    case JointType::kPrismatic:
      return "prismatic";
    case JointType::kUniversal:
      return "universal";
    case JointType::kFloating:
      return "floating";
  }
  return "unknown";
}

std::optional<JointType> JointTypeFromName(std::string_view name) {
  for (JointType t : {JointType::kFixed, JointType::kRevolute,
                      JointType::kContinuous, JointType::kPrismatic,
                      JointType::kUniversal, JointType::kFloating}) {
    if (JointTypeName(t) == name) return t;
  }
  return std::nullopt;
}

Vec3 DefaultSecondAxis(const Vec3& axis) {
  const Vec3 a = axis.normalized();
  int least = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(a[i]) < std::abs(a[least])) least = i;
  }
  const Vec3 e = Vec3::Unit(least);
  return (e - a.dot(e) * a).normalized();
}

JointModel MakeJointModel(JointType type, const Vec3& axis,
                          const std::optional<Vec3>& axis2) {
  JointModel joint;
  joint.type = type;
  joint.axis = axis;
  joint.axis2 = axis2 ? *axis2 : DefaultSecondAxis(axis);
  return joint;
}

Matrix6X MotionSubspace(JointType type, const Vec3& axis) {
  return MotionSubspace(MakeJointModel(type, axis));
}

Matrix6X MotionSubspace(const JointModel& joint, const Eigen::VectorXd& q) {
  CheckAxes(joint);
  const int dof = joint.dof();
  if (q.size() != 0 && q.size() != dof) {
    throw Error(ErrorCode::kDimensionMismatch,
                "joint position has " + std::to_string(q.size()) +
                    " entries, expected " + std::to_string(dof));
  }
  Matrix6X s = Matrix6X::Zero(6, dof);
  switch (joint.type) {
    case JointType::kFixed:
      break;
    case JointType::kRevolute:
    case JointType::kContinuous:
      s.col(0).head<3>() = joint.axis;
      break;
    case JointType::kPrismatic:
      s.col(0).tail<3>() = joint.axis;
      break;
    case JointType::kUniversal: {
      // Child-frame angular velocity of R1(q0) R2(q1) is
      // R2^T a1 dq0 + a2 dq1.
      const double q1 = q.size() == 0 ? 0.0 : q[1];
      s.col(0).head<3>() = RotAboutAxis(joint.axis2, q1).transpose() * joint.axis;
      s.col(1).head<3>() = joint.axis2;
      break;
    }
    case JointType::kFloating:
      s = Matrix6X::Identity(6, 6);
      break;
  }
  return s;
}

Matrix6X ConstraintForceSubspace(JointType type, const Vec3& axis) {
  return ConstraintForceSubspace(MakeJointModel(type, axis));
}

Matrix6X ConstraintForceSubspace(const JointModel& joint,
                                 const Eigen::VectorXd& q) {
  return OrthogonalComplement(MotionSubspace(joint, q));
}

SpatialTransform JointTransform(const JointModel& joint,
                                const Eigen::VectorXd& q) {
  CheckAxes(joint);
  if (q.size() != joint.dof()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "joint position has " + std::to_string(q.size()) +
                    " entries, expected " + std::to_string(joint.dof()));
  }
  switch (joint.type) {
    case JointType::kFixed:
      return SpatialTransform::Identity();
    case JointType::kRevolute:
    case JointType::kContinuous:
      return SpatialTransform::FromRotation(RotAboutAxis(joint.axis, q[0]));
    case JointType::kPrismatic:
      return SpatialTransform::FromTranslation(q[0] * joint.axis);
    case JointType::kUniversal:
      return SpatialTransform::FromRotation(RotAboutAxis(joint.axis, q[0]) *
                                            RotAboutAxis(joint.axis2, q[1]));
    case JointType::kFloating:
      return {RotFromRpy(q[0], q[1], q[2]), Vec3(q[3], q[4], q[5])};
  }
  return SpatialTransform::Identity();
}

int NumericalRank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0;
  const double threshold = tol * scale;
  Eigen::MatrixXd a = m;
  const Eigen::Index rows = a.rows();
  int rank = 0;
  for (Eigen::Index col = 0; col < a.cols() && rank < rows; ++col) {
    Eigen::Index pivot = rank;
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= threshold) continue;
    a.row(pivot).swap(a.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      const double factor = a(r, col) / a(rank, col);
      a.row(r) -= factor * a.row(rank);
    }
    ++rank;
  }
  return rank;
}

}  // namespace urdfplus
