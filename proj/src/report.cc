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

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "urdfplus/constraints.h"

namespace urdfplus {
namespace {

std::string Num(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string Mode(const ConstraintReport& r) {
  return r.check.active ? "independent-coordinate" : "spanning-coordinate";
}

std::vector<std::string> ClosureJointNames(const ConstraintReport& r,
                                           const ClosureReport& c) {
  std::vector<std::string> names;
  for (int j : c.jacobian.joints) names.push_back(r.joint_names.at(j));
  return names;
}

}  // namespace

std::string FormatReport(const ConstraintReport& r) {
  std::ostringstream out;
  out << "robot: " << r.robot << "\n";
  out << "n: " << r.n << "\n";
  out << "n_c: " << r.n_c << "\n";
  out << "rank_sum: " << r.rank_sum << "\n";
  out << "n_i: " << r.n_i << "\n";
  out << "mode: " << Mode(r) << "\n";
  if (r.kinematic_tree()) out << "kinematic tree: no closures\n";
  for (const ClosureReport& c : r.closures) {
    out << (c.kind == ClosureKind::kLoop ? "loop " : "coupling ") << c.name
        << " (joint " << c.joint_number << ", " << c.joint_type << "): K "
        << c.jacobian.rows() << "x" << c.jacobian.cols() << ", rank " << c.rank
        << ", aggregate A" << c.aggregate << ", residual " << Num(c.residual)
        << "\n";
    out << "  joints:";
    for (const std::string& n : ClosureJointNames(r, c)) out << " " << n;
    out << "\n";
    for (Eigen::Index i = 0; i < c.jacobian.matrix.rows(); ++i) {
      out << "  ";
      for (Eigen::Index j = 0; j < c.jacobian.matrix.cols(); ++j) {
        out << (j ? " " : "") << Num(c.jacobian.matrix(i, j));
      }
      out << "\n";
    }
  }
  for (const AggregateReport& a : r.aggregates) {
    out << "aggregate A" << a.index;
    if (a.parent >= 0) out << " (parent A" << a.parent << ")";
    out << ":";
    for (int b : a.bodies) out << " " << r.body_names.at(b);
    if (!a.closures.empty()) {
      out << "; closures";
      for (int l : a.closures) out << " " << r.closures.at(l).name;
    }
    out << "\n";
  }
  if (r.check.active) {
    out << "independent check: " << (r.check.passed ? "pass" : "fail")
        << " (expected " << r.check.expected << ", got " << r.check.actual << ")";
    if (!r.check.message.empty()) out << ": " << r.check.message;
    out << "\n";
  }
  if (r.explicit_jacobian) {
    const ExplicitJacobian& g = *r.explicit_jacobian;
    out << "G (" << g.matrix.rows() << "x" << g.matrix.cols() << "), columns:";
    for (int c : g.independent_columns) out << " " << r.coordinate_labels.at(c);
    out << "\n";
    for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
      out << "  " << r.coordinate_labels.at(i) << ":";
      for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) {
        out << " " << Num(g.matrix(i, j));
      }
      out << "\n";
    }
  }
  out << "max_residual: " << Num(r.max_residual) << "\n";
  return out.str();
}

std::string ReportToJson(const ConstraintReport& r) {
  using nlohmann::json;
  const auto matrix = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j) + 0.0);
      rows.push_back(std::move(row));
    }
    return rows;
  };

  json j;
  j["robot"] = r.robot;
  j["n"] = r.n;
  j["n_c"] = r.n_c;
  j["rank_sum"] = r.rank_sum;
  j["n_i"] = r.n_i;
  j["mode"] = Mode(r);
  j["kinematic_tree"] = r.kinematic_tree();
  j["closures"] = json::array();
  for (const ClosureReport& c : r.closures) {
    json cj;
    cj["name"] = c.name;
    cj["kind"] = c.kind == ClosureKind::kLoop ? "loop" : "coupling";
    cj["joint_type"] = c.joint_type;
    cj["joint_number"] = c.joint_number;
    cj["rows"] = c.jacobian.rows();
    cj["cols"] = c.jacobian.cols();
    cj["rank"] = c.rank;
    cj["aggregate"] = c.aggregate;
    cj["residual"] = c.residual;
    cj["joints"] = ClosureJointNames(r, c);
    cj["jacobian"] = matrix(c.jacobian.matrix);
    j["closures"].push_back(std::move(cj));
  }
  j["aggregates"] = json::array();
  for (const AggregateReport& a : r.aggregates) {
    json aj;
    aj["index"] = a.index;
    aj["parent"] = a.parent >= 0 ? json(a.parent) : json(nullptr);
    json bodies = json::array();
    for (int b : a.bodies) bodies.push_back(r.body_names.at(b));
    aj["bodies"] = std::move(bodies);
    json closures = json::array();
    for (int l : a.closures) closures.push_back(r.closures.at(l).name);
    aj["closures"] = std::move(closures);
    aj["dof"] = a.dof;
    aj["rank_sum"] = a.rank_sum;
    j["aggregates"].push_back(std::move(aj));
  }
  j["independent_check"] = {{"active", r.check.active},
                            {"passed", r.check.passed},
                            {"expected", r.check.expected},
                            {"actual", r.check.actual},
                            {"message", r.check.message}};
  if (r.explicit_jacobian) {
    const ExplicitJacobian& g = *r.explicit_jacobian;
    json cols = json::array();
    for (int c : g.independent_columns) cols.push_back(r.coordinate_labels.at(c));
    j["explicit_jacobian"] = {{"rows", r.coordinate_labels},
                              {"columns", std::move(cols)},
                              {"matrix", matrix(g.matrix)}};
  } else {
    j["explicit_jacobian"] = nullptr;
  }
  // JSON has no infinity; a failed residual evaluation is reported as null.
  j["max_residual"] = std::isfinite(r.max_residual) ? json(r.max_residual) : json(nullptr);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

}  // namespace urdfplus
