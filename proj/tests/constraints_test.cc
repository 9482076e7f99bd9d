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

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "doctest.h"
#include "json.hpp"
#include "support.h"
#include "urdfplus/constraints.h"
#include "urdfplus/error.h"

namespace urdfplus {
namespace {

using testing::DataDir;
using testing::LoadModel;
using testing::ModelsDir;

SystemGraphs Load(const std::string& file) {
  return BuildSystemGraphs(LoadModel(ModelsDir() / file));
}

Eigen::VectorXd Config(const SystemGraphs& s, const std::string& text) {
  return ParseConfiguration(text, s.numbered);
}

double MaxAbs(const Eigen::MatrixXd& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

int Column(const ConstraintReport& r, const std::string& label) {
  for (std::size_t i = 0; i < r.coordinate_labels.size(); ++i) {
    if (r.coordinate_labels[i] == label) return static_cast<int>(i);
  }
  FAIL("no coordinate " << label);
  return -1;
}

TEST_CASE("coordinate layout and labels") {
  const SystemGraphs s = Load("wrist.urdf");
  const CoordinateLayout layout = MakeCoordinateLayout(s.numbered);
  CHECK(layout.size == 8);
  CHECK(layout.offset[3] == 4);
  const auto labels = CoordinateLabels(s.numbered);
  REQUIRE(labels.size() == 8);
  CHECK(labels[0] == "J1[0]");
  CHECK(labels[7] == "J4[1]");
}

TEST_CASE("forward kinematics agrees with an isometry chain") {
  const SystemGraphs s = Load("four_bar.urdf");
  const double t = 0.3;
  const auto pose = ForwardKinematics(s.numbered, Config(s, "crank_joint: 0.3\n"
                                                            "coupler_joint: -0.2\n"
                                                            "rocker_joint: 0.1\n"));
  using Eigen::AngleAxisd;
  const Eigen::Isometry3d crank(AngleAxisd(t, Eigen::Vector3d::UnitZ()));
  const Eigen::Isometry3d coupler =
      crank * Eigen::Translation3d(0, 0.2, 0) * AngleAxisd(-0.2, Eigen::Vector3d::UnitZ());
  const Eigen::Isometry3d rocker =
      Eigen::Translation3d(0.5, 0, 0) * AngleAxisd(0.1, Eigen::Vector3d::UnitZ());
  const int ic = s.numbered.BodyIndex("coupler");
  const int ir = s.numbered.BodyIndex("rocker");
  CHECK((pose[ic].rotation() - coupler.rotation()).norm() < 1e-14);
  CHECK((pose[ic].translation() - coupler.translation()).norm() < 1e-14);
  CHECK((pose[ir].translation() - rocker.translation()).norm() < 1e-14);
  CHECK_THROWS_AS(ForwardKinematics(s.numbered, Eigen::VectorXd::Zero(2)), Error);
}

TEST_CASE("four-bar closes along its parallelogram family") {
  const SystemGraphs s = Load("four_bar.urdf");
  for (double t : {0.0, 0.3, -1.1, 2.0}) {
    CAPTURE(t);
    Eigen::VectorXd q(3);
    const CoordinateLayout layout = MakeCoordinateLayout(s.numbered);
    q[layout.offset[s.numbered.BodyIndex("crank")]] = t;
    q[layout.offset[s.numbered.BodyIndex("rocker")]] = t;
    q[layout.offset[s.numbered.BodyIndex("coupler")]] = -t;
    CHECK(LoopResidual(s.numbered, s.cg, 0, q).cwiseAbs().maxCoeff() < 1e-14);
  }
  const Eigen::VectorXd open = Config(s, "crank_joint: 0.3");
  CHECK(LoopResidual(s.numbered, s.cg, 0, open).cwiseAbs().maxCoeff() > 1e-3);
}

void CheckAgainstDifferences(const SystemGraphs& s, const Eigen::VectorXd& q) {
  for (int l = 0; l < s.numbered.num_closures(); ++l) {
    CAPTURE(l);
    const LoopJacobian k = ClosureJacobian(s.numbered, s.cg, l, q);
    const Eigen::MatrixXd fd =
        testing::FiniteDifferenceLoopJacobian(s.numbered, s.cg, l, q, 1e-7);
    REQUIRE(fd.rows() == k.rows());
    REQUIRE(fd.cols() == k.cols());
    CHECK(MaxAbs(k.matrix - fd) < 1e-6);
  }
}

TEST_CASE("loop Jacobians match finite differences at closure") {
  SUBCASE("four-bar") {
    const SystemGraphs s = Load("four_bar.urdf");
    CheckAgainstDifferences(s, Config(s, "crank_joint: 0.3\nrocker_joint: 0.3\n"
                                         "coupler_joint: -0.3"));
    CheckAgainstDifferences(s, Config(s, "crank_joint: -0.8\nrocker_joint: -0.8\n"
                                         "coupler_joint: 0.8"));
  }
  SUBCASE("wrist") {
    const SystemGraphs s = Load("wrist.urdf");
    CheckAgainstDifferences(s, Eigen::VectorXd::Zero(8));
  }
  SUBCASE("nested and overlapping") {
    for (const char* f : {"nested_loops.urdf", "overlapping_loops.urdf"}) {
      CAPTURE(f);
      const SystemGraphs s = Load(f);
      CheckAgainstDifferences(
          s, Eigen::VectorXd::Zero(MakeCoordinateLayout(s.numbered).size));
    }
  }
  SUBCASE("belt coupling") {
    const SystemGraphs s = Load("belt.urdf");
    CheckAgainstDifferences(s, Config(s, "knee: 0.4\nankle_motor: 0.1\nankle: -0.2"));
  }
}

TEST_CASE("the coupling row") {
  const SystemGraphs s = Load("belt.urdf");
  const LoopJacobian k = CouplingRow(s.numbered, s.cg, 0);
  CHECK(k.joints == std::vector<int>{1, 2, 3});
  CHECK(k.matrix.rows() == 1);
  CHECK(k.matrix(0, 0) == 1.0);
  CHECK(k.matrix(0, 1) == -2.0);
  CHECK(k.matrix(0, 2) == 1.0);
  const Eigen::VectorXd q = Config(s, "knee: 0.4\nankle_motor: 0.1\nankle: -0.2");
  CHECK(LoopResidual(s.numbered, s.cg, 0, q)[0] == doctest::Approx(0.4 - 0.2 - 0.2));
  CHECK_THROWS_AS(ImplicitLoopJacobian(s.numbered, s.cg, 0, q), Error);
}

StackedJacobian Stack(const Eigen::MatrixXd& m, int rank_sum) {
  StackedJacobian k;
  k.matrix = m;
  k.rank_sum = rank_sum;
  return k;
}

TEST_CASE("explicit Jacobian from implicit") {
  Eigen::MatrixXd m(1, 3);
  m << 1, -2, 1;
  const ExplicitJacobian g = ExplicitFromImplicit(Stack(m, 1), {2, 0});
  CHECK(g.independent_columns == std::vector<int>{0, 2});
  Eigen::MatrixXd expect(3, 2);
  expect << 1, 0, 0.5, 0.5, 0, 1;
  CHECK(MaxAbs(g.matrix - expect) < 1e-15);
  CHECK(MaxAbs(m * g.matrix) < 1e-15);
}

TEST_CASE("redundant rows are tolerated") {
  Eigen::MatrixXd m(3, 3);
  m << 1, 1, 0, 2, 2, 0, 0, 1, -1;
  const ExplicitJacobian g = ExplicitFromImplicit(Stack(m, 2), {0});
  CHECK(MaxAbs(m * g.matrix) < 1e-14);
}

TEST_CASE("explicit solve failures") {
  Eigen::MatrixXd m(1, 3);
  m << 1, 0, 0;
  SUBCASE("count mismatch") {
    try {
      ExplicitFromImplicit(Stack(m, 1), {1});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCountMismatch);
      CHECK(std::string(e.what()) == "expected 2 independent coordinates, got 1");
    }
  }
  SUBCASE("singular dependent block") {
    try {
      ExplicitFromImplicit(Stack(m, 1), {0, 1});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSingularDependentBlock);
    }
  }
  SUBCASE("constraint on the independent set") {
    Eigen::MatrixXd two(2, 2);
    two << 1, 0, 0, 1;
    CHECK_THROWS_AS(ExplicitFromImplicit(Stack(two, 1), {1}), Error);
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(ExplicitFromImplicit(Stack(m, 1), {0, 5}), Error);
  }
}

TEST_CASE("wrist analysis") {
  const SystemGraphs s = Load("wrist.urdf");
  const ConstraintReport r = AnalyzeConstraints(s, Eigen::VectorXd::Zero(8));
  CHECK(r.n == 8);
  CHECK(r.n_c == 8);
  CHECK(r.rank_sum == 6);
  CHECK(r.n_i == 2);
  CHECK(r.check.active);
  CHECK(r.check.passed);
  REQUIRE(r.closures.size() == 2);
  CHECK(r.closures[0].rank == 3);
  CHECK(r.closures[0].jacobian.joints == std::vector<int>{1, 2, 4});
  CHECK(r.closures[1].jacobian.joints == std::vector<int>{1, 3, 4});
  REQUIRE(r.explicit_jacobian);
  const ExplicitJacobian& g = *r.explicit_jacobian;
  CHECK(g.matrix.rows() == 8);
  CHECK(g.matrix.cols() == 2);
  const StackedJacobian k = FullConstraintJacobian(s, Eigen::VectorXd::Zero(8));
  CHECK(MaxAbs(k.matrix * g.matrix) < 1e-10);
  CHECK(r.max_residual < 1e-12);
  CHECK(r.warnings.empty());
}

TEST_CASE("belt analysis") {
  const SystemGraphs s = Load("belt.urdf");
  const ConstraintReport r = AnalyzeConstraints(s, Eigen::VectorXd::Zero(3));
  CHECK(r.n_i == 2);
  REQUIRE(r.explicit_jacobian);
  const Eigen::MatrixXd& g = r.explicit_jacobian->matrix;
  const int knee = Column(r, "knee"), motor = Column(r, "ankle_motor"),
            ankle = Column(r, "ankle");
  CHECK(std::abs(g(knee, 0) - 1) < 1e-12);
  CHECK(std::abs(g(knee, 1)) < 1e-12);
  CHECK(std::abs(g(motor, 0) - 0.5) < 1e-12);
  CHECK(std::abs(g(motor, 1) - 0.5) < 1e-12);
  CHECK(std::abs(g(ankle, 0)) < 1e-12);
  CHECK(std::abs(g(ankle, 1) - 1) < 1e-12);
}

TEST_CASE("independent set with the wrong count fails the check") {
  const SystemGraphs s =
      BuildSystemGraphs(LoadModel(DataDir() / "wrist_four_independent.urdf"));
  const ConstraintReport r = AnalyzeConstraints(s, Eigen::VectorXd::Zero(8));
  CHECK(r.check.active);
  CHECK_FALSE(r.check.passed);
  CHECK(r.check.expected == 2);
  CHECK(r.check.actual == 4);
  CHECK(r.check.message.find("expected 2 independent coordinates, got 4") !=
        std::string::npos);
  CHECK_FALSE(r.explicit_jacobian);
}

TEST_CASE("models without the attribute are spanning-coordinate") {
  const SystemGraphs s = Load("nested_loops.urdf");
  const ConstraintReport r =
      AnalyzeConstraints(s, Eigen::VectorXd::Zero(MakeCoordinateLayout(s.numbered).size));
  CHECK(r.n == 5);
  CHECK(r.n_c == 10);
  CHECK(r.n_i == 1);
  CHECK_FALSE(r.check.active);
  CHECK(FormatReport(r).find("mode: spanning-coordinate") != std::string::npos);
}

TEST_CASE("overlapping loops lock the mechanism") {
  const SystemGraphs s = Load("overlapping_loops.urdf");
  const ConstraintReport r =
      AnalyzeConstraints(s, Eigen::VectorXd::Zero(MakeCoordinateLayout(s.numbered).size));
  CHECK(r.n_i == 0);
  CHECK(r.aggregates.size() == 2);
}

TEST_CASE("a kinematic tree has no constraints") {
  for (const auto& path : testing::PlainModelPaths()) {
    CAPTURE(path.string());
    const SystemGraphs s = BuildSystemGraphs(LoadModel(path));
    const int n = MakeCoordinateLayout(s.numbered).size;
    const ConstraintReport r = AnalyzeConstraints(s, Eigen::VectorXd::Zero(n));
    CHECK(r.kinematic_tree());
    CHECK(r.n_c == 0);
    CHECK(r.n_i == r.n);
    CHECK(FormatReport(r).find("kinematic tree: no closures") != std::string::npos);
  }
}

TEST_CASE("residual warnings away from closure") {
  const SystemGraphs s = Load("four_bar.urdf");
  const ConstraintReport r = AnalyzeConstraints(s, Config(s, "crank_joint: 0.3"));
  CHECK(r.max_residual > 1e-6);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("rocker_pin") != std::string::npos);
  AnalysisOptions loose;
  loose.residual_tolerance = 1.0;
  CHECK(AnalyzeConstraints(s, Config(s, "crank_joint: 0.3"), loose).warnings.empty());
}

TEST_CASE("independent coordinates follow the attribute") {
  const SystemGraphs s = Load("belt.urdf");
  const std::vector<bool> ind = IndependentCoordinates(s);
  REQUIRE(ind.size() == 3);
  CHECK(ind[0]);        // knee
  CHECK_FALSE(ind[1]);  // ankle_motor
  CHECK(ind[2]);        // ankle
}

TEST_CASE("configuration files") {
  const SystemGraphs s = Load("wrist.urdf");
  const Eigen::VectorXd q = Config(s, "# comment\n\nJ2: 0.1 0.2  # trailing\nJ4: -1,2\n");
  CHECK(q[2] == 0.1);
  CHECK(q[3] == 0.2);
  CHECK(q[6] == -1.0);
  CHECK(q[7] == 2.0);
  CHECK(q[0] == 0.0);
  for (const char* bad : {"J9: 1 2", "J2 0.1 0.2", "J2: 0.1", "J2: 0.1 x",
                          "J2: 1 2\nJ2: 1 2", "J2: 1 nan"}) {
    CAPTURE(bad);
    try {
      Config(s, bad);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfigError);
      CHECK(std::string(e.what()).rfind("config line ", 0) == 0);
    }
  }
}

TEST_CASE("text and JSON reports") {
  const SystemGraphs s = Load("belt.urdf");
  const ConstraintReport r = AnalyzeConstraints(s, Eigen::VectorXd::Zero(3));
  const std::string text = FormatReport(r);
  CHECK(text.find("robot: belt\n") != std::string::npos);
  CHECK(text.find("coupling belt (joint 4, coupling): K 1x3, rank 1, aggregate A1") !=
        std::string::npos);
  CHECK(text.find("  1 -2 1\n") != std::string::npos);
  CHECK(text.find("independent check: pass (expected 2, got 2)") != std::string::npos);
  CHECK(text.find("  ankle_motor: 0.5 0.5\n") != std::string::npos);

  const auto j = nlohmann::json::parse(ReportToJson(r));
  CHECK(j["robot"] == "belt");
  CHECK(j["n_i"] == 2);
  CHECK(j["mode"] == "independent-coordinate");
  CHECK(j["closures"][0]["jacobian"][0][1] == -2.0);
  CHECK(j["closures"][0]["joints"][1] == "ankle_motor");
  CHECK(j["aggregates"][0]["parent"].is_null());
  CHECK(j["aggregates"][1]["bodies"].size() == 3);
  CHECK(j["explicit_jacobian"]["columns"] == nlohmann::json({"knee", "ankle"}));
  CHECK(j["max_residual"] == 0.0);
  // Deterministic output.
  CHECK(ReportToJson(AnalyzeConstraints(s, Eigen::VectorXd::Zero(3))) == ReportToJson(r));
}

TEST_CASE("analysis runs on random models") {
  std::mt19937 rng(41);
  testing::RandomModelOptions opts;
  opts.couplings = true;
  for (int trial = 0; trial < 100; ++trial) {
    const SystemGraphs s = BuildSystemGraphs(testing::RandomModel(rng, opts));
    const ConstraintReport r = AnalyzeConstraints(s, Eigen::VectorXd::Zero(
                                                         MakeCoordinateLayout(s.numbered).size));
    CHECK(r.n_i == r.n - r.rank_sum);
    CHECK(r.rank_sum <= r.n_c);
    int agg_rank = 0;
    for (const AggregateReport& a : r.aggregates) agg_rank += a.rank_sum;
    CHECK(agg_rank == r.rank_sum);
    CHECK_FALSE(r.check.active);
  }
}

}  // namespace
}  // namespace urdfplus
