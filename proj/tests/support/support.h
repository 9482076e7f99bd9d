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

// Shared helpers for the unit and acceptance tests: fixture paths, a random
// model generator, and reference implementations used as oracles. The
// oracles deliberately avoid the library code paths they check.

#ifndef URDFPLUS_TESTS_SUPPORT_H_
#define URDFPLUS_TESTS_SUPPORT_H_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "urdfplus/graph.h"
#include "urdfplus/model.h"

namespace urdfplus::testing {

std::filesystem::path ModelsDir();
std::filesystem::path DataDir();

// Golden closed-chain models and the plain-URDF corpus.
std::vector<std::filesystem::path> GoldenModelPaths();
std::vector<std::filesystem::path> PlainModelPaths();

// Parses and throws std::runtime_error with the diagnostics on failure.
RobotModel LoadModel(const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);

struct RandomModelOptions {
  int max_bodies = 20;  // excluding the root
  int max_loops = 5;
  bool couplings = false;
};

// A valid model: random tree (every link but the root has one parent among
// earlier-declared links, declaration order shuffled), random joint types and
// origins, and random loop joints between distinct bodies.
RobotModel RandomModel(std::mt19937& rng, const RandomModelOptions& options = {});

// reach[i][j]: j reachable from i by a path of length >= 0.
std::vector<std::vector<bool>> TransitiveClosure(const Digraph& d);

// SCC partition from mutual reachability; components sorted by smallest node.
std::vector<std::vector<int>> BruteForceComponents(const Digraph& d);

Digraph RandomDigraph(std::mt19937& rng, int nodes, double p);

// Central differences of LoopResidual with respect to the closure's
// involved coordinates, columns ordered as in ImplicitLoopJacobian.
Eigen::MatrixXd FiniteDifferenceLoopJacobian(const NumberedModel& model,
                                             const ConnectivityGraph& g, int l,
                                             const Eigen::VectorXd& q,
                                             double step);

}  // namespace urdfplus::testing

#endif  // URDFPLUS_TESTS_SUPPORT_H_
