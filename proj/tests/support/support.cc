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

#include "support.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "urdfplus/constraints.h"
#include "urdfplus/urdf_xml.h"

namespace urdfplus::testing {

std::filesystem::path ModelsDir() { return URDFPLUS_MODELS_DIR; }
std::filesystem::path DataDir() { return URDFPLUS_TEST_DATA_DIR; }

std::vector<std::filesystem::path> GoldenModelPaths() {
  const auto dir = ModelsDir();
  return {dir / "wrist.urdf", dir / "belt.urdf", dir / "four_bar.urdf",
          dir / "nested_loops.urdf", dir / "overlapping_loops.urdf"};
}

std::vector<std::filesystem::path> PlainModelPaths() {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(ModelsDir() / "plain")) {
    if (entry.path().extension() == ".urdf") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

RobotModel LoadModel(const std::filesystem::path& path) {
  ParseResult result = ParseUrdfPlusFile(path);
  if (!result.ok()) {
    std::string msg = "failed to parse " + path.string();
    for (const auto& d : result.diagnostics) msg += "\n" + d.ToString();
    throw std::runtime_error(msg);
  }
  return std::move(*result.model);
}

namespace {

Vec3 RandomUnit(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-3);
  return v.normalized();
}

Pose RandomPose(std::mt19937& rng) {
  std::uniform_real_distribution<double> pos(-0.5, 0.5);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  Pose p;
  p.xyz = Vec3(pos(rng), pos(rng), pos(rng));
  p.rpy = Vec3(ang(rng), ang(rng) / 2, ang(rng));
  return p;
}

JointType RandomTreeType(std::mt19937& rng) {
  static const JointType kTypes[] = {
      JointType::kRevolute, JointType::kRevolute,   JointType::kContinuous,
      JointType::kPrismatic, JointType::kUniversal, JointType::kFixed,
      JointType::kFloating};
  std::uniform_int_distribution<int> pick(0, 6);
  JointType t = kTypes[pick(rng)];
  // Keep floating joints rare.
  if (t == JointType::kFloating && pick(rng) > 1) t = JointType::kRevolute;
  return t;
}

JointType RandomLoopType(std::mt19937& rng) {
  static const JointType kTypes[] = {JointType::kRevolute, JointType::kPrismatic,
                                     JointType::kUniversal, JointType::kFixed,
                                     JointType::kContinuous};
  std::uniform_int_distribution<int> pick(0, 4);
  return kTypes[pick(rng)];
}

}  // namespace

RobotModel RandomModel(std::mt19937& rng, const RandomModelOptions& options) {
  std::uniform_int_distribution<int> body_count(1, options.max_bodies);
  const int nb = body_count(rng);
  RobotModel m;
  m.name = "random";
  for (int i = 0; i <= nb; ++i) m.links.push_back({"l" + std::to_string(i), {}, {}});

  std::vector<int> parent(nb + 1, -1);
  for (int i = 1; i <= nb; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    parent[i] = pick(rng);
    TreeJoint j;
    j.name = "j" + std::to_string(i);
    const JointType type = RandomTreeType(rng);
    const Vec3 axis = RandomUnit(rng);
    std::optional<Vec3> axis2;
    if (type == JointType::kUniversal) {
      const Vec3 r = axis.cross(RandomUnit(rng));
      if (r.norm() > 0.1) axis2 = r.normalized();
    }
    j.model = MakeJointModel(type, axis, axis2);
    j.parent = "l" + std::to_string(parent[i]);
    j.child = "l" + std::to_string(i);
    j.origin = RandomPose(rng);
    m.tree_joints.push_back(std::move(j));
  }
  std::shuffle(m.tree_joints.begin(), m.tree_joints.end(), rng);
  std::shuffle(m.links.begin() + 1, m.links.end(), rng);

  std::uniform_int_distribution<int> loop_count(0, options.max_loops);
  std::uniform_int_distribution<int> body(0, nb);
  const int nl = nb >= 1 ? loop_count(rng) : 0;
  for (int l = 0; l < nl; ++l) {
    int p = body(rng);
    int s = body(rng);
    while (s == p) s = body(rng);
    LoopJoint loop;
    loop.name = "loop" + std::to_string(l);
    loop.model = MakeJointModel(RandomLoopType(rng), RandomUnit(rng));
    loop.predecessor = "l" + std::to_string(p);
    loop.successor = "l" + std::to_string(s);
    loop.predecessor_origin = RandomPose(rng);
    loop.successor_origin = RandomPose(rng);
    m.loop_joints.push_back(std::move(loop));
  }

  if (options.couplings && m.links.size() > 2) {
    // Couplings need every joint on both path subchains to be rotary 1-DoF.
    std::map<std::string, const TreeJoint*> joint_of;
    for (const TreeJoint& j : m.tree_joints) joint_of[j.child] = &j;
    const auto path_to_root = [&](std::string link) {
      std::vector<std::string> path{link};
      while (joint_of.count(link)) {
        link = joint_of[link]->parent;
        path.push_back(link);
      }
      return path;
    };
    const auto rotary_between = [&](const std::string& a, const std::string& b) {
      const auto pa = path_to_root(a), pb = path_to_root(b);
      const std::set<std::string> on_b(pb.begin(), pb.end());
      std::string nca;
      for (const std::string& l : pa) {
        if (on_b.count(l)) {
          nca = l;
          break;
        }
      }
      for (const auto* path : {&pa, &pb}) {
        for (const std::string& l : *path) {
          if (l == nca) break;
          const JointModel& jm = joint_of[l]->model;
          if (jm.dof() != 1 || JointMotionKind(jm.type) != MotionKind::kRotation) {
            return false;
          }
        }
      }
      return true;
    };
    std::uniform_int_distribution<std::size_t> pick(1, m.links.size() - 1);
    std::uniform_real_distribution<double> ratio(0.5, 3.0);
    for (int attempt = 0; attempt < 20 && m.couplings.size() < 2; ++attempt) {
      const std::string a = m.links[pick(rng)].name, b = m.links[pick(rng)].name;
      if (a == b || !rotary_between(a, b)) continue;
      m.couplings.push_back(
          {"c" + std::to_string(m.couplings.size()), a, b, ratio(rng)});
    }
  }
  return m;
}

std::vector<std::vector<bool>> TransitiveClosure(const Digraph& d) {
  const int n = d.num_nodes;
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) r[i][i] = true;
  for (const auto& [a, b] : d.edges) r[a][b] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

std::vector<std::vector<int>> BruteForceComponents(const Digraph& d) {
  const auto r = TransitiveClosure(d);
  std::vector<bool> placed(d.num_nodes, false);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < d.num_nodes; ++i) {
    if (placed[i]) continue;
    std::vector<int> c;
    for (int j = i; j < d.num_nodes; ++j) {
      if (r[i][j] && r[j][i]) {
        c.push_back(j);
        placed[j] = true;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

Digraph RandomDigraph(std::mt19937& rng, int nodes, double p) {
  std::bernoulli_distribution edge(p);
  Digraph d{nodes, {}};
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      if (edge(rng)) d.edges.emplace_back(i, j);  // self loops included
    }
  }
  return d;
}

Eigen::MatrixXd FiniteDifferenceLoopJacobian(const NumberedModel& model,
                                             const ConnectivityGraph& g, int l,
                                             const Eigen::VectorXd& q,
                                             double step) {
  // Involved joints: bodies on either endpoint's path to the common
  // ancestor, found by marking the predecessor's ancestors.
  const LoopEdge& e = g.loop(l);
  std::vector<int> up_p;
  for (int b = e.predecessor; b >= 0; b = model.parent[b]) up_p.push_back(b);
  std::vector<int> up_s;
  for (int b = e.successor; b >= 0; b = model.parent[b]) up_s.push_back(b);
  std::vector<int> involved;
  for (int b : up_p) {
    if (std::find(up_s.begin(), up_s.end(), b) == up_s.end()) involved.push_back(b);
  }
  for (int b : up_s) {
    if (std::find(up_p.begin(), up_p.end(), b) == up_p.end()) involved.push_back(b);
  }
  std::sort(involved.begin(), involved.end());

  const CoordinateLayout layout = MakeCoordinateLayout(model);
  std::vector<int> coords;
  for (int b : involved) {
    for (int k = 0; k < layout.dof[b]; ++k) coords.push_back(layout.offset[b] + k);
  }
  const Eigen::VectorXd phi0 = LoopResidual(model, g, l, q);
  Eigen::MatrixXd fd(phi0.size(), coords.size());
  for (std::size_t c = 0; c < coords.size(); ++c) {
    Eigen::VectorXd qp = q;
    Eigen::VectorXd qm = q;
    qp[coords[c]] += step;
    qm[coords[c]] -= step;
    fd.col(c) = (LoopResidual(model, g, l, qp) - LoopResidual(model, g, l, qm)) /
                (2.0 * step);
  }
  return fd;
}

}  // namespace urdfplus::testing
