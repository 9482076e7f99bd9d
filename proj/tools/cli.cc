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

#include "cli.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "urdfplus/constraints.h"
#include "urdfplus/error.h"
#include "urdfplus/graph.h"
#include "urdfplus/urdf_xml.h"

namespace urdfplus::cli {
namespace {

struct Options {
  std::string path;
  std::string kind = "cg";
  std::string out_path;
  std::string config_path;
  bool json = false;
  bool strict = false;
  double tolerance = kDefaultRankTolerance;
};

class Runner {
 public:
  Runner(const Options& opts, std::ostream& out, std::ostream& err)
      : opts_(opts), out_(out), err_(err) {}

  int Validate();
  int Graph();
  int Constraints();
  int Info();

 private:
  // Prints diagnostics; returns the model when parsing succeeded.
  std::optional<RobotModel> Parse() {
    ParseResult result = ParseUrdfPlusFile(opts_.path);
    for (const ParseDiagnostic& d : result.diagnostics) {
      err_ << opts_.path << ":" << d.ToString() << "\n";
    }
    return std::move(result.model);
  }

  bool ReportViolations(const ValidationReport& report, bool as_warnings) {
    for (const Violation& v : report.violations) {
      err_ << opts_.path << ": " << (as_warnings ? "warning" : "error") << ": "
           << ViolationCodeName(v.code) << ": " << v.message << "\n";
    }
    return report.ok();
  }

  // parse -> validate -> graphs; sets status_ on failure.
  std::optional<SystemGraphs> Pipeline() {
    std::optional<RobotModel> model = Parse();
    if (!model) {
      status_ = kExitParse;
      return std::nullopt;
    }
    if (!ReportViolations(ValidateModel(*model), false)) {
      status_ = kExitInvalid;
      return std::nullopt;
    }
    try {
      return BuildSystemGraphs(*model);
    } catch (const Error& e) {
      err_ << opts_.path << ": error: " << ErrorCodeName(e.code()) << ": "
           << e.what() << "\n";
      status_ = kExitInvalid;
      return std::nullopt;
    }
  }

  std::optional<Eigen::VectorXd> Configuration(const SystemGraphs& system) {
    const int n = MakeCoordinateLayout(system.numbered).size;
    if (opts_.config_path.empty()) return Eigen::VectorXd::Zero(n);
    std::ifstream in(opts_.config_path, std::ios::binary);
    if (!in) {
      err_ << opts_.config_path << ": error: cannot read configuration file\n";
      status_ = kExitParse;
      return std::nullopt;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      return ParseConfiguration(text.str(), system.numbered);
    } catch (const Error& e) {
      err_ << opts_.config_path << ": error: " << e.what() << "\n";
      status_ = kExitParse;
      return std::nullopt;
    }
  }

  std::optional<ConstraintReport> Analyze(const SystemGraphs& system,
                                          const Eigen::VectorXd& q) {
    AnalysisOptions options;
    options.rank_tolerance = opts_.tolerance;
    try {
      return AnalyzeConstraints(system, q, options);
    } catch (const Error& e) {
      err_ << opts_.path << ": error: " << ErrorCodeName(e.code()) << ": "
           << e.what() << "\n";
      status_ = kExitInvalid;
      return std::nullopt;
    }
  }

  void Warnings(const ConstraintReport& report) {
    for (const std::string& w : report.warnings) {
      err_ << opts_.path << ": warning: " << w << "\n";
    }
  }

  bool CheckFailed(const ConstraintReport& report) {
    if (report.check.passed) return false;
    err_ << opts_.path << ": error: independent coordinates: "
         << report.check.message << "\n";
    return true;
  }

  const Options& opts_;
  std::ostream& out_;
  std::ostream& err_;
  int status_ = kExitOk;
};

int Runner::Validate() {
  auto system = Pipeline();
  if (!system) return status_;
  auto q = Configuration(*system);
  if (!q) return status_;
  auto report = Analyze(*system, *q);
  if (!report) return status_;
  Warnings(*report);
  if (CheckFailed(*report)) return kExitInvalid;
  const RobotModel& m = system->numbered.model;
  out_ << opts_.path << ": ok: robot '" << m.name << "', " << m.links.size()
       << " links, " << m.tree_joints.size() << " joints, "
       << m.loop_joints.size() << " loops, " << m.couplings.size()
       << " couplings, n=" << report->n << ", n_c=" << report->n_c
       << ", n_i=" << report->n_i << "\n";
  return kExitOk;
}

int Runner::Graph() {
  static const std::map<std::string, GraphKind> kKinds = {
      {"cg", GraphKind::kConnectivity},
      {"cdd", GraphKind::kDependency},
      {"lacg", GraphKind::kAggregated}};
  auto system = Pipeline();
  if (!system) return status_;
  const std::string dot = ExportDot(*system, kKinds.at(opts_.kind));
  if (opts_.out_path.empty()) {
    out_ << dot;
    return kExitOk;
  }
  std::ofstream file(opts_.out_path, std::ios::binary);
  file << dot;
  if (!file) {
    err_ << opts_.out_path << ": error: cannot write output file\n";
    return kExitUsage;
  }
  out_ << "wrote " << opts_.out_path << "\n";
  return kExitOk;
}

int Runner::Constraints() {
  auto system = Pipeline();
  if (!system) return status_;
  auto q = Configuration(*system);
  if (!q) return status_;
  auto report = Analyze(*system, *q);
  if (!report) return status_;
  out_ << (opts_.json ? ReportToJson(*report) : FormatReport(*report));
  Warnings(*report);
  if (CheckFailed(*report)) return kExitInvalid;
  if (opts_.strict && !(report->max_residual <= 1e-6)) {
    err_ << opts_.path << ": error: closure residual exceeds 1e-6 (--strict)\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int Runner::Info() {
  std::optional<RobotModel> model = Parse();
  if (!model) return kExitParse;
  const ValidationReport validation = ValidateModel(*model);
  ReportViolations(validation, true);
  out_ << "robot: " << model->name << "\n";
  out_ << "links: " << model->links.size() << "\n";
  out_ << "joints: " << model->tree_joints.size() << "\n";
  out_ << "loops: " << model->loop_joints.size() << "\n";
  out_ << "couplings: " << model->couplings.size() << "\n";
  if (!validation.ok()) return kExitOk;

  NumberedModel nm;
  try {
    nm = RegularNumbering(*model);
  } catch (const Error& e) {
    err_ << opts_.path << ": warning: " << e.what() << "\n";
    return kExitOk;
  }
  const DofCount count = CountDegreesOfFreedom(nm);
  out_ << "root: " << nm.body_names[0] << "\n";
  out_ << "n: " << count.n << "\n";
  out_ << "n_c: " << count.n_c << "\n";
  out_ << "numbering:\n";
  out_ << "  0 " << nm.body_names[0] << " (root)\n";
  for (int i = 1; i <= nm.num_bodies(); ++i) {
    const TreeJoint& j = nm.joint_of_body(i);
    out_ << "  " << i << " " << nm.body_names[i] << " <- " << j.name << " ("
         << JointTypeName(j.model.type) << ", parent " << nm.parent[i] << ")\n";
  }
  for (int l = 0; l < nm.num_closures(); ++l) {
    const ClosureRef& ref = nm.closures[l];
    out_ << "  " << nm.ClosureJointNumber(l) << " " << nm.ClosureName(l) << " (";
    if (ref.kind == ClosureKind::kLoop) {
      out_ << "loop " << JointTypeName(model->loop_joints[ref.position].model.type);
    } else {
      out_ << "coupling";
    }
    out_ << ": " << nm.ClosurePredecessor(l) << " -> " << nm.ClosureSuccessor(l)
         << ")\n";
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Options opts;
  CLI::App app{"URDF+ parser, validator and constraint-graph tool", "urdfplus"};
  app.set_version_flag("--version",
                       std::string("urdfplus ") + URDFPLUS_VERSION + " (" +
                           URDFPLUS_FORMAT_VERSION + ")");
  app.require_subcommand(1);

  auto* validate = app.add_subcommand(
      "validate", "Run the full pipeline and report violations");
  auto* graph = app.add_subcommand("graph", "Export a graph stage as DOT");
  auto* constraints = app.add_subcommand(
      "constraints", "Print constraint dimensions, ranks and G");
  auto* info = app.add_subcommand("info", "Summarize a model");
  for (auto* sub : {validate, graph, constraints, info}) {
    sub->add_option("file", opts.path, "URDF or URDF+ file")->required();
  }
  for (auto* sub : {validate, constraints}) {
    sub->add_option("--config", opts.config_path,
                    "Configuration file with 'joint: values' lines");
    sub->add_option("--tolerance", opts.tolerance,
                    "Relative rank tolerance (default 1e-10)")
        ->check(CLI::PositiveNumber);
  }
  graph->add_option("--kind", opts.kind, "Graph stage")
      ->check(CLI::IsMember({"cg", "cdd", "lacg"}));
  graph->add_option("--out", opts.out_path, "Write DOT here instead of stdout");
  constraints->add_flag("--json", opts.json, "Emit JSON");
  constraints->add_flag("--strict", opts.strict,
                        "Fail when a closure residual exceeds 1e-6");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "urdfplus: " << e.what() << "\n";
    err << "run 'urdfplus --help' for usage\n";
    return kExitUsage;
  }

  Runner runner(opts, out, err);
  if (validate->parsed()) return runner.Validate();
  if (graph->parsed()) return runner.Graph();
  if (constraints->parsed()) return runner.Constraints();
  return runner.Info();
}

}  // namespace urdfplus::cli
