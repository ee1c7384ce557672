// Copyright 2026 The DSS Toolkit Authors
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

#include "dss/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "dss/errors.hpp"
#include "dss/log.hpp"

namespace dss::io {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, const std::string& where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw DataError(where + ": not a number: '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) throw DataError(where + ": expected a matrix");
  const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index nc = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != nc) {
      throw DataError(where + ": ragged matrix at row " + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < nc; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw DataError(where + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

const char* kind_name(Primitive::Kind kind) {
  switch (kind) {
    case Primitive::Kind::kState: return "state";
    case Primitive::Kind::kControl: return "control";
    case Primitive::Kind::kConst: return "const";
    case Primitive::Kind::kProdStates: return "prod_states";
    case Primitive::Kind::kControlTimesState: return "control_state";
    case Primitive::Kind::kControlSquared: return "control_sq";
    case Primitive::Kind::kSin: return "sin";
    case Primitive::Kind::kCos: return "cos";
    case Primitive::Kind::kCosSq: return "cos_sq";
    case Primitive::Kind::kControlCos: return "control_cos";
    case Primitive::Kind::kControlSin: return "control_sin";
    case Primitive::Kind::kSatCosSqControl: return "sat_cos_sq_control";
  }
  throw DataError("basis: unknown primitive kind");
}

Primitive::Kind kind_from_name(const std::string& name) {
  static const std::pair<const char*, Primitive::Kind> kTable[] = {
      {"state", Primitive::Kind::kState},
      {"control", Primitive::Kind::kControl},
      {"const", Primitive::Kind::kConst},
      {"prod_states", Primitive::Kind::kProdStates},
      {"control_state", Primitive::Kind::kControlTimesState},
      {"control_sq", Primitive::Kind::kControlSquared},
      {"sin", Primitive::Kind::kSin},
      {"cos", Primitive::Kind::kCos},
      {"cos_sq", Primitive::Kind::kCosSq},
      {"control_cos", Primitive::Kind::kControlCos},
      {"control_sin", Primitive::Kind::kControlSin},
      {"sat_cos_sq_control", Primitive::Kind::kSatCosSqControl},
  };
  for (const auto& [key, kind] : kTable) {
    if (name == key) return kind;
  }
  throw DataError("basis: unknown primitive kind '" + name + "'");
}

json basis_to_json(const BasisSpec& basis) {
  json entries = json::array();
  for (const Primitive& p : basis.entries()) {
    json e;
    e["fn"] = kind_name(p.kind);
    if (p.i >= 0) e["i"] = p.i;
    if (p.j >= 0) e["j"] = p.j;
    if (p.kind == Primitive::Kind::kSatCosSqControl) e["param"] = p.param;
    entries.push_back(std::move(e));
  }
  json out;
  out["id"] = basis.id();
  out["state_dim"] = basis.state_dim();
  out["angle_dims"] = basis.angle_dims();
  out["entries"] = std::move(entries);
  return out;
}

BasisSpec basis_from_json(const json& j) {
  std::vector<Primitive> entries;
  for (const json& e : j.at("entries")) {
    Primitive p;
    p.kind = kind_from_name(e.at("fn").get<std::string>());
    p.i = e.value("i", -1);
    p.j = e.value("j", -1);
    p.param = e.value("param", 0.0);
    entries.push_back(p);
  }
  return BasisSpec(j.at("id").get<std::string>(), j.at("state_dim").get<int>(),
                   std::move(entries), j.value("angle_dims", std::vector<int>{}));
}

json operator_to_json(const KoopmanOperator& op) {
  json out;
  out["matrix"] = matrix_to_json(op.matrix);
  out["basis_id"] = op.basis_id;
  out["residual"] = op.residual;
  out["window"] = {{"trial_id", op.window.trial_id},
                   {"start", op.window.start},
                   {"length", op.window.length}};
  return out;
}

KoopmanOperator operator_from_json(const json& j, const std::string& where) {
  KoopmanOperator op;
  op.matrix = matrix_from_json(j.at("matrix"), where);
  op.basis_id = j.value("basis_id", std::string());
  op.residual = j.value("residual", 0.0);
  if (j.contains("window")) {
    const json& w = j["window"];
    op.window.trial_id = w.value("trial_id", std::string());
    op.window.start = w.value("start", Eigen::Index{0});
    op.window.length = w.value("length", Eigen::Index{0});
  }
  return op;
}

json svm_to_json(const SvmModel& svm) {
  json binaries = json::array();
  for (const BinarySvm& bin : svm.binaries) {
    json b;
    b["class_a"] = bin.class_a;
    b["class_b"] = bin.class_b;
    b["sv_index"] = bin.sv_index;
    b["coef"] = vector_to_json(bin.coef);
    b["rho"] = bin.rho;
    binaries.push_back(std::move(b));
  }
  json out;
  out["mean"] = vector_to_json(svm.mean);
  out["scale"] = vector_to_json(svm.scale);
  out["gamma"] = svm.gamma;
  out["c"] = svm.c;
  out["classes"] = svm.classes;
  out["degenerate"] = svm.degenerate;
  out["support_vectors"] = matrix_to_json(svm.support_vectors);
  out["binaries"] = std::move(binaries);
  return out;
}

SvmModel svm_from_json(const json& j) {
  SvmModel svm;
  svm.mean = vector_from_json(j.at("mean"), "model.svm.mean");
  svm.scale = vector_from_json(j.at("scale"), "model.svm.scale");
  svm.gamma = j.at("gamma").get<double>();
  svm.c = j.at("c").get<double>();
  svm.classes = j.at("classes").get<std::vector<int>>();
  svm.degenerate = j.value("degenerate", false);
  if (j.at("support_vectors").empty()) {
    svm.support_vectors.resize(0, svm.mean.size());
  } else {
    svm.support_vectors = matrix_from_json(j["support_vectors"], "model.svm.support_vectors");
  }
  for (const json& b : j.at("binaries")) {
    BinarySvm bin;
    bin.class_a = b.at("class_a").get<int>();
    bin.class_b = b.at("class_b").get<int>();
    bin.sv_index = b.at("sv_index").get<std::vector<Eigen::Index>>();
    bin.coef = vector_from_json(b.at("coef"), "model.svm.binaries.coef");
    bin.rho = b.at("rho").get<double>();
    svm.binaries.push_back(std::move(bin));
  }
  return svm;
}

json params_to_json(const SegmentationParams& p) {
  json out;
  out["window"] = {{"size", p.window.size}, {"overlap", p.window.overlap}};
  out["min_cluster_size"] = p.min_cluster_size;
  out["svm"] = {{"c", p.svm.c},
                {"gamma", p.svm.gamma},
                {"tolerance", p.svm.tolerance},
                {"max_iter", p.svm.max_iter}};
  out["svm_max_per_class"] = p.svm_max_per_class;
  return out;
}

SegmentationParams params_from_json(const json& j) {
  SegmentationParams p;
  if (j.contains("window")) {
    p.window.size = j["window"].value("size", p.window.size);
    p.window.overlap = j["window"].value("overlap", p.window.overlap);
  }
  p.min_cluster_size = j.value("min_cluster_size", p.min_cluster_size);
  if (j.contains("svm")) {
    const json& s = j["svm"];
    p.svm.c = s.value("c", p.svm.c);
    p.svm.gamma = s.value("gamma", p.svm.gamma);
    p.svm.tolerance = s.value("tolerance", p.svm.tolerance);
    p.svm.max_iter = s.value("max_iter", p.svm.max_iter);
  }
  p.svm_max_per_class = j.value("svm_max_per_class", p.svm_max_per_class);
  return p;
}

json sim_params_to_json(const SimParams& p) {
  return json{{"length", p.length},
              {"gravity", p.gravity},
              {"damping", p.damping},
              {"u_sat", p.u_sat},
              {"dt", p.dt}};
}

SimParams sim_params_from_json(const json& j) {
  SimParams p;
  p.length = j.value("length", p.length);
  p.gravity = j.value("gravity", p.gravity);
  p.damping = j.value("damping", p.damping);
  p.u_sat = j.value("u_sat", p.u_sat);
  p.dt = j.value("dt", p.dt);
  return p;
}

json load_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw DataError(std::string(what) + ": cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DataError(std::string(what) + ": " + path.string() + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text,
                     const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(std::string(what) + ": cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError(std::string(what) + ": write failed for " + path.string());
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
  if (trajectory.size() == 0) throw std::invalid_argument("write_trajectory_csv: empty trajectory");
  if (trajectory.state_dim() != 4) {
    throw std::invalid_argument("write_trajectory_csv: expected 4 state columns");
  }
  std::string text = "t,theta,x_c,theta_dot,xc_dot,u\n";
  for (Eigen::Index k = 0; k < trajectory.size(); ++k) {
    const double t = trajectory.t0 + static_cast<double>(k) * trajectory.dt;
    text += fmt17(t);
    for (Eigen::Index c = 0; c < 4; ++c) {
      text += ',';
      text += fmt17(trajectory.states(k, c));
    }
    text += ',';
    text += fmt17(trajectory.controls(k));
    text += '\n';
  }
  write_text_file(path, text, "trajectory");
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("trajectory: cannot open " + path.string());
  const std::string tag = path.filename().string();

  std::string line;
  if (!std::getline(in, line)) throw DataError("trajectory: " + tag + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,theta,x_c,theta_dot,xc_dot,u") {
    throw DataError("trajectory: " + tag + ": row 1: bad header '" + line + "'");
  }

  static const char* kColumns[] = {"t", "theta", "x_c", "theta_dot", "xc_dot", "u"};
  std::vector<std::array<double, 6>> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw DataError("trajectory: " + tag + ": row " + std::to_string(row_no) + ": expected 6 columns, got " +
                      std::to_string(fields.size()));
    }
    std::array<double, 6> values{};
    for (std::size_t c = 0; c < 6; ++c) {
      values[c] = parse_double(fields[c], "trajectory: " + tag + ": row " + std::to_string(row_no) +
                                              ": column " + kColumns[c]);
    }
    rows.push_back(values);
  }
  if (rows.empty()) throw DataError("trajectory: " + tag + ": no samples");

  Trajectory trajectory;
  trajectory.states.resize(static_cast<Eigen::Index>(rows.size()), 4);
  trajectory.controls.resize(static_cast<Eigen::Index>(rows.size()));
  trajectory.t0 = rows.front()[0];
  trajectory.dt = rows.size() > 1 ? rows[1][0] - rows[0][0] : 0.0;
  trajectory.trial_id = path.stem().string();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0) {
      const double gap = rows[r][0] - rows[r - 1][0];
      if (std::abs(gap - trajectory.dt) > 1e-9 * std::max(1.0, std::abs(trajectory.dt))) {
        throw DataError("trajectory: " + tag + ": row " + std::to_string(r + 2) +
                        ": non-uniform time step");
      }
    }
    for (std::size_t c = 0; c < 4; ++c) {
      trajectory.states(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c + 1];
    }
    trajectory.controls(static_cast<Eigen::Index>(r)) = rows[r][5];
  }
  return trajectory;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  json trials = json::array();
  for (const ManifestEntry& e : manifest.entries) {
    trials.push_back({{"file", e.file},
                      {"trial_id", e.trial_id},
                      {"agent_tag", e.agent_tag},
                      {"seed", e.seed},
                      {"samples", e.samples}});
  }
  json j;
  j["schema_version"] = manifest.schema_version;
  j["seed"] = manifest.seed;
  j["params"] = sim_params_to_json(manifest.params);
  j["trials"] = std::move(trials);
  write_text_file(path, j.dump(2) + "\n", "manifest");
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  const json j = load_json_file(path, "manifest");
  DatasetManifest manifest;
  manifest.schema_version = j.value("schema_version", 0);
  if (manifest.schema_version != kSchemaVersion) {
    throw DataError("manifest: unsupported schema_version " +
                    std::to_string(manifest.schema_version));
  }
  manifest.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("params")) manifest.params = sim_params_from_json(j["params"]);
  for (const json& t : j.value("trials", json::array())) {
    ManifestEntry e;
    e.file = t.at("file").get<std::string>();
    e.trial_id = t.value("trial_id", std::string());
    e.agent_tag = t.value("agent_tag", std::string());
    e.seed = t.value("seed", std::uint64_t{0});
    e.samples = t.value("samples", Eigen::Index{0});
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

DatasetManifest save_dataset(const std::filesystem::path& dir,
                             const std::vector<Trajectory>& trials, const SimParams& params,
                             std::uint64_t seed) {
  if (trials.empty()) throw std::invalid_argument("save_dataset: no trials");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("save_dataset: cannot create " + dir.string() + ": " + ec.message());

  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.params = params;
  for (const Trajectory& trial : trials) {
    const std::string file = trial.trial_id + ".csv";
    write_trajectory_csv(dir / file, trial);
    manifest.entries.push_back({file, trial.trial_id, trial.agent_tag, trial.seed, trial.size()});
  }
  write_manifest(dir / "manifest.json", manifest);
  return manifest;
}

std::vector<Trajectory> load_dataset(const std::filesystem::path& dir,
                                     DatasetManifest* manifest_out) {
  const DatasetManifest manifest = read_manifest(dir / "manifest.json");
  std::vector<Trajectory> trials;
  trials.reserve(manifest.entries.size());
  for (const ManifestEntry& e : manifest.entries) {
    Trajectory t = read_trajectory_csv(dir / e.file);
    t.trial_id = e.trial_id;
    t.agent_tag = e.agent_tag;
    t.seed = e.seed;
    if (e.samples > 0 && t.size() != e.samples) {
      throw DataError("dataset: " + e.file + ": manifest lists " + std::to_string(e.samples) +
                      " samples, file has " + std::to_string(t.size()));
    }
    trials.push_back(std::move(t));
  }
  if (manifest_out) *manifest_out = manifest;
  return trials;
}

void save_model(const std::filesystem::path& path, const DssModel& model) {
  json exemplars = json::array();
  for (const KoopmanOperator& op : model.exemplars().exemplars) {
    exemplars.push_back(operator_to_json(op));
  }
  json edges = json::array();
  for (const auto& [from, to] : model.graph.edges) edges.push_back({from, to});

  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "dss-model";
  j["basis"] = basis_to_json(model.basis);
  j["graph"] = {{"nodes", std::move(exemplars)},
                {"edges", std::move(edges)},
                {"distribution",
                 {{"probabilities", vector_to_json(model.graph.distribution.probabilities)},
                  {"counts", model.graph.distribution.counts}}}};
  j["svm"] = svm_to_json(model.svm);
  j["params"] = params_to_json(model.params);
  j["seed"] = model.seed;
  write_text_file(path, j.dump(2) + "\n", "model");
}

DssModel load_model(const std::filesystem::path& path) {
  const json j = load_json_file(path, "model");
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw DataError("model: unsupported schema_version");
  }
  if (j.value("kind", std::string()) != "dss-model") {
    throw DataError("model: not a dss-model document");
  }
  try {
    BasisSpec basis = basis_from_json(j.at("basis"));
    SvmModel svm = svm_from_json(j.at("svm"));

    const json& g = j.at("graph");
    ExemplarSet exemplars;
    for (const json& node : g.at("nodes")) {
      exemplars.exemplars.push_back(operator_from_json(node, "model.graph.nodes"));
    }
    BehaviorGraph graph;
    graph.nodes = std::move(exemplars);
    for (const json& e : g.at("edges")) {
      graph.edges.insert({e.at(0).get<int>(), e.at(1).get<int>()});
    }
    graph.distribution.probabilities =
        vector_from_json(g.at("distribution").at("probabilities"), "model.graph.distribution");
    graph.distribution.counts =
        g.at("distribution").value("counts", std::vector<Eigen::Index>{});

    SegmentationParams params = params_from_json(j.value("params", json::object()));
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    return DssModel(std::move(basis), std::move(svm), std::move(graph), params, seed);
  } catch (const json::exception& e) {
    throw DataError("model: " + path.string() + ": " + e.what());
  }
}

void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRow>& rows) {
  std::string text = "subject,session,kl,mse,samples\n";
  for (const ScoreRow& row : rows) {
    text += row.subject + ',' + row.session + ',' + fmt17(row.kl) + ',' + fmt17(row.mse) + ',' +
            std::to_string(row.samples) + '\n';
  }
  write_text_file(path, text, "scores");
}

std::string describe_graph(const BehaviorGraph& graph) {
  std::ostringstream out;
  out << "behavior graph: " << graph.num_classes() << " nodes, " << graph.edges.size()
      << " edges\n";
  for (int j = 0; j < graph.num_classes(); ++j) {
    const KoopmanOperator& op = graph.nodes.exemplars[static_cast<std::size_t>(j)];
    out << "  node " << j << ": p = " << graph.distribution.probabilities(j)
        << ", operator " << op.matrix.rows() << "x" << op.matrix.cols()
        << ", frobenius " << op.matrix.norm() << "\n";
  }
  out << "  edges:";
  for (const auto& [from, to] : graph.edges) out << " " << from << "->" << to;
  out << "\n";
  return out.str();
}

}  // namespace dss::io
