// Copyright 2026 The locinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "locinv/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "locinv/error.hpp"
#include "locinv/sim.hpp"

namespace locinv {

namespace {

template <typename T>
T get_field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string(what) + " is missing \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string(what) + " has a malformed \"" + key + "\"");
  }
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Ptm ptm_from_json(const Json& j, int num_qubits, const std::string& name) {
  const auto rows = get_field<std::vector<std::vector<double>>>(j, "ptm", name.c_str());
  const std::size_t d = std::size_t{1} << (2 * num_qubits);
  if (rows.size() != d) throw InputError(name + " PTM must have " + std::to_string(d) + " rows");
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw InputError(name + " PTM row " + std::to_string(i) + " has the wrong length");
    for (std::size_t k = 0; k < d; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return Ptm(num_qubits, std::move(m));
}

GateKind kind_from_name(const std::string& name) {
  if (name == "CNOT" || name == "CX") return GateKind::kCnot;
  if (name == "SX") return GateKind::kSqrtX;
  if (name == "RZ") return GateKind::kZRot;
  if (name == "ID") return GateKind::kIdle;
  throw InputError("unknown gate \"" + name + "\"");
}

const char* kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::kCnot: return "CNOT";
    case GateKind::kSqrtX: return "SX";
    case GateKind::kZRot: return "RZ";
    case GateKind::kIdle: return "ID";
    case GateKind::kPauli: return "PAULI";
  }
  return "?";
}

}  // namespace

Json gate_to_json(const Gate& gate) {
  Json j;
  j["gate"] = gate.name();
  j["qubits"] = std::vector<int>(gate.qubits().begin(), gate.qubits().end());
  if (gate.kind() == GateKind::kZRot) j["theta"] = gate.theta();
  return j;
}

Gate gate_from_json(const Json& j) {
  const auto name = get_field<std::string>(j, "gate", "gate");
  const auto qubits = get_field<std::vector<int>>(j, "qubits", "gate");
  auto need = [&](std::size_t k) {
    if (qubits.size() != k) {
      throw InputError("gate " + name + " takes " + std::to_string(k) + " qubit(s), got " +
                       std::to_string(qubits.size()));
    }
  };
  if (name == "X" || name == "Y" || name == "Z") {
    need(1);
    return Gate::pauli(qubits[0], name == "X" ? Pauli::kX : name == "Y" ? Pauli::kY : Pauli::kZ);
  }
  switch (kind_from_name(name)) {
    case GateKind::kCnot: need(2); return Gate::cnot(qubits[0], qubits[1]);
    case GateKind::kSqrtX: need(1); return Gate::sqrt_x(qubits[0]);
    case GateKind::kZRot: need(1); return Gate::zrot(qubits[0], get_field<double>(j, "theta", "RZ gate"));
    default: need(1); return Gate::idle(qubits[0]);
  }
}

Circuit circuit_from_json(const Json& j, LayeringPolicy policy) {
  const int n = get_field<int>(j, "n", "circuit");
  auto gate_list = [](const Json& arr, const char* what) {
    if (!arr.is_array()) throw InputError(std::string(what) + " must be an array");
    std::vector<Gate> gates;
    for (const Json& g : arr) gates.push_back(gate_from_json(g));
    return gates;
  };
  if (j.contains("layers")) {
    const Json& arr = j.at("layers");
    if (!arr.is_array()) throw InputError("\"layers\" must be an array");
    std::vector<Layer> layers;
    for (const Json& l : arr) layers.emplace_back(gate_list(l, "layer"));
    return Circuit(n, std::move(layers));
  }
  if (j.contains("gates")) {
    const std::vector<Gate> gates = gate_list(j.at("gates"), "\"gates\"");
    std::vector<int> moments;
    if (j.contains("moments")) moments = get_field<std::vector<int>>(j, "moments", "circuit");
    return split_into_layers(gates, n, policy, moments);
  }
  throw InputError("circuit needs \"layers\" or \"gates\"");
}

Json circuit_to_json(const Circuit& circuit) {
  Json j;
  j["n"] = circuit.num_qubits();
  j["depth"] = circuit.depth();
  Json layers = Json::array();
  Json info = Json::array();
  for (int i = 1; i <= circuit.depth(); ++i) {
    const Layer& layer = circuit.layer(i);
    Json gates = Json::array();
    for (const Gate& g : layer.gates()) gates.push_back(gate_to_json(g));
    layers.push_back(std::move(gates));
    Json tag;
    tag["index"] = i;
    tag["kind"] = layer.is_twirl() ? "twirl" : layer.is_virtual() ? "virtual" : "physical";
    tag["frame"] = layer.has_frame() && !layer.is_virtual();
    tag["source"] = layer.origin().source;
    tag["block"] = layer.origin().block;
    tag["role"] = role_name(layer.origin().role);
    info.push_back(std::move(tag));
  }
  j["layers"] = std::move(layers);
  j["layer_info"] = std::move(info);
  return j;
}

ErrorModel noise_model_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("noise model must be a JSON object");
  if (j.value("ideal", false)) return ErrorModel::ideal();
  ErrorModel model;
  const auto gates = get_field<Json>(j, "gates", "noise model");
  if (!gates.is_object()) throw InputError("\"gates\" must be an object");
  for (const auto& [name, entry] : gates.items()) {
    const GateKind kind = kind_from_name(name);
    if (kind == GateKind::kZRot) throw InputError("RZ is virtual and carries no noise");
    model.set_gate(kind, ptm_from_json(entry, kind == GateKind::kCnot ? 2 : 1, name));
  }
  if (j.contains("degradation")) {
    const Json& list = j.at("degradation");
    if (!list.is_array()) throw InputError("\"degradation\" must be an array");
    for (const Json& d : list) {
      Degradation deg;
      deg.kind = kind_from_name(get_field<std::string>(d, "gate", "degradation entry"));
      deg.qubits = get_field<std::vector<int>>(d, "qubits", "degradation entry");
      deg.probabilities = get_field<std::vector<double>>(d, "p", "degradation entry");
      model.add_degradation(std::move(deg));
    }
  }
  return model;
}

Json noise_model_to_json(const ErrorModel& model) {
  Json j;
  if (model.is_ideal()) {
    j["ideal"] = true;
    return j;
  }
  Json gates = Json::object();
  for (const auto& [kind, ptm] : model.gates()) gates[kind_name(kind)]["ptm"] = matrix_to_json(ptm.matrix());
  j["gates"] = std::move(gates);
  Json deg = Json::array();
  for (const Degradation& d : model.degradation()) {
    deg.push_back({{"gate", kind_name(d.kind)}, {"qubits", d.qubits}, {"p", d.probabilities}});
  }
  if (!deg.empty()) j["degradation"] = std::move(deg);
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<CountsRow> read_counts_csv(std::istream& in) {
  std::vector<CountsRow> rows;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (!header) {
      const std::vector<std::string> expected = {"circuit_id", "context_id", "bitstring", "count"};
      if (fields != expected) throw InputError("counts CSV header must be circuit_id,context_id,bitstring,count");
      header = true;
      continue;
    }
    if (fields.size() != 4) throw InputError("counts CSV line " + std::to_string(line_no) + ": expected 4 fields");
    CountsRow row{fields[0], fields[1], fields[2], 0};
    parse_bitstring(row.bitstring);
    const std::string& c = fields[3];
    if (c.empty() || !std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw InputError("counts CSV line " + std::to_string(line_no) + ": bad count '" + c + "'");
    }
    row.count = std::stoull(c);
    rows.push_back(std::move(row));
  }
  if (!header) throw InputError("counts CSV is empty");
  return rows;
}

void write_counts_csv(std::ostream& out, const std::vector<CountsRow>& rows) {
  out << "circuit_id,context_id,bitstring,count\n";
  for (const CountsRow& r : rows) {
    out << r.circuit_id << ',' << r.context_id << ',' << r.bitstring << ',' << r.count << '\n';
  }
}

ContextCounts counts_from_rows(const std::vector<CountsRow>& rows) {
  if (rows.empty()) throw InputError("no count rows");
  std::vector<std::string> circuits;
  std::vector<std::string> contexts;
  std::map<std::string, int> circuit_index;
  std::map<std::string, int> context_index;
  const std::size_t width = rows.front().bitstring.size();
  for (const CountsRow& r : rows) {
    if (r.bitstring.size() != width) throw InputError("bitstrings differ in length");
    if (circuit_index.emplace(r.circuit_id, static_cast<int>(circuits.size())).second) circuits.push_back(r.circuit_id);
    if (context_index.emplace(r.context_id, static_cast<int>(contexts.size())).second) contexts.push_back(r.context_id);
  }
  if (width > 20) throw InputError("bitstrings longer than 20 bits are not supported");
  ContextCounts counts(static_cast<int>(circuits.size()), static_cast<int>(contexts.size()), 1 << width);
  counts.circuit_ids = circuits;
  counts.context_ids = contexts;
  for (const CountsRow& r : rows) {
    counts.at(circuit_index[r.circuit_id], context_index[r.context_id], static_cast<int>(parse_bitstring(r.bitstring))) +=
        r.count;
  }
  return counts;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

Json qfim_to_json(const Qfim& q) {
  Json j;
  j["matrix"] = matrix_to_json(q.matrix);
  j["eigenvalues"] = vector_to_json(q.eigenvalues);
  j["top_eigenvector"] = vector_to_json(q.top);
  j["dominant_layer"] = q.dominant_layer;
  return j;
}

std::string qfim_to_csv(const Qfim& q) {
  std::ostringstream out;
  out << "i,top_component,eigenvalue\n";
  for (Eigen::Index i = 0; i < q.top.size(); ++i) {
    out << i + 1 << ',' << format_number(q.top(i)) << ',' << format_number(q.eigenvalues(i)) << '\n';
  }
  return out.str();
}

Json report_to_json(const SensitivityReport& report) {
  Json j;
  j["num_qubits"] = report.num_qubits;
  j["depth"] = report.layers.size();
  j["m"] = report.repetitions;
  j["twirl"] = {{"enabled", report.twirl.enabled},
                {"instances", report.twirl.enabled ? report.twirl.instances : 0},
                {"seed", report.twirl.seed}};
  if (report.shots) {
    j["mode"] = "shots";
    j["shots"] = {{"per_context", report.shots->shots},
                  {"contexts", report.shots->contexts},
                  {"seed", report.shots->seed}};
    j["bootstrap"] = report.bootstrap;
  } else {
    j["mode"] = "exact";
    j["shots"] = nullptr;
    j["bootstrap"] = nullptr;
  }
  Json layers = Json::array();
  for (const LayerSensitivity& l : report.layers) {
    Json e;
    e["i"] = l.index;
    e["eta"] = l.eta;
    e["std"] = l.std ? Json(*l.std) : Json(nullptr);
    e["eta_ideal"] = l.eta_ideal ? Json(*l.eta_ideal) : Json(nullptr);
    e["virtual"] = l.is_virtual;
    e["twirl_suppressed"] = l.twirl_suppressed;
    layers.push_back(std::move(e));
  }
  j["layers"] = std::move(layers);
  j["dominant_layer"] = report.dominant_layer();
  j["pearson"] = report.pearson ? Json(*report.pearson) : Json(nullptr);
  j["qfim"] = report.qfim ? qfim_to_json(*report.qfim) : Json(nullptr);
  return j;
}

std::string report_to_csv(const SensitivityReport& report) {
  std::ostringstream out;
  out << "i,eta,std,eta_ideal,virtual\n";
  for (const LayerSensitivity& l : report.layers) {
    out << l.index << ',' << format_number(l.eta) << ',' << (l.std ? format_number(*l.std) : "") << ','
        << (l.eta_ideal ? format_number(*l.eta_ideal) : "") << ',' << (l.is_virtual ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

Json test_to_json(const ContextTest& t, const ContextCounts& counts) {
  Json j;
  Json ctx = Json::array();
  for (int s : t.contexts) ctx.push_back(counts.context_ids[static_cast<std::size_t>(s)]);
  j["contexts"] = std::move(ctx);
  j["alpha"] = t.alpha;
  j["lambda_agg"] = t.aggregate.lambda;
  j["k_agg"] = t.aggregate.dof;
  j["n_sigma"] = t.aggregate.n_sigma;
  j["n_sigma_threshold"] = t.n_sigma_threshold;
  j["aggregate_detected"] = t.aggregate_detected;
  j["beta"] = t.beta;
  Json rejected = Json::array();
  for (int q : t.ict.rejected) rejected.push_back(counts.circuit_ids[static_cast<std::size_t>(q)]);
  j["hochberg"] = {{"p_threshold", t.ict.threshold}, {"r_max", t.ict.r_max}, {"rejected", std::move(rejected)}};
  Json circuits = Json::array();
  for (std::size_t q = 0; q < t.lambdas.size(); ++q) {
    circuits.push_back({{"id", counts.circuit_ids[q]}, {"lambda", t.lambdas[q]}, {"pvalue", t.pvalues[q]}});
  }
  j["circuits"] = std::move(circuits);
  j["detected"] = t.detected();
  return j;
}

}  // namespace

Json drift_to_json(const DriftReport& report, const ContextCounts& counts) {
  Json j;
  j["alpha"] = report.alpha;
  j["comparisons"] = report.comparisons;
  j["comparison_alpha"] = report.comparison_alpha;
  j["detected"] = report.detected();
  j["joint"] = test_to_json(report.joint, counts);
  Json pairs = Json::array();
  for (const ContextTest& t : report.pairwise) pairs.push_back(test_to_json(t, counts));
  j["pairwise"] = std::move(pairs);
  j["pairwise_matrix"] = matrix_to_json(report.pairwise_matrix);
  return j;
}

std::string pairwise_csv(const DriftReport& report, const ContextCounts& counts) {
  std::ostringstream out;
  out << "context";
  for (const auto& id : counts.context_ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index a = 0; a < report.pairwise_matrix.rows(); ++a) {
    out << counts.context_ids[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < report.pairwise_matrix.cols(); ++b) {
      out << ',';
      if (a < b) out << format_number(report.pairwise_matrix(a, b));
      if (a > b) out << static_cast<long long>(report.pairwise_matrix(a, b));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace locinv
