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

#include "locinv/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "locinv/analysis.hpp"
#include "locinv/drift.hpp"
#include "locinv/error.hpp"
#include "locinv/fixtures.hpp"
#include "locinv/io.hpp"

namespace locinv {

namespace {

struct Source {
  std::string circuit;
  std::string fixture;
  std::string layering = "segregate";
};

struct RunConfig {
  Source source;
  std::string noise;
  int m = 1;
  bool twirl = false;
  int twirl_instances = 100;
  std::uint64_t shots = 0;
  int contexts = 6;
  std::uint64_t seed = 0;
  int bootstrap = 1000;
  std::string out;
};

void add_source(CLI::App* cmd, Source& s) {
  auto* c = cmd->add_option("--circuit", s.circuit, "Circuit JSON file");
  auto* f = cmd->add_option("--fixture", s.fixture, "Built-in circuit: qaoa4-opt, qaoa4-random, qft4, qft4-degraded, qft3");
  c->excludes(f);
  cmd->add_option("--layering", s.layering, "Layering of flat gate lists")
      ->check(CLI::IsMember({"segregate", "fold"}));
}

void add_run(CLI::App* cmd, RunConfig& c) {
  add_source(cmd, c.source);
  cmd->add_option("--noise", c.noise, "Noise model JSON, or 'gst' / 'ideal'");
  cmd->add_option("--m", c.m, "Inversion repetitions")->check(CLI::PositiveNumber);
  cmd->add_flag("--twirl", c.twirl, "Pauli-twirl the inverted layer");
  cmd->add_option("--twirl-instances", c.twirl_instances, "Twirl instances per layer")->check(CLI::PositiveNumber);
  cmd->add_option("--shots", c.shots, "Shots per circuit per context (0: exact distributions)");
  cmd->add_option("--contexts", c.contexts, "Jobs per circuit in shots mode")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--bootstrap", c.bootstrap, "Bootstrap replicates in shots mode")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "Output directory (JSON on stdout when omitted)");
}

LayeringPolicy policy_of(const std::string& name) {
  return name == "fold" ? LayeringPolicy::kFoldVirtual : LayeringPolicy::kSegregate;
}

struct Loaded {
  Circuit circuit;
  std::optional<ErrorModel> model;
};

Loaded load_source(const Source& s) {
  if (!s.fixture.empty()) {
    Fixture f = fixture(s.fixture);
    return {f.circuit, f.model};
  }
  if (s.circuit.empty()) throw InputError("give --circuit or --fixture");
  return {circuit_from_json(read_json_file(s.circuit), policy_of(s.layering)), std::nullopt};
}

ErrorModel load_noise(const std::string& spec, const std::optional<ErrorModel>& fallback) {
  if (spec.empty()) return fallback ? *fallback : gst_model();
  if (spec == "gst") return gst_model();
  if (spec == "ideal") return ErrorModel::ideal();
  return noise_model_from_json(read_json_file(spec));
}

ProfileOptions options_of(const RunConfig& c) {
  ProfileOptions o;
  o.repetitions = c.m;
  o.twirl = {c.twirl, c.twirl_instances, c.seed};
  if (c.shots > 0) o.shots = ShotSpec{c.shots, c.seed, c.contexts};
  o.bootstrap = c.bootstrap >= 2 ? c.bootstrap : 0;
  return o;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<CountsRow> counts_rows(const SensitivityReport& r) {
  std::vector<CountsRow> rows;
  for (std::size_t c = 0; c < r.context_counts.size(); ++c) {
    const std::string id = c == 0 ? "baseline" : "inv" + std::to_string(c);
    for (std::size_t s = 0; s < r.context_counts[c].size(); ++s) {
      const auto& counts = r.context_counts[c][s];
      for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) continue;
        rows.push_back({id, std::to_string(s + 1), format_bitstring(k, r.num_qubits), counts[k]});
      }
    }
  }
  return rows;
}

int cmd_layers(const Source& s, const std::string& out_path, std::ostream& out) {
  const Loaded loaded = load_source(s);
  const std::string text = dump(circuit_to_json(loaded.circuit));
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
    out << "layers: " << loaded.circuit.depth() << " (" << loaded.circuit.physical_depth() << " physical) -> "
        << out_path << "\n";
  }
  return kExitOk;
}

int cmd_profile(const RunConfig& c, std::ostream& out) {
  const Loaded loaded = load_source(c.source);
  const ErrorModel model = load_noise(c.noise, loaded.model);
  ProfileOptions o = options_of(c);
  o.with_qfim = true;
  const SensitivityReport r = profile(loaded.circuit, model, o);
  const Json j = report_to_json(r);
  if (c.out.empty()) {
    out << dump(j);
    return kExitOk;
  }
  const std::filesystem::path dir(c.out);
  write_text_file(dir / "profile.json", dump(j));
  write_text_file(dir / "profile.csv", report_to_csv(r));
  if (r.shots) {
    std::ostringstream csv;
    write_counts_csv(csv, counts_rows(r));
    write_text_file(dir / "counts.csv", csv.str());
  }
  out << "depth " << r.layers.size() << ", dominant layer L" << r.dominant_layer();
  if (r.pearson) out << ", pearson " << format_number(*r.pearson);
  out << "\n";
  return kExitOk;
}

int cmd_qfim(const RunConfig& c, std::ostream& out) {
  const Loaded loaded = load_source(c.source);
  const ErrorModel model = load_noise(c.noise, loaded.model);
  ProfileOptions o = options_of(c);
  o.with_ideal = false;
  o.bootstrap = 0;
  const SensitivityReport r = profile(loaded.circuit, model, o);
  const Json j = qfim_to_json(*r.qfim);
  if (c.out.empty()) {
    out << dump(j);
    return kExitOk;
  }
  const std::filesystem::path dir(c.out);
  write_text_file(dir / "qfim.json", dump(j));
  write_text_file(dir / "qfim.csv", qfim_to_csv(*r.qfim));
  out << "top eigenvalue " << format_number(r.qfim->eigenvalues(0)) << ", dominant layer L"
      << r.qfim->dominant_layer << "\n";
  return kExitOk;
}

int cmd_drift(const std::string& path, double alpha, int comparisons, const std::string& out_dir,
              std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  const ContextCounts counts = counts_from_rows(read_counts_csv(in));
  if (counts.contexts() < 2) throw InputError("drift analysis needs at least two contexts");
  const DriftReport report =
      two_step(counts, alpha, comparisons > 0 ? std::optional<int>(comparisons) : std::nullopt);
  const Json j = drift_to_json(report, counts);
  if (out_dir.empty()) {
    out << dump(j);
    return kExitOk;
  }
  const std::filesystem::path dir(out_dir);
  write_text_file(dir / "drift.json", dump(j));
  write_text_file(dir / "drift_pairwise.csv", pairwise_csv(report, counts));
  out << "N_sigma " << format_number(report.joint.aggregate.n_sigma) << " (threshold "
      << format_number(report.joint.n_sigma_threshold) << "), " << report.joint.ict.rejected.size() << " of "
      << counts.circuits() << " circuits flagged, drift " << (report.detected() ? "detected" : "not detected")
      << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Layer-sensitivity profiling by local inversion", "locinv");
  app.require_subcommand(1);

  Source layers_source;
  std::string layers_out;
  auto* layers = app.add_subcommand("layers", "Split a circuit into layers");
  add_source(layers, layers_source);
  layers->add_option("--out", layers_out, "Output file (stdout when omitted)");

  RunConfig profile_cfg;
  auto* profile_cmd = app.add_subcommand("profile", "Per-layer TVD profile of the inverted circuits");
  add_run(profile_cmd, profile_cfg);

  RunConfig qfim_cfg;
  auto* qfim_cmd = app.add_subcommand("qfim", "Quasi-Fisher information matrix of the inverted circuits");
  add_run(qfim_cmd, qfim_cfg);

  std::string counts_path;
  double alpha = 0.05;
  int comparisons = 0;
  std::string drift_out;
  auto* drift = app.add_subcommand("drift", "Context-dependence tests on a counts CSV");
  drift->add_option("--counts", counts_path, "Counts CSV")->required();
  drift->add_option("--alpha", alpha, "Global significance")->check(CLI::Range(0.0, 1.0));
  drift->add_option("--comparisons", comparisons, "Comparisons to split alpha over (default C(S,2)+1)");
  drift->add_option("--out", drift_out, "Output directory (JSON on stdout when omitted)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*layers) return cmd_layers(layers_source, layers_out, out);
    if (*profile_cmd) return cmd_profile(profile_cfg, out);
    if (*qfim_cmd) return cmd_qfim(qfim_cfg, out);
    if (*drift) return cmd_drift(counts_path, alpha, comparisons, drift_out, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace locinv
