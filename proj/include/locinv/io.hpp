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

#ifndef LOCINV_IO_HPP
#define LOCINV_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "locinv/analysis.hpp"
#include "locinv/circuit.hpp"
#include "locinv/drift.hpp"
#include "locinv/superop.hpp"

namespace locinv {

using Json = nlohmann::ordered_json;

Json gate_to_json(const Gate& gate);
Gate gate_from_json(const Json& j);

// Accepts {"n", "layers": [[gate...]...]} or {"n", "gates": [gate...]};
// flat gate lists are layered with `policy`.
Circuit circuit_from_json(const Json& j, LayeringPolicy policy = LayeringPolicy::kSegregate);
// Layers plus a parallel "layer_info" array with kind and provenance tags.
Json circuit_to_json(const Circuit& circuit);

ErrorModel noise_model_from_json(const Json& j);
Json noise_model_to_json(const ErrorModel& model);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct CountsRow {
  std::string circuit_id;
  std::string context_id;
  std::string bitstring;
  std::uint64_t count = 0;
};

std::vector<CountsRow> read_counts_csv(std::istream& in);
void write_counts_csv(std::ostream& out, const std::vector<CountsRow>& rows);
// Groups rows by circuit and context in order of first appearance.
ContextCounts counts_from_rows(const std::vector<CountsRow>& rows);

Json report_to_json(const SensitivityReport& report);
std::string report_to_csv(const SensitivityReport& report);
Json qfim_to_json(const Qfim& q);
std::string qfim_to_csv(const Qfim& q);
Json drift_to_json(const DriftReport& report, const ContextCounts& counts);
std::string pairwise_csv(const DriftReport& report, const ContextCounts& counts);

// Fixed-precision formatting used by every CSV writer.
std::string format_number(double x);

}  // namespace locinv

#endif  // LOCINV_IO_HPP
