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

#ifndef LOCINV_SIM_HPP
#define LOCINV_SIM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locinv/circuit.hpp"
#include "locinv/superop.hpp"

namespace locinv {

// Output distribution over bitstrings. Index k reads big-endian: qubit 0 is
// the most significant bit.
class ProbDist {
 public:
  ProbDist() = default;
  // Entries down to -1e-12 are clamped to zero; the result must sum to one
  // within 1e-9 and is renormalized.
  ProbDist(int num_qubits, std::vector<double> p);

  static ProbDist from_counts(int num_qubits, std::span<const std::uint64_t> counts);
  static ProbDist average(std::span<const ProbDist> dists);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t k) const { return p_[k]; }
  const std::vector<double>& probabilities() const { return p_; }

 private:
  int num_qubits_ = 0;
  std::vector<double> p_;
};

std::string format_bitstring(std::size_t k, int num_qubits);
std::size_t parse_bitstring(std::string_view bits);

struct SimOptions {
  int max_qubits = 10;
};

// Largest register for operations that build dense 4^n x 4^n maps.
constexpr int kDenseQubitCap = 5;

// Vectorized |0...0><0...0|.
std::vector<double> initial_state(int num_qubits);
// <<k|v>> for every k. Linear in v; no normalization.
std::vector<double> readout(std::span<const double> state, int num_qubits);

// Per-layer simulation contexts: ideal overrides from the model and the
// degradation probability of every gate.
std::vector<LayerContext> layer_contexts(const Circuit& circuit, const ErrorModel& model);

ProbDist simulate(const Circuit& circuit, const ErrorModel& model, const SimOptions& options = {});

// Multinomial draw by inverse CDF.
std::vector<std::uint64_t> sample(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed);

struct PerturbationResult {
  int layer = 0;
  std::vector<double> delta;
  std::vector<double> delta_ideal;
  Matrix lambda;
  ErrorGenerator layer_generator;
  ErrorGenerator inverse_generator;
  double eta = 0.0;
  double eta_ideal = 0.0;
};

// First-order prediction of the i-inverted and i-ideal output shifts.
PerturbationResult first_order(const Circuit& circuit, const ErrorModel& model, int layer);

}  // namespace locinv

#endif  // LOCINV_SIM_HPP
