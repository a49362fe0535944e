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

#ifndef LOCINV_FIXTURES_HPP
#define LOCINV_FIXTURES_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "locinv/circuit.hpp"
#include "locinv/superop.hpp"

namespace locinv {

using QaoaAngles = std::array<double, 7>;

inline constexpr QaoaAngles kQaoaOptimized = {4.426, 1.192, 2.383, 3.8411, 1.532, 3.404, 4.937};
inline constexpr QaoaAngles kQaoaRandom = {4.6, 1.238, 2.477, 4.471, 1.592, 3.538, 5.131};

// Max-Cut edge weights of the 4-vertex graph, indexed as (a, b, w).
inline constexpr std::array<std::array<int, 3>, 6> kQaoaWeights = {{
    {0, 1, 26}, {0, 3, 9}, {0, 2, 20}, {1, 2, 14}, {1, 3, 29}, {2, 3, 7}}};

// Depolarizing schedule of the degrading CNOT on qubits {1, 2}.
inline constexpr std::array<double, 5> kQftDegradation = {0.025, 0.051, 0.076, 0.102, 0.127};

// One-layer QAOA on four qubits, native gates.
std::vector<Gate> qaoa4_gates(const QaoaAngles& angles);
Circuit qaoa4(const QaoaAngles& angles);

// Forward QFT on n qubits applied to the uniform superposition, native gates.
std::vector<Gate> qft_gates(int num_qubits);
Circuit qft(int num_qubits, LayeringPolicy policy);

// Noisy CNOT (control first), SX and ID maps of the tomography data set.
Ptm gst_cnot();
Ptm gst_sqrt_x();
Ptm gst_idle();
ErrorModel gst_model();
Degradation qft_degradation();

struct Fixture {
  std::string name;
  std::string description;
  Circuit circuit;
  ErrorModel model;
};

std::vector<std::string> fixture_names();
// Throws InputError for unknown names.
Fixture fixture(std::string_view name);

}  // namespace locinv

#endif  // LOCINV_FIXTURES_HPP
