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

#include "locinv/fixtures.hpp"

#include <numbers>

#include "locinv/error.hpp"

namespace locinv {

namespace {

constexpr double kCnot[256] = {
    1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    0.012, 0.973, 0.016, 0.005, 0.005, -0.002, 0.012, -0.004, -0.002, 0.003, -0.004, 0.002, -0.01, 0.008, 0.015, -0.001,
    0.001, -0.009, 0.004, -0.003, -0.002, 0.0, -0.023, 0.001, -0.006, -0.001, -0.007, 0.003, 0.005, -0.019, 0.974, 0.003,
    0.002, 0.006, 0.0, 0.003, -0.005, -0.001, 0.002, -0.021, -0.01, 0.001, 0.003, -0.01, -0.001, -0.007, 0.004, 0.983,
    0.002, 0.001, 0.012, -0.008, 0.015, 0.964, 0.017, 0.004, 0.001, 0.02, -0.018, 0.003, 0.048, 0.02, -0.002, -0.004,
    0.002, -0.001, 0.004, 0.002, 0.98, 0.004, -0.002, -0.009, 0.018, 0.001, -0.005, 0.012, 0.021, 0.042, 0.002, 0.005,
    -0.002, -0.003, 0.041, 0.002, -0.009, 0.001, 0.005, -0.018, -0.005, -0.002, 0.003, 0.977, 0.014, -0.003, 0.0, 0.012,
    -0.003, -0.006, -0.002, 0.045, -0.006, 0.019, 0.015, 0.006, -0.002, 0.022, -0.968, -0.001, -0.006, 0.001, -0.008, 0.005,
    0.001, 0.007, -0.004, 0.001, 0.0, -0.019, 0.017, -0.001, 0.011, 0.966, 0.019, 0.003, 0.012, 0.009, -0.002, -0.005,
    0.001, 0.008, 0.004, -0.001, -0.021, -0.0, 0.002, -0.011, 0.981, 0.004, -0.001, -0.005, 0.014, 0.004, 0.002, 0.01,
    -0.001, -0.005, 0.007, -0.002, 0.005, 0.005, -0.003, -0.975, -0.011, 0.002, 0.007, -0.02, -0.003, -0.002, 0.008, -0.023,
    -0.002, -0.012, 0.004, 0.006, 0.003, -0.021, 0.967, 0.001, -0.005, 0.017, 0.016, 0.007, 0.003, 0.004, 0.021, 0.004,
    -0.002, -0.003, -0.001, 0.001, -0.021, -0.035, -0.008, -0.001, -0.01, -0.006, 0.001, -0.006, 0.987, 0.002, 0.001, -0.0,
    -0.008, 0.006, 0.012, -0.001, -0.043, -0.02, -0.003, 0.003, -0.01, -0.009, 0.003, 0.008, 0.011, 0.97, 0.016, 0.007,
    0.005, -0.018, 0.973, 0.003, -0.004, -0.009, 0.002, 0.008, 0.002, 0.005, -0.001, -0.039, -0.004, -0.007, 0.005, -0.005,
    0.0, -0.007, 0.005, 0.982, 0.005, 0.002, -0.008, 0.003, 0.003, -0.009, 0.04, 0.002, 0.002, 0.005, 0.001, 0.001,
};

constexpr double kSqrtX[16] = {
    1.0, 0.0, 0.0, -0.0,
    0.0007, 0.9988, -0.005, -0.0055,
    -0.001, -0.006, 0.0167, -0.998,
    -0.0017, 0.0065, 0.9979, 0.0176,
};

constexpr double kIdle[16] = {
    1.0, -0.0, 0.0, -0.0,
    0.0042, 0.9943, -0.0064, 0.0178,
    -0.0033, 0.012, 0.9962, 0.0186,
    0.0029, -0.0182, -0.0167, 0.9928,
};

Ptm from_rows(int num_qubits, const double* rows) {
  const Eigen::Index d = Eigen::Index{1} << (2 * num_qubits);
  return Ptm(num_qubits, Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(rows, d, d));
}

constexpr double kHalfPi = std::numbers::pi / 2;

}  // namespace

std::vector<Gate> qaoa4_gates(const QaoaAngles& angles) {
  const auto& [t1, t2, t3, t4, t5, t6, t7] = angles;
  std::vector<Gate> g;
  auto all = [&](auto make) {
    for (int q = 0; q < 4; ++q) g.push_back(make(q));
  };
  auto sx = [](int q) { return Gate::sqrt_x(q); };
  auto rz = [](double theta) { return [theta](int q) { return Gate::zrot(q, theta); }; };

  // Hadamard prep; the leading Z acts on |0> and is dropped.
  all(sx);
  all(rz(kHalfPi));
  // Cost unitary: each edge as CNOT, Z, CNOT, grouped into perfect matchings.
  g.insert(g.end(), {Gate::cnot(0, 1), Gate::cnot(2, 3), Gate::zrot(1, t1), Gate::zrot(3, t2),
                     Gate::cnot(0, 1), Gate::cnot(2, 3)});
  g.insert(g.end(), {Gate::cnot(1, 2), Gate::cnot(0, 3), Gate::zrot(2, t3), Gate::zrot(3, t5),
                     Gate::cnot(1, 2), Gate::cnot(0, 3)});
  g.insert(g.end(), {Gate::cnot(0, 2), Gate::cnot(1, 3), Gate::zrot(2, t6), Gate::zrot(3, t7),
                     Gate::cnot(0, 2), Gate::cnot(1, 3)});
  // Mixer.
  all(rz(kHalfPi));
  all(sx);
  all(rz(t4));
  all(sx);
  return g;
}

Circuit qaoa4(const QaoaAngles& angles) {
  const std::vector<Gate> g = qaoa4_gates(angles);
  return split_into_layers(g, 4, LayeringPolicy::kFoldVirtual);
}

std::vector<Gate> qft_gates(int num_qubits) {
  if (num_qubits < 2) throw InputError("QFT fixture needs at least two qubits");
  std::vector<Gate> g;
  // Hadamard prep. The one on qubit 0 cancels the first QFT Hadamard.
  for (int q = 1; q < num_qubits; ++q) {
    g.push_back(Gate::sqrt_x(q));
    g.push_back(Gate::zrot(q, kHalfPi));
  }
  for (int j = 0; j < num_qubits; ++j) {
    if (j > 0) {
      g.push_back(Gate::zrot(j, kHalfPi));
      g.push_back(Gate::sqrt_x(j));
      g.push_back(Gate::zrot(j, kHalfPi));
    }
    for (int k = j + 1; k < num_qubits; ++k) {
      // Controlled phase, control k, target j.
      const double phi = std::numbers::pi / static_cast<double>(1 << (k - j));
      g.push_back(Gate::zrot(k, phi / 2));
      g.push_back(Gate::cnot(k, j));
      g.push_back(Gate::zrot(j, -phi / 2));
      g.push_back(Gate::cnot(k, j));
      g.push_back(Gate::zrot(j, phi / 2));
    }
  }
  for (int i = 0; i < num_qubits / 2; ++i) {
    const int a = i;
    const int b = num_qubits - 1 - i;
    g.push_back(Gate::cnot(a, b));
    g.push_back(Gate::cnot(b, a));
    g.push_back(Gate::cnot(a, b));
  }
  return g;
}

Circuit qft(int num_qubits, LayeringPolicy policy) {
  const std::vector<Gate> g = qft_gates(num_qubits);
  return split_into_layers(g, num_qubits, policy);
}

Ptm gst_cnot() { return from_rows(2, kCnot); }
Ptm gst_sqrt_x() { return from_rows(1, kSqrtX); }
Ptm gst_idle() { return from_rows(1, kIdle); }

ErrorModel gst_model() {
  ErrorModel m;
  m.set_gate(GateKind::kCnot, gst_cnot());
  m.set_gate(GateKind::kSqrtX, gst_sqrt_x());
  m.set_gate(GateKind::kIdle, gst_idle());
  return m;
}

Degradation qft_degradation() {
  return {GateKind::kCnot, {1, 2}, std::vector<double>(kQftDegradation.begin(), kQftDegradation.end())};
}

std::vector<std::string> fixture_names() {
  return {"qaoa4-opt", "qaoa4-random", "qft4", "qft4-degraded", "qft3"};
}

Fixture fixture(std::string_view name) {
  if (name == "qaoa4-opt") {
    return {"qaoa4-opt", "4-qubit Max-Cut QAOA, optimized angles", qaoa4(kQaoaOptimized), gst_model()};
  }
  if (name == "qaoa4-random") {
    return {"qaoa4-random", "4-qubit Max-Cut QAOA, random angles", qaoa4(kQaoaRandom), gst_model()};
  }
  if (name == "qft4") {
    return {"qft4", "4-qubit QFT", qft(4, LayeringPolicy::kFoldVirtual), gst_model()};
  }
  if (name == "qft4-degraded") {
    ErrorModel m = gst_model();
    m.add_degradation(qft_degradation());
    return {"qft4-degraded", "4-qubit QFT with a degrading CNOT(1,2)", qft(4, LayeringPolicy::kFoldVirtual), m};
  }
  if (name == "qft3") {
    return {"qft3", "3-qubit QFT, Z rotations in their own layers", qft(3, LayeringPolicy::kSegregate), gst_model()};
  }
  std::string known;
  for (const auto& n : fixture_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown fixture '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace locinv
