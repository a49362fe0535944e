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

#ifndef LOCINV_SUPEROP_HPP
#define LOCINV_SUPEROP_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "locinv/circuit.hpp"

namespace locinv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

// Pauli transfer matrix on n qubits. Basis {I,X,Y,Z}^n, qubit 0 most
// significant; R_ij = tr(P_i L(P_j)) / 2^n.
class Ptm {
 public:
  Ptm() = default;
  Ptm(int num_qubits, Matrix m);

  static Ptm identity(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  // Composition: (a * b) applies b first.
  Ptm operator*(const Ptm& rhs) const;

  bool is_trace_preserving(double tol = 1e-9) const;
  bool is_unital(double tol = 1e-9) const;
  // Trace preserving with entries in [-1 - tol, 1 + tol].
  bool is_valid(double tol = 1e-9) const;

 private:
  int num_qubits_ = 0;
  Matrix m_;
};

// 2x2 Pauli matrix.
CMatrix pauli_matrix(Pauli p);
// Pauli string for basis index `index` on n qubits.
CMatrix pauli_string(std::size_t index, int num_qubits);

CMatrix gate_unitary(const Gate& gate);
Ptm unitary_ptm(const CMatrix& u);
// Local PTM of a gate on its own qubits (control first for CNOT).
Ptm ideal_ptm(const Gate& gate);

Ptm embed(const Ptm& local, std::span<const int> qubits, int num_qubits);
// diag(1, 1-p, ..., 1-p) on k qubits.
Ptm depolarizing_ptm(double p, int k);

// Applies a local PTM to the listed qubits of a state or column vector of
// length 4^n, in place.
void apply_local(std::span<double> state, int num_qubits, const Matrix& local,
                 std::span<const int> qubits);

// Matrix exponential by scaling and squaring with a Taylor core.
Matrix matrix_exp(const Matrix& a);
// Principal real logarithm by inverse scaling and squaring (Denman-Beavers
// square roots, then an atanh series). Throws NumericError when an
// eigenvalue sits on or near the closed negative real axis.
Matrix matrix_log(const Matrix& a);

struct ErrorGenerator {
  int num_qubits = 0;
  Matrix generator;
  // Max-abs entry of the generator.
  double delta = 0.0;
};

ErrorGenerator error_generator(const Ptm& ptm);

double avg_gate_fidelity(const Ptm& ideal, const Ptm& channel);
// 1 - tr(R_g^T R) / d^2.
double entanglement_infidelity(const Ptm& ideal, const Ptm& channel);
double average_gate_infidelity(const Ptm& ideal, const Ptm& channel);

// Superoperator in the column-stacked computational vectorization.
CMatrix ptm_to_computational(const Ptm& ptm);
Ptm computational_to_ptm(const CMatrix& superop, int num_qubits);

// Instance-indexed extra depolarizing noise on one gate kind and qubit set.
struct Degradation {
  GateKind kind = GateKind::kCnot;
  std::vector<int> qubits;
  std::vector<double> probabilities;

  // Qubit sets compare unordered.
  bool matches(const Gate& gate) const;
  // 0-based ordinal; past the end reuses the last probability.
  double probability(int ordinal) const;
};

class ErrorModel {
 public:
  // Every gate ideal.
  static ErrorModel ideal();

  void set_gate(GateKind kind, const Ptm& noisy);
  bool has_gate(GateKind kind) const;
  // Noisy PTM for a gate kind; ideal when the model is ideal.
  Ptm gate_ptm(const Gate& gate) const;
  bool is_ideal() const { return ideal_; }

  void add_degradation(Degradation d);
  const std::vector<Degradation>& degradation() const { return degradation_; }

  // Forces a source layer to be ideal (the i-ideal circuit).
  ErrorModel with_ideal_layer(int source_layer) const;
  bool layer_is_ideal(int source_layer) const;

  const std::map<GateKind, Ptm>& gates() const { return gates_; }

 private:
  bool ideal_ = false;
  std::map<GateKind, Ptm> gates_;
  std::vector<Degradation> degradation_;
  std::vector<int> ideal_layers_;
};

struct LayerContext {
  int source_layer = 0;
  bool ideal = false;
  // Extra depolarizing probability per gate of the layer, aligned with
  // Layer::gates(); empty means none.
  std::vector<double> depolarizing;
};

struct LocalOp {
  Matrix map;
  std::vector<int> qubits;
};

// Gate-level maps of a layer in time order.
std::vector<LocalOp> layer_ops(const Layer& layer, const ErrorModel& model, const LayerContext& ctx);
Ptm layer_superop(const Layer& layer, int num_qubits, const ErrorModel& model, const LayerContext& ctx);
// Ideal PTM of a layer.
Ptm ideal_layer_superop(const Layer& layer, int num_qubits);

}  // namespace locinv

#endif  // LOCINV_SUPEROP_HPP
