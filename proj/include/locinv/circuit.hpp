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

#ifndef LOCINV_CIRCUIT_HPP
#define LOCINV_CIRCUIT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace locinv {

enum class GateKind : std::uint8_t { kCnot, kSqrtX, kZRot, kIdle, kPauli };

enum class Pauli : std::uint8_t { kI = 0, kX = 1, kY = 2, kZ = 3 };

char pauli_char(Pauli p);

// Maps an angle onto (-pi, pi].
double canonical_angle(double theta);

class Gate {
 public:
  static Gate cnot(int control, int target);
  static Gate sqrt_x(int qubit);
  static Gate zrot(int qubit, double theta);
  static Gate idle(int qubit);
  static Gate pauli(int qubit, Pauli axis);

  GateKind kind() const { return kind_; }
  int arity() const { return kind_ == GateKind::kCnot ? 2 : 1; }
  std::span<const int> qubits() const { return {qubits_.data(), static_cast<std::size_t>(arity())}; }
  int qubit() const { return qubits_[0]; }
  int control() const { return qubits_[0]; }
  int target() const { return qubits_[1]; }
  double theta() const { return theta_; }
  Pauli axis() const { return axis_; }

  bool is_virtual() const { return kind_ == GateKind::kZRot; }
  // Gates that occupy a clock cycle: SqrtX, CNOT and Idle.
  bool is_physical() const {
    return kind_ == GateKind::kCnot || kind_ == GateKind::kSqrtX || kind_ == GateKind::kIdle;
  }
  bool acts_on(int q) const;

  std::string name() const;
  std::string to_string() const;

  bool operator==(const Gate&) const = default;

 private:
  Gate(GateKind kind, int q0, int q1, double theta, Pauli axis);

  GateKind kind_;
  std::array<int, 2> qubits_;
  double theta_;
  Pauli axis_;
};

enum class LayerRole : std::uint8_t {
  kOriginal,
  kFrameInverse,
  kConjugationPre,
  kInverse,
  kConjugationPost,
  kRepeat,
  kTwirlCompensating,
  kTwirlRandom,
};

const char* role_name(LayerRole role);

// Where a layer came from. `source` is the 1-based index of the original
// layer; `block` is the inversion block (1..m) for inserted layers.
struct LayerOrigin {
  int source = 0;
  int block = 0;
  LayerRole role = LayerRole::kOriginal;

  bool operator==(const LayerOrigin&) const = default;
};

// A clock cycle of physical gates (SqrtX, CNOT, Idle) followed by a frame of
// Z rotations, a purely virtual layer of Z rotations, or a layer of Paulis.
class Layer {
 public:
  Layer() = default;
  explicit Layer(std::vector<Gate> gates, LayerOrigin origin = {});

  const std::vector<Gate>& gates() const { return gates_; }
  const LayerOrigin& origin() const { return origin_; }
  Layer with_origin(LayerOrigin origin) const;

  bool is_virtual() const;
  bool is_twirl() const;
  bool has_frame() const;
  // Physical gates in order (including Idle).
  std::vector<Gate> physical() const;
  // Trailing Z rotations.
  std::vector<Gate> frame() const;
  // Sorted qubits touched by any gate.
  std::vector<int> support() const;
  // Qubits acted on by SqrtX or CNOT.
  std::vector<int> active_qubits() const;

  // Adds Idle on uncovered qubits of a physical layer. Virtual and Pauli
  // layers are returned unchanged.
  Layer filled(int num_qubits) const;

  bool operator==(const Layer& other) const { return gates_ == other.gates_; }

 private:
  std::vector<Gate> gates_;
  LayerOrigin origin_;
};

class Circuit {
 public:
  Circuit(int num_qubits, std::vector<Layer> layers);

  int num_qubits() const { return num_qubits_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  const std::vector<Layer>& layers() const { return layers_; }
  // 1-based.
  const Layer& layer(int i) const { return layers_.at(static_cast<std::size_t>(i - 1)); }
  // Number of layers that are not purely virtual.
  int physical_depth() const;

  std::vector<Gate> flatten() const;

  bool operator==(const Circuit& other) const {
    return num_qubits_ == other.num_qubits_ && layers_ == other.layers_;
  }

 private:
  int num_qubits_;
  std::vector<Layer> layers_;
};

enum class LayeringPolicy : std::uint8_t {
  // Z rotations always get their own virtual layers.
  kSegregate,
  // Z rotations following a physical layer ride along as its frame.
  kFoldVirtual,
};

constexpr int kNoMoment = -1;

// ASAP layering. `moments`, if given, runs parallel to `gates` and asserts
// that gates sharing a moment act on disjoint qubits.
Circuit split_into_layers(std::span<const Gate> gates, int num_qubits,
                          LayeringPolicy policy = LayeringPolicy::kSegregate,
                          std::span<const int> moments = {});

// Physical realization of L^-1: inverse frame, then Z(-pi), SqrtX, Z(pi)
// conjugation around the physical gates. Sublayers that would be empty are
// dropped.
std::vector<Layer> invert_layer(const Layer& layer);

struct TwirlSpec {
  bool enabled = false;
  int instances = 100;
  std::uint64_t seed = 0;
};

struct InversionSpec {
  int target = 1;
  int repetitions = 1;
  TwirlSpec twirl;
};

// L_d ... L_i [L_i^-1 L_i]^m L_{i-1} ... L_1.
Circuit build_inverted(const Circuit& circuit, const InversionSpec& spec);

struct TwirlLayer {
  int block = 0;
  // Random Pauli applied after L_i^-1.
  std::vector<Pauli> random;
  // U_i P U_i^dagger, applied before L_i^-1.
  std::vector<Pauli> compensating;
  // Sign of the conjugated Pauli string, dropped at the channel level.
  int sign = 1;
};

struct TwirlInstance {
  Circuit circuit;
  std::vector<TwirlLayer> layers;
  std::uint64_t seed = 0;
};

// Conjugates a Pauli string by the Clifford part of a layer: returns U P U^dagger.
std::vector<Pauli> conjugate_pauli(const Layer& layer, std::span<const Pauli> paulis,
                                   int* sign = nullptr);

// Twirled copies of a build_inverted circuit. Instance r is drawn from
// derive_seed(spec.twirl.seed, r).
std::vector<TwirlInstance> attach_twirl(const Circuit& inverted, const InversionSpec& spec);

}  // namespace locinv

#endif  // LOCINV_CIRCUIT_HPP
