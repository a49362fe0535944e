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

#include "locinv/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "locinv/error.hpp"
#include "locinv/rng.hpp"

namespace locinv {

char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

double canonical_angle(double theta) {
  if (!std::isfinite(theta)) throw InputError("rotation angle must be finite");
  constexpr double kTwoPi = 2 * std::numbers::pi;
  double r = std::remainder(theta, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

Gate::Gate(GateKind kind, int q0, int q1, double theta, Pauli axis)
    : kind_(kind), qubits_{q0, q1}, theta_(theta), axis_(axis) {
  if (q0 < 0 || (kind == GateKind::kCnot && q1 < 0)) throw InputError("negative qubit index");
}

Gate Gate::cnot(int control, int target) {
  if (control == target) throw InputError("CNOT control equals target");
  return Gate(GateKind::kCnot, control, target, 0.0, Pauli::kI);
}
Gate Gate::sqrt_x(int qubit) { return Gate(GateKind::kSqrtX, qubit, -1, 0.0, Pauli::kI); }
Gate Gate::zrot(int qubit, double theta) {
  return Gate(GateKind::kZRot, qubit, -1, canonical_angle(theta), Pauli::kI);
}
Gate Gate::idle(int qubit) { return Gate(GateKind::kIdle, qubit, -1, 0.0, Pauli::kI); }
Gate Gate::pauli(int qubit, Pauli axis) {
  if (axis == Pauli::kI) throw InputError("Pauli gate needs axis X, Y or Z");
  return Gate(GateKind::kPauli, qubit, -1, 0.0, axis);
}

bool Gate::acts_on(int q) const {
  return qubits_[0] == q || (kind_ == GateKind::kCnot && qubits_[1] == q);
}

std::string Gate::name() const {
  switch (kind_) {
    case GateKind::kCnot: return "CNOT";
    case GateKind::kSqrtX: return "SX";
    case GateKind::kZRot: return "RZ";
    case GateKind::kIdle: return "ID";
    case GateKind::kPauli: return std::string(1, pauli_char(axis_));
  }
  return "?";
}

std::string Gate::to_string() const {
  std::ostringstream out;
  out << name() << "(" << qubits_[0];
  if (kind_ == GateKind::kCnot) out << "," << qubits_[1];
  if (kind_ == GateKind::kZRot) out << ";" << theta_;
  out << ")";
  return out.str();
}

const char* role_name(LayerRole role) {
  switch (role) {
    case LayerRole::kOriginal: return "original";
    case LayerRole::kFrameInverse: return "frame_inverse";
    case LayerRole::kConjugationPre: return "conjugation_pre";
    case LayerRole::kInverse: return "inverse";
    case LayerRole::kConjugationPost: return "conjugation_post";
    case LayerRole::kRepeat: return "repeat";
    case LayerRole::kTwirlCompensating: return "twirl_compensating";
    case LayerRole::kTwirlRandom: return "twirl_random";
  }
  return "?";
}

namespace {

void require_disjoint(const std::vector<Gate>& gates, const char* what) {
  std::vector<int> seen;
  for (const Gate& g : gates) {
    for (int q : g.qubits()) {
      if (std::find(seen.begin(), seen.end(), q) != seen.end()) {
        throw InputError(std::string("qubit ") + std::to_string(q) + " used twice in " + what);
      }
      seen.push_back(q);
    }
  }
}

}  // namespace

Layer::Layer(std::vector<Gate> gates, LayerOrigin origin) : origin_(origin) {
  if (gates.empty()) throw InputError("empty layer");
  const auto pauli_count = std::count_if(gates.begin(), gates.end(),
                                         [](const Gate& g) { return g.kind() == GateKind::kPauli; });
  if (pauli_count != 0 && pauli_count != static_cast<long>(gates.size())) {
    throw InputError("Pauli gates cannot share a layer with other gates");
  }
  std::vector<Gate> phys;
  std::vector<Gate> frame;
  for (const Gate& g : gates) (g.is_virtual() ? frame : phys).push_back(g);
  require_disjoint(phys, "a layer");
  require_disjoint(frame, "a layer frame");
  gates_ = std::move(phys);
  gates_.insert(gates_.end(), frame.begin(), frame.end());
}

Layer Layer::with_origin(LayerOrigin origin) const {
  Layer out = *this;
  out.origin_ = origin;
  return out;
}

bool Layer::is_virtual() const {
  return !gates_.empty() &&
         std::all_of(gates_.begin(), gates_.end(), [](const Gate& g) { return g.is_virtual(); });
}

bool Layer::is_twirl() const {
  return !gates_.empty() && std::all_of(gates_.begin(), gates_.end(), [](const Gate& g) {
    return g.kind() == GateKind::kPauli;
  });
}

bool Layer::has_frame() const {
  return std::any_of(gates_.begin(), gates_.end(), [](const Gate& g) { return g.is_virtual(); });
}

std::vector<Gate> Layer::physical() const {
  std::vector<Gate> out;
  for (const Gate& g : gates_) {
    if (g.is_physical()) out.push_back(g);
  }
  return out;
}

std::vector<Gate> Layer::frame() const {
  std::vector<Gate> out;
  for (const Gate& g : gates_) {
    if (g.is_virtual()) out.push_back(g);
  }
  return out;
}

std::vector<int> Layer::support() const {
  std::vector<int> out;
  for (const Gate& g : gates_) {
    for (int q : g.qubits()) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> Layer::active_qubits() const {
  std::vector<int> out;
  for (const Gate& g : gates_) {
    if (g.kind() == GateKind::kCnot || g.kind() == GateKind::kSqrtX) {
      for (int q : g.qubits()) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Layer Layer::filled(int num_qubits) const {
  if (is_virtual() || is_twirl()) return *this;
  std::vector<Gate> phys = physical();
  std::vector<bool> covered(static_cast<std::size_t>(num_qubits), false);
  for (const Gate& g : phys) {
    for (int q : g.qubits()) {
      if (q < num_qubits) covered[static_cast<std::size_t>(q)] = true;
    }
  }
  for (int q = 0; q < num_qubits; ++q) {
    if (!covered[static_cast<std::size_t>(q)]) phys.push_back(Gate::idle(q));
  }
  std::vector<Gate> f = frame();
  phys.insert(phys.end(), f.begin(), f.end());
  return Layer(std::move(phys), origin_);
}

Circuit::Circuit(int num_qubits, std::vector<Layer> layers) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw InputError("circuit needs at least one qubit");
  if (layers.empty()) throw InputError("circuit needs at least one layer");
  layers_.reserve(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& layer = layers[i];
    for (const Gate& g : layer.gates()) {
      for (int q : g.qubits()) {
        if (q >= num_qubits) {
          throw InputError("gate " + g.to_string() + " exceeds qubit count " +
                           std::to_string(num_qubits));
        }
      }
    }
    LayerOrigin origin = layer.origin();
    if (origin.source == 0) origin = {static_cast<int>(i) + 1, 0, LayerRole::kOriginal};
    layers_.push_back(layer.filled(num_qubits).with_origin(origin));
  }
}

int Circuit::physical_depth() const {
  return static_cast<int>(std::count_if(layers_.begin(), layers_.end(),
                                        [](const Layer& l) { return !l.is_virtual(); }));
}

std::vector<Gate> Circuit::flatten() const {
  std::vector<Gate> out;
  for (const Layer& layer : layers_) {
    out.insert(out.end(), layer.gates().begin(), layer.gates().end());
  }
  return out;
}

Circuit split_into_layers(std::span<const Gate> gates, int num_qubits, LayeringPolicy policy,
                          std::span<const int> moments) {
  if (gates.empty()) throw InputError("no gates to layer");
  if (num_qubits < 1) throw InputError("circuit needs at least one qubit");
  if (!moments.empty() && moments.size() != gates.size()) {
    throw InputError("moment hints must match the gate list");
  }
  for (const Gate& g : gates) {
    if (g.kind() == GateKind::kPauli) throw InputError("Pauli gates are not part of the native set");
    for (int q : g.qubits()) {
      if (q >= num_qubits) throw InputError("gate " + g.to_string() + " exceeds qubit count");
    }
  }
  if (!moments.empty()) {
    std::map<int, std::vector<Gate>> by_moment;
    for (std::size_t k = 0; k < gates.size(); ++k) {
      if (moments[k] != kNoMoment) by_moment[moments[k]].push_back(gates[k]);
    }
    for (const auto& [moment, group] : by_moment) {
      try {
        require_disjoint(group, "a moment");
      } catch (const InputError& e) {
        throw InputError(std::string(e.what()) + " " + std::to_string(moment));
      }
    }
  }

  struct Slot {
    bool is_virtual;
    std::vector<Gate> gates;
  };
  std::vector<Slot> slots;
  std::vector<int> ready(static_cast<std::size_t>(num_qubits), 0);

  if (policy == LayeringPolicy::kSegregate) {
    for (const Gate& g : gates) {
      int earliest = 0;
      for (int q : g.qubits()) earliest = std::max(earliest, ready[static_cast<std::size_t>(q)]);
      int l = earliest;
      while (l < static_cast<int>(slots.size()) &&
             slots[static_cast<std::size_t>(l)].is_virtual != g.is_virtual()) {
        ++l;
      }
      if (l == static_cast<int>(slots.size())) slots.push_back({g.is_virtual(), {}});
      slots[static_cast<std::size_t>(l)].gates.push_back(g);
      for (int q : g.qubits()) ready[static_cast<std::size_t>(q)] = l + 1;
    }
  } else {
    // Slot 0 collects Z rotations that precede any physical gate on their qubit.
    slots.push_back({true, {}});
    std::vector<int> last(static_cast<std::size_t>(num_qubits), 0);
    auto add_rotation = [](std::vector<Gate>& frame, const Gate& g) {
      for (Gate& f : frame) {
        if (f.is_virtual() && f.qubit() == g.qubit()) {
          f = Gate::zrot(g.qubit(), f.theta() + g.theta());
          return;
        }
      }
      frame.push_back(g);
    };
    for (const Gate& g : gates) {
      if (g.is_virtual()) {
        add_rotation(slots[static_cast<std::size_t>(last[static_cast<std::size_t>(g.qubit())])].gates, g);
        continue;
      }
      int l = 0;
      for (int q : g.qubits()) l = std::max(l, last[static_cast<std::size_t>(q)]);
      ++l;
      while (static_cast<int>(slots.size()) <= l) slots.push_back({false, {}});
      auto& slot = slots[static_cast<std::size_t>(l)].gates;
      // Keep physical gates ahead of frame rotations in the slot.
      auto pos = std::find_if(slot.begin(), slot.end(), [](const Gate& x) { return x.is_virtual(); });
      slot.insert(pos, g);
      for (int q : g.qubits()) last[static_cast<std::size_t>(q)] = l;
    }
    if (slots.front().gates.empty()) slots.erase(slots.begin());
  }

  std::vector<Layer> layers;
  layers.reserve(slots.size());
  for (auto& slot : slots) {
    if (!slot.gates.empty()) layers.emplace_back(std::move(slot.gates));
  }
  return Circuit(num_qubits, std::move(layers));
}

std::vector<Layer> invert_layer(const Layer& layer) {
  if (layer.is_twirl()) throw InputError("cannot invert a Pauli twirl layer");
  const LayerOrigin base = layer.origin();
  auto tagged = [&](LayerRole role) { return LayerOrigin{base.source, base.block, role}; };

  std::vector<Layer> out;
  std::vector<Gate> frame_inv;
  for (const Gate& g : layer.frame()) frame_inv.push_back(Gate::zrot(g.qubit(), -g.theta()));
  if (!frame_inv.empty()) out.emplace_back(std::move(frame_inv), tagged(LayerRole::kFrameInverse));

  std::vector<Gate> phys = layer.physical();
  if (phys.empty()) return out;
  std::vector<Gate> pre;
  std::vector<Gate> post;
  for (const Gate& g : phys) {
    if (g.kind() == GateKind::kSqrtX) {
      pre.push_back(Gate::zrot(g.qubit(), -std::numbers::pi));
      post.push_back(Gate::zrot(g.qubit(), std::numbers::pi));
    }
  }
  if (!pre.empty()) out.emplace_back(std::move(pre), tagged(LayerRole::kConjugationPre));
  out.emplace_back(std::move(phys), tagged(LayerRole::kInverse));
  if (!post.empty()) out.emplace_back(std::move(post), tagged(LayerRole::kConjugationPost));
  return out;
}

Circuit build_inverted(const Circuit& circuit, const InversionSpec& spec) {
  if (spec.target < 1 || spec.target > circuit.depth()) {
    throw InputError("target layer " + std::to_string(spec.target) + " outside 1.." +
                     std::to_string(circuit.depth()));
  }
  if (spec.repetitions < 1) throw InputError("repetitions must be at least 1");
  std::vector<Layer> layers;
  for (int j = 1; j <= circuit.depth(); ++j) {
    const Layer& layer = circuit.layer(j);
    layers.push_back(layer);
    if (j != spec.target) continue;
    const int source = layer.origin().source;
    for (int b = 1; b <= spec.repetitions; ++b) {
      for (const Layer& inv : invert_layer(layer)) {
        layers.push_back(inv.with_origin({source, b, inv.origin().role}));
      }
      layers.push_back(layer.with_origin({source, b, LayerRole::kRepeat}));
    }
  }
  return Circuit(circuit.num_qubits(), std::move(layers));
}

namespace {

// Pauli frame in (x, z) form with a sign bit.
struct PauliFrame {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;
  std::uint8_t r = 0;

  void h(int q) {
    r ^= x[q] & z[q];
    std::swap(x[q], z[q]);
  }
  void s(int q) {
    r ^= x[q] & z[q];
    z[q] ^= x[q];
  }
  void cx(int a, int b) {
    r ^= x[a] & z[b] & (x[b] ^ z[a] ^ 1);
    x[b] ^= x[a];
    z[a] ^= z[b];
  }
};

}  // namespace

std::vector<Pauli> conjugate_pauli(const Layer& layer, std::span<const Pauli> paulis, int* sign) {
  const std::size_t n = paulis.size();
  PauliFrame f{std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n), 0};
  for (std::size_t q = 0; q < n; ++q) {
    const auto p = static_cast<int>(paulis[q]);
    f.x[q] = (p == 1 || p == 2);
    f.z[q] = (p == 2 || p == 3);
  }
  for (const Gate& g : layer.physical()) {
    for (int q : g.qubits()) {
      if (static_cast<std::size_t>(q) >= n) throw InputError("Pauli string shorter than layer");
    }
    switch (g.kind()) {
      case GateKind::kCnot: f.cx(g.control(), g.target()); break;
      case GateKind::kSqrtX:
        f.h(g.qubit());
        f.s(g.qubit());
        f.h(g.qubit());
        break;
      case GateKind::kIdle: break;
      default: throw InputError("cannot propagate a Pauli through " + g.to_string());
    }
  }
  std::vector<Pauli> out(n);
  for (std::size_t q = 0; q < n; ++q) {
    out[q] = f.x[q] ? (f.z[q] ? Pauli::kY : Pauli::kX) : (f.z[q] ? Pauli::kZ : Pauli::kI);
  }
  if (sign != nullptr) *sign = f.r ? -1 : 1;
  return out;
}

namespace {

std::vector<Gate> pauli_gates(const std::vector<Pauli>& paulis) {
  std::vector<Gate> out;
  for (std::size_t q = 0; q < paulis.size(); ++q) {
    if (paulis[q] != Pauli::kI) out.push_back(Gate::pauli(static_cast<int>(q), paulis[q]));
  }
  return out;
}

}  // namespace

std::vector<TwirlInstance> attach_twirl(const Circuit& inverted, const InversionSpec& spec) {
  if (spec.twirl.instances < 1) throw InputError("twirl needs at least one instance");
  const Layer* target = nullptr;
  for (const Layer& l : inverted.layers()) {
    if (l.origin().role == LayerRole::kOriginal && l.origin().source == spec.target) target = &l;
  }
  if (target == nullptr) throw InputError("target layer not found in inverted circuit");
  if (target->is_virtual()) throw InputError("twirl is not applied to virtual layers");
  for (const Gate& g : target->gates()) {
    if (g.kind() == GateKind::kPauli) throw InputError("target layer contains Pauli gates");
  }

  const int n = inverted.num_qubits();
  const std::vector<int> active = target->active_qubits();
  std::vector<TwirlInstance> out;
  out.reserve(static_cast<std::size_t>(spec.twirl.instances));
  for (int r = 0; r < spec.twirl.instances; ++r) {
    const std::uint64_t seed = derive_seed(spec.twirl.seed, static_cast<std::uint64_t>(r));
    Rng rng(seed);
    std::vector<TwirlLayer> twirls;
    std::vector<Layer> layers;
    const auto& src = inverted.layers();
    for (std::size_t k = 0; k < src.size(); ++k) {
      const Layer& l = src[k];
      const LayerOrigin& o = l.origin();
      const bool in_block = o.source == spec.target && o.block > 0;
      const bool opens = in_block &&
                         (o.role == LayerRole::kConjugationPre ||
                          (o.role == LayerRole::kInverse &&
                           (k == 0 || src[k - 1].origin().role != LayerRole::kConjugationPre)));
      if (opens) {
        TwirlLayer t;
        t.block = o.block;
        t.random.assign(static_cast<std::size_t>(n), Pauli::kI);
        for (int q : active) t.random[static_cast<std::size_t>(q)] = static_cast<Pauli>(rng.below(4));
        t.compensating = conjugate_pauli(*target, t.random, &t.sign);
        std::vector<Gate> g = pauli_gates(t.compensating);
        if (!g.empty()) layers.emplace_back(std::move(g), LayerOrigin{o.source, o.block, LayerRole::kTwirlCompensating});
        twirls.push_back(std::move(t));
      }
      layers.push_back(l);
      const bool closes = in_block &&
                          (o.role == LayerRole::kConjugationPost ||
                           (o.role == LayerRole::kInverse &&
                            (k + 1 == src.size() || src[k + 1].origin().role != LayerRole::kConjugationPost)));
      if (closes) {
        std::vector<Gate> g = pauli_gates(twirls.back().random);
        if (!g.empty()) layers.emplace_back(std::move(g), LayerOrigin{o.source, o.block, LayerRole::kTwirlRandom});
      }
    }
    out.push_back({Circuit(n, std::move(layers)), std::move(twirls), seed});
  }
  return out;
}

}  // namespace locinv
