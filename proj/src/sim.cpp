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

#include "locinv/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "locinv/error.hpp"
#include "locinv/rng.hpp"

namespace locinv {

ProbDist::ProbDist(int num_qubits, std::vector<double> p) : num_qubits_(num_qubits), p_(std::move(p)) {
  if (num_qubits < 1 || p_.size() != (std::size_t{1} << num_qubits)) {
    throw InputError("distribution length must be 2^n");
  }
  double sum = 0.0;
  for (double& x : p_) {
    if (!std::isfinite(x) || x < -1e-12) {
      throw NumericError("negative probability " + std::to_string(x) + "; model is not CPTP");
    }
    x = std::max(x, 0.0);
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw NumericError("probabilities sum to " + std::to_string(sum));
  }
  for (double& x : p_) x /= sum;
}

ProbDist ProbDist::from_counts(int num_qubits, std::span<const std::uint64_t> counts) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw InputError("no counts");
  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return ProbDist(num_qubits, std::move(p));
}

ProbDist ProbDist::average(std::span<const ProbDist> dists) {
  if (dists.empty()) throw InputError("nothing to average");
  std::vector<double> p(dists.front().size(), 0.0);
  for (const ProbDist& d : dists) {
    if (d.size() != p.size()) throw InputError("distributions differ in size");
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += d[k];
  }
  for (double& x : p) x /= static_cast<double>(dists.size());
  return ProbDist(dists.front().num_qubits(), std::move(p));
}

std::string format_bitstring(std::size_t k, int num_qubits) {
  std::string out(static_cast<std::size_t>(num_qubits), '0');
  for (int q = 0; q < num_qubits; ++q) {
    if ((k >> (num_qubits - 1 - q)) & 1U) out[static_cast<std::size_t>(q)] = '1';
  }
  return out;
}

std::size_t parse_bitstring(std::string_view bits) {
  if (bits.empty() || bits.size() > 63) throw InputError("bad bitstring '" + std::string(bits) + "'");
  std::size_t k = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InputError("bad bitstring '" + std::string(bits) + "'");
    k = (k << 1) | static_cast<std::size_t>(c == '1');
  }
  return k;
}

namespace {

std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }

// Index of the Pauli string with Z exactly where `zmask` has bits.
std::size_t z_index(std::size_t zmask, int num_qubits) {
  std::size_t idx = 0;
  for (int q = 0; q < num_qubits; ++q) {
    if ((zmask >> (num_qubits - 1 - q)) & 1U) idx |= std::size_t{3} << (2 * (num_qubits - 1 - q));
  }
  return idx;
}

}  // namespace

std::vector<double> initial_state(int num_qubits) {
  std::vector<double> v(pow4(num_qubits), 0.0);
  for (std::size_t z = 0; z < (std::size_t{1} << num_qubits); ++z) v[z_index(z, num_qubits)] = 1.0;
  return v;
}

std::vector<double> readout(std::span<const double> state, int num_qubits) {
  if (state.size() != pow4(num_qubits)) throw InputError("state length does not match qubit count");
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<double> w(dim);
  for (std::size_t z = 0; z < dim; ++z) w[z] = state[z_index(z, num_qubits)];
  for (std::size_t h = 1; h < dim; h <<= 1) {
    for (std::size_t i = 0; i < dim; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = w[j];
        const double b = w[j + h];
        w[j] = a + b;
        w[j + h] = a - b;
      }
    }
  }
  for (double& x : w) x /= static_cast<double>(dim);
  return w;
}

std::vector<LayerContext> layer_contexts(const Circuit& circuit, const ErrorModel& model) {
  const auto& schedules = model.degradation();
  std::vector<int> counters(schedules.size(), 0);
  std::map<std::tuple<std::size_t, int, std::vector<int>>, int> ordinals;
  std::vector<LayerContext> out;
  out.reserve(circuit.layers().size());
  for (const Layer& layer : circuit.layers()) {
    LayerContext ctx;
    ctx.source_layer = layer.origin().source;
    ctx.ideal = model.is_ideal() || model.layer_is_ideal(ctx.source_layer);
    if (!schedules.empty()) {
      ctx.depolarizing.assign(layer.gates().size(), 0.0);
      for (std::size_t k = 0; k < layer.gates().size(); ++k) {
        const Gate& g = layer.gates()[k];
        if (!g.is_physical()) continue;
        for (std::size_t s = 0; s < schedules.size(); ++s) {
          if (!schedules[s].matches(g)) continue;
          std::vector<int> qs(g.qubits().begin(), g.qubits().end());
          std::sort(qs.begin(), qs.end());
          auto key = std::make_tuple(s, ctx.source_layer, std::move(qs));
          auto it = ordinals.find(key);
          int ordinal;
          if (layer.origin().role == LayerRole::kOriginal || it == ordinals.end()) {
            ordinal = counters[s]++;
            ordinals[key] = ordinal;
          } else {
            ordinal = it->second;
          }
          ctx.depolarizing[k] = schedules[s].probability(ordinal);
          break;
        }
      }
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

ProbDist simulate(const Circuit& circuit, const ErrorModel& model, const SimOptions& options) {
  const int n = circuit.num_qubits();
  if (n > options.max_qubits) {
    throw InputError(std::to_string(n) + " qubits exceeds the simulation cap of " +
                     std::to_string(options.max_qubits));
  }
  const std::vector<LayerContext> contexts = layer_contexts(circuit, model);
  std::vector<double> state = initial_state(n);
  for (std::size_t l = 0; l < circuit.layers().size(); ++l) {
    for (const LocalOp& op : layer_ops(circuit.layers()[l], model, contexts[l])) {
      apply_local(state, n, op.map, op.qubits);
    }
    if (std::abs(state[0] - 1.0) > 1e-9) {
      throw NumericError("trace not preserved after layer " + std::to_string(l + 1));
    }
  }
  return ProbDist(n, readout(state, n));
}

std::vector<std::uint64_t> sample(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw InputError("shots must be at least 1");
  std::vector<double> cdf(dist.size());
  std::partial_sum(dist.probabilities().begin(), dist.probabilities().end(), cdf.begin());
  std::size_t last = 0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] > 0.0) last = k;
  }
  std::vector<std::uint64_t> counts(dist.size(), 0);
  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * cdf.back();
    auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++counts[std::min(k, last)];
  }
  return counts;
}

namespace {

void apply_layer(std::vector<double>& state, int n, const Layer& layer, const ErrorModel& model,
                 const LayerContext& ctx) {
  for (const LocalOp& op : layer_ops(layer, model, ctx)) apply_local(state, n, op.map, op.qubits);
}

}  // namespace

PerturbationResult first_order(const Circuit& circuit, const ErrorModel& model, int layer) {
  const int n = circuit.num_qubits();
  if (n > kDenseQubitCap) {
    throw InputError("first-order analysis builds dense maps; limited to " +
                     std::to_string(kDenseQubitCap) + " qubits");
  }
  const Circuit inverted = build_inverted(circuit, {layer, 1, {}});
  const std::vector<LayerContext> contexts = layer_contexts(inverted, model);
  const auto pos = static_cast<std::size_t>(layer - 1);
  const Layer& target = inverted.layers()[pos];

  const Ptm ideal_i = ideal_layer_superop(target, n);
  const Ptm noisy_i = layer_superop(target, n, model, contexts[pos]);
  Ptm ideal_inv = Ptm::identity(n);
  Ptm noisy_inv = Ptm::identity(n);
  for (std::size_t k = pos + 1; k < inverted.layers().size(); ++k) {
    const Layer& l = inverted.layers()[k];
    if (l.origin().block != 1 || l.origin().role == LayerRole::kRepeat) break;
    ideal_inv = ideal_layer_superop(l, n) * ideal_inv;
    noisy_inv = layer_superop(l, n, model, contexts[k]) * noisy_inv;
  }

  PerturbationResult out;
  out.layer = layer;
  out.layer_generator = error_generator(Ptm(n, noisy_i.matrix() * ideal_i.matrix().transpose()));
  out.inverse_generator = error_generator(Ptm(n, noisy_inv.matrix() * ideal_inv.matrix().transpose()));
  const Matrix& u = ideal_i.matrix();
  out.lambda = out.layer_generator.generator + u * out.inverse_generator.generator * u.transpose();

  LayerContext ideal_ctx;
  ideal_ctx.ideal = true;
  std::vector<double> state = initial_state(n);
  for (int j = 1; j <= layer; ++j) apply_layer(state, n, circuit.layer(j), model, ideal_ctx);
  const Eigen::Map<const Vector> rho(state.data(), static_cast<Eigen::Index>(state.size()));
  std::vector<double> with_lambda(state.size());
  std::vector<double> with_error(state.size());
  Eigen::Map<Vector>(with_lambda.data(), rho.size()) = out.lambda * rho;
  Eigen::Map<Vector>(with_error.data(), rho.size()) = out.layer_generator.generator * rho;
  for (int j = layer + 1; j <= circuit.depth(); ++j) {
    apply_layer(with_lambda, n, circuit.layer(j), model, ideal_ctx);
    apply_layer(with_error, n, circuit.layer(j), model, ideal_ctx);
  }
  out.delta = readout(with_lambda, n);
  out.delta_ideal = readout(with_error, n);
  for (double x : out.delta) out.eta += 0.5 * std::abs(x);
  for (double x : out.delta_ideal) out.eta_ideal += 0.5 * std::abs(x);
  return out;
}

}  // namespace locinv
