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

#ifndef LOCINV_ANALYSIS_HPP
#define LOCINV_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locinv/circuit.hpp"
#include "locinv/sim.hpp"
#include "locinv/superop.hpp"

namespace locinv {

double tvd(std::span<const double> p, std::span<const double> q);
double tvd(const ProbDist& p, const ProbDist& q);

// Sample Pearson correlation. Throws InputError on zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Bootstrap std of eta for each inverted circuit. counts[0] holds the
// baseline, counts[i] the i-inverted circuit. Replicate b of circuit c is
// drawn from derive_seed(seed, c, b).
std::vector<double> bootstrap_std(std::span<const std::vector<std::uint64_t>> counts, int replicates,
                                  std::uint64_t seed);

struct Qfim {
  Matrix matrix;
  // Descending, with matching eigenvector columns.
  Vector eigenvalues;
  Matrix eigenvectors;
  // Leading eigenvector, signed so its largest-magnitude entry is positive.
  Vector top;
  // 1-based argmax |top|.
  int dominant_layer = 1;
};

constexpr double kQfimFloor = 1e-12;

// Probabilities are floored at kQfimFloor before taking logs.
Qfim qfim(const ProbDist& baseline, std::span<const ProbDist> inverted);
// Count data with a half pseudo-count per outcome. counts[0] is the baseline.
Qfim qfim_from_counts(std::span<const std::vector<std::uint64_t>> counts);

struct ShotSpec {
  // Shots per circuit per context.
  std::uint64_t shots = 1024;
  std::uint64_t seed = 0;
  // Independent batches (jobs); profiles pool them.
  int contexts = 1;
};

struct ProfileOptions {
  int repetitions = 1;
  TwirlSpec twirl;
  // Exact distributions when empty.
  std::optional<ShotSpec> shots;
  int bootstrap = 1000;
  bool with_ideal = true;
  bool with_qfim = true;
  SimOptions sim;
};

struct LayerSensitivity {
  int index = 0;
  bool is_virtual = false;
  bool twirl_suppressed = false;
  double eta = 0.0;
  std::optional<double> std;
  std::optional<double> eta_ideal;
};

struct SensitivityReport {
  int num_qubits = 0;
  int repetitions = 1;
  TwirlSpec twirl;
  std::optional<ShotSpec> shots;
  int bootstrap = 0;
  std::vector<LayerSensitivity> layers;
  std::optional<double> pearson;
  std::optional<Qfim> qfim;
  ProbDist baseline;
  std::vector<ProbDist> inverted;
  // Shots mode only, pooled over contexts: [0] baseline, [i] i-inverted circuit.
  std::vector<std::vector<std::uint64_t>> counts;
  // Shots mode only: [circuit][context] outcome counts.
  std::vector<std::vector<std::vector<std::uint64_t>>> context_counts;

  std::vector<double> etas() const;
  // 1-based argmax of eta.
  int dominant_layer() const;
};

// Output distribution of the i-inverted circuit, twirl-averaged when the
// twirl is on and the target layer is physical.
ProbDist inverted_distribution(const Circuit& circuit, const ErrorModel& model, int layer,
                               int repetitions, const TwirlSpec& twirl, const SimOptions& sim = {});

// Per-layer TVD between the noisy circuit and its i-ideal variant.
std::vector<double> ideal_profile(const Circuit& circuit, const ErrorModel& model,
                                  const SimOptions& sim = {});

SensitivityReport profile(const Circuit& circuit, const ErrorModel& model, const ProfileOptions& options);

}  // namespace locinv

#endif  // LOCINV_ANALYSIS_HPP
