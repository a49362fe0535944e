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

#include "locinv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locinv/error.hpp"
#include "locinv/rng.hpp"

namespace locinv {

double tvd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("TVD of distributions with different outcome spaces");
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += std::abs(p[k] - q[k]);
  return 0.5 * sum;
}

double tvd(const ProbDist& p, const ProbDist& q) { return tvd(p.probabilities(), q.probabilities()); }

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InputError("pearson needs two equal-length samples");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw InputError("pearson of a zero-variance sample");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

int qubits_for_outcomes(std::size_t m) {
  int n = 0;
  while ((std::size_t{1} << n) < m) ++n;
  if ((std::size_t{1} << n) != m || n == 0) throw InputError("outcome count must be a power of two");
  return n;
}

}  // namespace

std::vector<double> bootstrap_std(std::span<const std::vector<std::uint64_t>> counts, int replicates,
                                  std::uint64_t seed) {
  if (replicates < 2) throw InputError("bootstrap needs at least 2 replicates");
  if (counts.size() < 2) throw InputError("bootstrap needs a baseline and at least one circuit");
  const int n = qubits_for_outcomes(counts[0].size());
  std::vector<ProbDist> empirical;
  std::vector<std::uint64_t> totals;
  for (const auto& c : counts) {
    if (c.size() != counts[0].size()) throw InputError("count vectors differ in length");
    empirical.push_back(ProbDist::from_counts(n, c));
    totals.push_back(std::accumulate(c.begin(), c.end(), std::uint64_t{0}));
  }
  const std::size_t d = counts.size() - 1;
  std::vector<double> p0(counts[0].size());
  std::vector<double> pi(counts[0].size());
  auto resample = [&](std::size_t c, int b, std::vector<double>& out) {
    const auto draw = sample(empirical[c], totals[c], derive_seed(seed, c, static_cast<std::uint64_t>(b)));
    for (std::size_t k = 0; k < draw.size(); ++k) {
      out[k] = static_cast<double>(draw[k]) / static_cast<double>(totals[c]);
    }
  };
  std::vector<std::vector<double>> etas(d, std::vector<double>(static_cast<std::size_t>(replicates)));
  for (int b = 0; b < replicates; ++b) {
    resample(0, b, p0);
    for (std::size_t i = 1; i <= d; ++i) {
      resample(i, b, pi);
      etas[i - 1][static_cast<std::size_t>(b)] = tvd(p0, pi);
    }
  }
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& e = etas[i];
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    double ss = 0.0;
    for (double x : e) ss += (x - mean) * (x - mean);
    out[i] = std::sqrt(ss / static_cast<double>(e.size() - 1));
  }
  return out;
}

namespace {

Qfim finish_qfim(Matrix f) {
  Qfim out;
  f = 0.5 * (f + f.transpose());
  out.matrix = f;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(f);
  if (solver.info() != Eigen::Success) throw NumericError("qFIM eigendecomposition failed");
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  out.top = out.eigenvectors.col(0);
  Eigen::Index arg = 0;
  out.top.cwiseAbs().maxCoeff(&arg);
  if (out.top(arg) < 0) {
    out.top = -out.top;
    out.eigenvectors.col(0) = out.top;
  }
  out.dominant_layer = static_cast<int>(arg) + 1;
  return out;
}

// F_ij = sum_k w_k log(p_i,k / p0_k) log(p_j,k / p0_k).
Qfim qfim_from_probabilities(std::span<const double> weights, const std::vector<double>& p0,
                             const std::vector<std::vector<double>>& ps) {
  const auto d = static_cast<Eigen::Index>(ps.size());
  if (d == 0) throw InputError("qFIM needs at least one inverted distribution");
  const auto m = static_cast<Eigen::Index>(p0.size());
  Matrix logs(d, m);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& p = ps[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(p.size()) != m) throw InputError("qFIM distributions differ in size");
    for (Eigen::Index k = 0; k < m; ++k) {
      logs(i, k) = std::log(p[static_cast<std::size_t>(k)] / p0[static_cast<std::size_t>(k)]);
    }
  }
  const Eigen::Map<const Vector> w(weights.data(), m);
  return finish_qfim(logs * w.asDiagonal() * logs.transpose());
}

}  // namespace

Qfim qfim(const ProbDist& baseline, std::span<const ProbDist> inverted) {
  auto floored = [](const ProbDist& p) {
    std::vector<double> out = p.probabilities();
    for (double& x : out) x = std::max(x, kQfimFloor);
    return out;
  };
  std::vector<std::vector<double>> ps;
  for (const ProbDist& p : inverted) ps.push_back(floored(p));
  return qfim_from_probabilities(baseline.probabilities(), floored(baseline), ps);
}

Qfim qfim_from_counts(std::span<const std::vector<std::uint64_t>> counts) {
  if (counts.size() < 2) throw InputError("qFIM needs a baseline and at least one circuit");
  auto smoothed = [](const std::vector<std::uint64_t>& c) {
    const double total = static_cast<double>(std::accumulate(c.begin(), c.end(), std::uint64_t{0}));
    std::vector<double> out(c.size());
    const double denom = total + 0.5 * static_cast<double>(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = (static_cast<double>(c[k]) + 0.5) / denom;
    return out;
  };
  std::vector<std::vector<double>> ps;
  for (std::size_t i = 1; i < counts.size(); ++i) ps.push_back(smoothed(counts[i]));
  const std::vector<double> p0 = smoothed(counts[0]);
  return qfim_from_probabilities(p0, p0, ps);
}

std::vector<double> SensitivityReport::etas() const {
  std::vector<double> out;
  for (const auto& l : layers) out.push_back(l.eta);
  return out;
}

int SensitivityReport::dominant_layer() const {
  int best = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].eta > layers[static_cast<std::size_t>(best)].eta) best = static_cast<int>(i);
  }
  return best + 1;
}

ProbDist inverted_distribution(const Circuit& circuit, const ErrorModel& model, int layer,
                               int repetitions, const TwirlSpec& twirl, const SimOptions& sim) {
  InversionSpec spec{layer, repetitions, twirl};
  const Circuit inverted = build_inverted(circuit, spec);
  if (!twirl.enabled || circuit.layer(layer).is_virtual()) return simulate(inverted, model, sim);
  spec.twirl.seed = derive_seed(twirl.seed, static_cast<std::uint64_t>(layer));
  std::vector<ProbDist> dists;
  for (const TwirlInstance& inst : attach_twirl(inverted, spec)) {
    dists.push_back(simulate(inst.circuit, model, sim));
  }
  return ProbDist::average(dists);
}

std::vector<double> ideal_profile(const Circuit& circuit, const ErrorModel& model, const SimOptions& sim) {
  const ProbDist baseline = simulate(circuit, model, sim);
  std::vector<double> out;
  for (int i = 1; i <= circuit.depth(); ++i) {
    out.push_back(tvd(baseline, simulate(circuit, model.with_ideal_layer(circuit.layer(i).origin().source), sim)));
  }
  return out;
}

namespace {

constexpr std::uint64_t kSampleStream = 0x73616d70;
constexpr std::uint64_t kBootstrapStream = 0x626f6f74;

}  // namespace

SensitivityReport profile(const Circuit& circuit, const ErrorModel& model, const ProfileOptions& options) {
  if (options.repetitions < 1) throw InputError("repetitions must be at least 1");
  if (options.shots && options.shots->shots < 1) throw InputError("shots must be at least 1");
  if (options.shots && options.shots->contexts < 1) throw InputError("contexts must be at least 1");
  SensitivityReport report;
  report.num_qubits = circuit.num_qubits();
  report.repetitions = options.repetitions;
  report.twirl = options.twirl;
  report.shots = options.shots;
  report.baseline = simulate(circuit, model, options.sim);
  const int d = circuit.depth();
  for (int i = 1; i <= d; ++i) {
    report.inverted.push_back(
        inverted_distribution(circuit, model, i, options.repetitions, options.twirl, options.sim));
    LayerSensitivity l;
    l.index = i;
    l.is_virtual = circuit.layer(i).is_virtual();
    l.twirl_suppressed = options.twirl.enabled && l.is_virtual;
    report.layers.push_back(l);
  }

  if (options.shots) {
    const int n = circuit.num_qubits();
    const std::uint64_t base = derive_seed(options.shots->seed, kSampleStream);
    for (int c = 0; c <= d; ++c) {
      const ProbDist& dist = c == 0 ? report.baseline : report.inverted[static_cast<std::size_t>(c - 1)];
      std::vector<std::vector<std::uint64_t>> per_context;
      std::vector<std::uint64_t> pooled(dist.size(), 0);
      for (int s = 0; s < options.shots->contexts; ++s) {
        per_context.push_back(sample(dist, options.shots->shots,
                                     derive_seed(base, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(s))));
        for (std::size_t k = 0; k < pooled.size(); ++k) pooled[k] += per_context.back()[k];
      }
      report.context_counts.push_back(std::move(per_context));
      report.counts.push_back(std::move(pooled));
    }
    const ProbDist p0 = ProbDist::from_counts(n, report.counts[0]);
    for (int i = 1; i <= d; ++i) {
      report.layers[static_cast<std::size_t>(i - 1)].eta =
          tvd(p0, ProbDist::from_counts(n, report.counts[static_cast<std::size_t>(i)]));
    }
    if (options.bootstrap > 0) {
      report.bootstrap = options.bootstrap;
      const auto stds = bootstrap_std(report.counts, options.bootstrap,
                                      derive_seed(options.shots->seed, kBootstrapStream));
      for (int i = 0; i < d; ++i) report.layers[static_cast<std::size_t>(i)].std = stds[static_cast<std::size_t>(i)];
    }
    if (options.with_qfim) report.qfim = qfim_from_counts(report.counts);
  } else {
    for (int i = 0; i < d; ++i) {
      report.layers[static_cast<std::size_t>(i)].eta = tvd(report.baseline, report.inverted[static_cast<std::size_t>(i)]);
    }
    if (options.with_qfim) report.qfim = qfim(report.baseline, report.inverted);
  }

  if (options.with_ideal) {
    const std::vector<double> ideal = ideal_profile(circuit, model, options.sim);
    for (int i = 0; i < d; ++i) report.layers[static_cast<std::size_t>(i)].eta_ideal = ideal[static_cast<std::size_t>(i)];
    try {
      report.pearson = pearson(report.etas(), ideal);
    } catch (const InputError&) {
      report.pearson.reset();
    }
  }
  return report;
}

}  // namespace locinv
