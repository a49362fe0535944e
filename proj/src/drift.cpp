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

#include "locinv/drift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locinv/error.hpp"
#include "locinv/gamma.hpp"

namespace locinv {

ContextCounts::ContextCounts(int circuits, int contexts, int outcomes)
    : circuits_(circuits), contexts_(contexts), outcomes_(outcomes) {
  if (circuits < 1 || contexts < 1 || outcomes < 2) {
    throw InputError("count tensor needs Q >= 1, S >= 1 and M >= 2");
  }
  x_.assign(static_cast<std::size_t>(circuits) * static_cast<std::size_t>(contexts) *
                static_cast<std::size_t>(outcomes),
            0);
  for (int q = 0; q < circuits; ++q) circuit_ids.push_back(std::to_string(q));
  for (int s = 0; s < contexts; ++s) context_ids.push_back(std::to_string(s));
}

std::size_t ContextCounts::index(int q, int s, int m) const {
  if (q < 0 || q >= circuits_ || s < 0 || s >= contexts_ || m < 0 || m >= outcomes_) {
    throw InputError("count index out of range");
  }
  return (static_cast<std::size_t>(q) * static_cast<std::size_t>(contexts_) + static_cast<std::size_t>(s)) *
             static_cast<std::size_t>(outcomes_) +
         static_cast<std::size_t>(m);
}

std::uint64_t ContextCounts::total(int q, int s) const {
  std::uint64_t sum = 0;
  for (int m = 0; m < outcomes_; ++m) sum += at(q, s, m);
  return sum;
}

ContextCounts ContextCounts::select_contexts(std::span<const int> contexts) const {
  ContextCounts out(circuits_, static_cast<int>(contexts.size()), outcomes_);
  out.circuit_ids = circuit_ids;
  out.context_ids.clear();
  for (std::size_t j = 0; j < contexts.size(); ++j) {
    const int s = contexts[j];
    if (s < 0 || s >= contexts_) throw InputError("context index out of range");
    out.context_ids.push_back(context_ids[static_cast<std::size_t>(s)]);
    for (int q = 0; q < circuits_; ++q) {
      for (int m = 0; m < outcomes_; ++m) out.at(q, static_cast<int>(j), m) = at(q, s, m);
    }
  }
  return out;
}

namespace {

// x log(x / n) with 0 log 0 = 0.
double xlogx(std::uint64_t x, std::uint64_t n) {
  if (x == 0) return 0.0;
  return static_cast<double>(x) * std::log(static_cast<double>(x) / static_cast<double>(n));
}

}  // namespace

double llr(const ContextCounts& counts, int q) {
  const int s_count = counts.contexts();
  if (s_count < 2) throw InputError("LLR needs at least two contexts");
  std::vector<std::uint64_t> n_s(static_cast<std::size_t>(s_count));
  std::uint64_t n = 0;
  for (int s = 0; s < s_count; ++s) {
    n_s[static_cast<std::size_t>(s)] = counts.total(q, s);
    if (n_s[static_cast<std::size_t>(s)] == 0) {
      throw InputError("circuit " + counts.circuit_ids[static_cast<std::size_t>(q)] + " has no counts in context " +
                       counts.context_ids[static_cast<std::size_t>(s)]);
    }
    n += n_s[static_cast<std::size_t>(s)];
  }
  double split = 0.0;
  double pooled = 0.0;
  for (int m = 0; m < counts.outcomes(); ++m) {
    std::uint64_t x_m = 0;
    for (int s = 0; s < s_count; ++s) {
      const std::uint64_t x = counts.at(q, s, m);
      split += xlogx(x, n_s[static_cast<std::size_t>(s)]);
      x_m += x;
    }
    pooled += xlogx(x_m, n);
  }
  return std::max(0.0, 2.0 * (split - pooled));
}

double pvalue(double lambda, int dof) {
  if (dof < 1) throw InputError("chi-square needs at least one degree of freedom");
  if (!(lambda >= 0.0)) throw InputError("LLR statistic must be nonnegative");
  return regularized_gamma_q(0.5 * dof, 0.5 * lambda);
}

double chi2_quantile(double prob, int dof) {
  if (dof < 1) throw InputError("chi-square needs at least one degree of freedom");
  if (!(prob > 0.0 && prob < 1.0)) throw InputError("quantile probability must lie in (0, 1)");
  const double upper = 1.0 - prob;
  double lo = 0.0;
  double hi = dof + 40.0 * std::sqrt(2.0 * dof);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pvalue(mid, dof) > upper) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

HochbergResult hochberg(std::span<const double> pvalues, double alpha) {
  if (pvalues.empty()) throw InputError("Hochberg needs at least one p-value");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("significance must lie in (0, 1)");
  const int q = static_cast<int>(pvalues.size());
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());
  HochbergResult out;
  for (int r = q; r >= 1; --r) {
    if (sorted[static_cast<std::size_t>(r - 1)] <= alpha / (q - r + 1)) {
      out.r_max = r;
      break;
    }
  }
  out.threshold = alpha / (q - out.r_max + 1);
  for (int k = 0; k < q; ++k) {
    if (pvalues[static_cast<std::size_t>(k)] < out.threshold) out.rejected.push_back(k);
  }
  return out;
}

AggregateResult aggregate(std::span<const double> lambdas, int contexts, int outcomes) {
  if (lambdas.empty() || contexts < 2 || outcomes < 2) {
    throw InputError("aggregate test needs Q >= 1, S >= 2 and M >= 2");
  }
  AggregateResult out;
  out.lambda = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
  out.dof = static_cast<int>(lambdas.size()) * (contexts - 1) * (outcomes - 1);
  out.n_sigma = (out.lambda - out.dof) / std::sqrt(2.0 * out.dof);
  return out;
}

double n_sigma_threshold(double alpha, int dof) {
  return (chi2_quantile(1.0 - alpha, dof) - dof) / std::sqrt(2.0 * dof);
}

ContextTest context_test(const ContextCounts& counts, std::span<const int> contexts, double alpha) {
  if (contexts.size() < 2) throw InputError("a context comparison needs at least two contexts");
  const ContextCounts sub = counts.select_contexts(contexts);
  ContextTest out;
  out.contexts.assign(contexts.begin(), contexts.end());
  out.alpha = alpha;
  const int dof = (sub.contexts() - 1) * (sub.outcomes() - 1);
  for (int q = 0; q < sub.circuits(); ++q) {
    out.lambdas.push_back(llr(sub, q));
    out.pvalues.push_back(pvalue(out.lambdas.back(), dof));
  }
  out.aggregate = aggregate(out.lambdas, sub.contexts(), sub.outcomes());
  out.n_sigma_threshold = n_sigma_threshold(alpha / 2.0, out.aggregate.dof);
  out.aggregate_detected = out.aggregate.n_sigma > out.n_sigma_threshold;
  out.beta = out.aggregate_detected ? alpha : alpha / 2.0;
  out.ict = hochberg(out.pvalues, out.beta);
  return out;
}

bool DriftReport::detected() const {
  if (joint.detected()) return true;
  return std::any_of(pairwise.begin(), pairwise.end(), [](const ContextTest& t) { return t.detected(); });
}

DriftReport two_step(const ContextCounts& counts, double alpha, std::optional<int> comparisons) {
  const int s_all = counts.contexts();
  if (s_all < 2) throw InputError("drift analysis needs at least two contexts");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("significance must lie in (0, 1)");
  DriftReport out;
  out.alpha = alpha;
  out.comparisons = s_all > 2 ? s_all * (s_all - 1) / 2 + 1 : 1;
  if (comparisons) {
    if (*comparisons < 1) throw InputError("comparison count must be positive");
    out.comparisons = *comparisons;
  }
  out.comparison_alpha = alpha / out.comparisons;
  std::vector<int> all(static_cast<std::size_t>(s_all));
  std::iota(all.begin(), all.end(), 0);
  out.joint = context_test(counts, all, out.comparison_alpha);
  out.pairwise_matrix = Matrix::Zero(s_all, s_all);
  if (s_all == 2) {
    out.pairwise.push_back(out.joint);
  } else {
    for (int a = 0; a < s_all; ++a) {
      for (int b = a + 1; b < s_all; ++b) {
        const int pair[2] = {a, b};
        out.pairwise.push_back(context_test(counts, pair, out.comparison_alpha));
      }
    }
  }
  for (const ContextTest& t : out.pairwise) {
    const int a = t.contexts[0];
    const int b = t.contexts[1];
    out.pairwise_matrix(a, b) = t.aggregate.n_sigma;
    out.pairwise_matrix(b, a) = static_cast<double>(t.ict.rejected.size());
  }
  return out;
}

}  // namespace locinv
