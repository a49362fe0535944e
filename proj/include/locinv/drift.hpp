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

#ifndef LOCINV_DRIFT_HPP
#define LOCINV_DRIFT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locinv/superop.hpp"

namespace locinv {

// Q circuits x S contexts x M outcomes.
class ContextCounts {
 public:
  ContextCounts(int circuits, int contexts, int outcomes);

  int circuits() const { return circuits_; }
  int contexts() const { return contexts_; }
  int outcomes() const { return outcomes_; }

  std::uint64_t& at(int q, int s, int m) { return x_[index(q, s, m)]; }
  std::uint64_t at(int q, int s, int m) const { return x_[index(q, s, m)]; }
  std::uint64_t total(int q, int s) const;

  // Restriction to a subset of contexts, in the given order.
  ContextCounts select_contexts(std::span<const int> contexts) const;

  std::vector<std::string> circuit_ids;
  std::vector<std::string> context_ids;

 private:
  std::size_t index(int q, int s, int m) const;

  int circuits_;
  int contexts_;
  int outcomes_;
  std::vector<std::uint64_t> x_;
};

// Log-likelihood ratio of "one distribution for all contexts" against
// "one per context", for circuit q.
double llr(const ContextCounts& counts, int q);

// 1 - F_k(lambda) for the chi-square CDF F_k.
double pvalue(double lambda, int dof);
// F_k^-1(prob) by bisection on [0, k + 40 sqrt(2k)].
double chi2_quantile(double prob, int dof);

struct HochbergResult {
  // 0-based, ascending.
  std::vector<int> rejected;
  double threshold = 0.0;
  int r_max = 0;
};

HochbergResult hochberg(std::span<const double> pvalues, double alpha);

struct AggregateResult {
  double lambda = 0.0;
  int dof = 0;
  double n_sigma = 0.0;
};

AggregateResult aggregate(std::span<const double> lambdas, int contexts, int outcomes);
double n_sigma_threshold(double alpha, int dof);

// One application of the two-step procedure at significance alpha.
struct ContextTest {
  std::vector<int> contexts;
  double alpha = 0.0;
  std::vector<double> lambdas;
  std::vector<double> pvalues;
  AggregateResult aggregate;
  double n_sigma_threshold = 0.0;
  bool aggregate_detected = false;
  double beta = 0.0;
  HochbergResult ict;

  bool detected() const { return aggregate_detected || !ict.rejected.empty(); }
};

ContextTest context_test(const ContextCounts& counts, std::span<const int> contexts, double alpha);

struct DriftReport {
  double alpha = 0.0;
  int comparisons = 1;
  double comparison_alpha = 0.0;
  ContextTest joint;
  std::vector<ContextTest> pairwise;
  // S x S: N_sigma above the diagonal, rejected-circuit counts below.
  Matrix pairwise_matrix;

  bool detected() const;
};

// Joint test over all contexts plus every pairwise test when S > 2, with
// alpha split evenly over the comparisons (C(S,2) + 1 unless given).
DriftReport two_step(const ContextCounts& counts, double alpha,
                     std::optional<int> comparisons = std::nullopt);

}  // namespace locinv

#endif  // LOCINV_DRIFT_HPP
