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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "locinv/analysis.hpp"
#include "locinv/error.hpp"
#include "locinv/fixtures.hpp"
#include "test_util.hpp"

namespace locinv {
namespace {

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

TEST(Tvd, Examples) {
  const auto p = v({0.2, 0.3, 0.5});
  EXPECT_DOUBLE_EQ(tvd(p, p), 0.0);
  EXPECT_DOUBLE_EQ(tvd(v({1.0, 0.0}), v({0.0, 1.0})), 1.0);
  EXPECT_DOUBLE_EQ(tvd(v({0.5, 0.5}), v({0.75, 0.25})), 0.25);
  EXPECT_THROW(tvd(v({1.0}), v({0.5, 0.5})), InputError);
}

TEST(TvdProperty, MetricAxioms) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.below(16);
    const auto a = testing::random_distribution(rng, m, true);
    const auto b = testing::random_distribution(rng, m, true);
    const auto c = testing::random_distribution(rng, m);
    const double ab = tvd(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-15);
    EXPECT_DOUBLE_EQ(ab, tvd(b, a));
    EXPECT_LE(ab, tvd(a, c) + tvd(c, b) + 1e-15);
  }
}

TEST(Pearson, Examples) {
  const auto x = v({1.0, 2.0, 3.0, 5.0});
  EXPECT_NEAR(pearson(x, x), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, v({-1.0, -2.0, -3.0, -5.0})), -1.0, 1e-15);
  // numpy.corrcoef oracle.
  EXPECT_NEAR(pearson(v({1, 2, 3}), v({2, 4, 7})), 0.9933992677987828, 1e-12);
  EXPECT_THROW(pearson(v({1, 1, 1}), v({1, 2, 3})), InputError);
  EXPECT_THROW(pearson(v({1}), v({1})), InputError);
  EXPECT_THROW(pearson(v({1, 2}), v({1, 2, 3})), InputError);
}

TEST(PearsonProperty, AffineInvariance) {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(2 + rng.below(10));
    std::vector<double> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = testing::normal(rng);
      y[k] = testing::normal(rng);
    }
    const double r = pearson(x, y);
    EXPECT_LE(std::abs(r), 1.0);
    std::vector<double> z(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) z[k] = 3.5 * y[k] - 2.0;
    EXPECT_NEAR(pearson(x, z), r, 1e-12);
  }
}

TEST(Bootstrap, DeterministicCountsHaveZeroSpread) {
  const std::vector<std::vector<std::uint64_t>> counts = {{100, 0}, {0, 100}, {100, 0}};
  const auto s = bootstrap_std(counts, 50, 1);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[1], 0.0);
  EXPECT_THROW(bootstrap_std(counts, 1, 1), InputError);
}

TEST(Bootstrap, ReproducibleFromSeed) {
  const std::vector<std::vector<std::uint64_t>> counts = {{40, 60, 5, 7}, {50, 50, 3, 9}};
  EXPECT_EQ(bootstrap_std(counts, 100, 9), bootstrap_std(counts, 100, 9));
  EXPECT_NE(bootstrap_std(counts, 100, 9), bootstrap_std(counts, 100, 10));
}

TEST(Bootstrap, DoublingShotsShrinksSpreadBySqrtTwo) {
  const ProbDist base(2, {0.4, 0.3, 0.2, 0.1});
  const ProbDist pert(2, {0.2, 0.3, 0.3, 0.2});
  auto mean_std = [&](std::uint64_t shots) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const std::vector<std::vector<std::uint64_t>> counts = {sample(base, shots, 2 * seed),
                                                              sample(pert, shots, 2 * seed + 1)};
      sum += bootstrap_std(counts, 1000, seed)[0];
    }
    return sum / 8;
  };
  const double ratio = mean_std(4000) / mean_std(8000);
  EXPECT_NEAR(ratio, std::sqrt(2.0), 0.1 * std::sqrt(2.0));
}

TEST(Qfim, EqualDistributionsGiveZero) {
  const ProbDist p(1, {0.3, 0.7});
  const std::vector<ProbDist> inv = {p, p, p};
  const Qfim f = qfim(p, inv);
  EXPECT_LT(f.matrix.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Qfim, TwoOutcomeToy) {
  const ProbDist p(1, {0.5, 0.5});
  const std::vector<ProbDist> inv = {ProbDist(1, {0.6, 0.4}), p};
  const Qfim f = qfim(p, inv);
  const double expected = 0.5 * std::pow(std::log(1.2), 2) + 0.5 * std::pow(std::log(0.8), 2);
  EXPECT_NEAR(f.matrix(0, 0), expected, 1e-15);
  EXPECT_NEAR(f.matrix(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(f.matrix(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(f.matrix(1, 1), 0.0, 1e-15);
  // Rank one: top eigenvector is the indicator of layer 1.
  EXPECT_NEAR(f.eigenvalues(0), expected, 1e-15);
  EXPECT_NEAR(f.eigenvalues(1), 0.0, 1e-15);
  EXPECT_NEAR(f.top(0), 1.0, 1e-12);
  EXPECT_NEAR(f.top(1), 0.0, 1e-12);
  EXPECT_EQ(f.dominant_layer, 1);
}

TEST(Qfim, FloorKeepsLogsFinite) {
  const ProbDist p(1, {1.0, 0.0});
  const std::vector<ProbDist> inv = {ProbDist(1, {0.0, 1.0})};
  const Qfim f = qfim(p, inv);
  EXPECT_TRUE(std::isfinite(f.matrix(0, 0)));
  EXPECT_NEAR(f.matrix(0, 0), std::pow(std::log(kQfimFloor), 2), 1e-9);
}

TEST(Qfim, CountModeUsesHalfPseudoCounts) {
  const std::vector<std::vector<std::uint64_t>> counts = {{1, 0}, {0, 1}};
  const Qfim f = qfim_from_counts(counts);
  // Baseline (0.75, 0.25), inverted (0.25, 0.75).
  const double l = std::log(3.0);
  EXPECT_NEAR(f.matrix(0, 0), 0.75 * l * l + 0.25 * l * l, 1e-14);
  EXPECT_THROW(qfim_from_counts(std::vector<std::vector<std::uint64_t>>{{1, 2}}), InputError);
}

TEST(QfimProperty, SymmetricPositiveSemidefinite) {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = std::size_t{1} << (1 + rng.below(3));
    const int n = static_cast<int>(std::log2(static_cast<double>(m)));
    const ProbDist base(n, testing::random_distribution(rng, m, rng.below(2) == 0));
    std::vector<ProbDist> inv;
    const std::size_t d = 1 + rng.below(8);
    for (std::size_t i = 0; i < d; ++i) inv.emplace_back(n, testing::random_distribution(rng, m, rng.below(2) == 0));
    const Qfim f = qfim(base, inv);
    EXPECT_LT((f.matrix - f.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    for (Eigen::Index k = 0; k < f.eigenvalues.size(); ++k) {
      EXPECT_GE(f.eigenvalues(k), -1e-9 * std::max(1.0, f.eigenvalues(0)));
      if (k > 0) EXPECT_LE(f.eigenvalues(k), f.eigenvalues(k - 1));
    }
    Eigen::Index arg = 0;
    f.top.cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(f.top(arg), 0.0);
    EXPECT_EQ(f.dominant_layer, arg + 1);
    EXPECT_LT((f.matrix * f.top - f.eigenvalues(0) * f.top).norm(), 1e-8 * std::max(1.0, f.eigenvalues(0)));
  }
}

TEST(Profile, IdealModelIsZero) {
  const Circuit c = qaoa4(kQaoaOptimized);
  ProfileOptions opts;
  opts.with_qfim = false;
  const SensitivityReport r = profile(c, ErrorModel::ideal(), opts);
  ASSERT_EQ(r.layers.size(), 9u);
  for (const auto& l : r.layers) {
    EXPECT_LT(l.eta, 1e-12);
    EXPECT_LT(*l.eta_ideal, 1e-12);
  }
  EXPECT_FALSE(r.pearson.has_value());
  for (double x : ideal_profile(c, ErrorModel::ideal())) EXPECT_LT(x, 1e-12);
}

TEST(Profile, TwirlOnIdealModelIsZero) {
  const Circuit c = qaoa4(kQaoaRandom);
  ProfileOptions opts;
  opts.twirl = {true, 10, 5};
  opts.with_ideal = false;
  const SensitivityReport r = profile(c, ErrorModel::ideal(), opts);
  for (const auto& l : r.layers) EXPECT_LT(l.eta, 1e-12);
}

TEST(Profile, LayerIndicesCoverDepth) {
  const Fixture f = fixture("qft3");
  ProfileOptions opts;
  const SensitivityReport r = profile(f.circuit, f.model, opts);
  ASSERT_EQ(static_cast<int>(r.layers.size()), f.circuit.depth());
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    EXPECT_EQ(r.layers[i].index, static_cast<int>(i) + 1);
    EXPECT_EQ(r.layers[i].is_virtual, f.circuit.layer(static_cast<int>(i) + 1).is_virtual());
    EXPECT_GE(r.layers[i].eta, 0.0);
    EXPECT_LE(r.layers[i].eta, 1.0);
  }
  ASSERT_TRUE(r.qfim.has_value());
  EXPECT_EQ(r.qfim->matrix.rows(), f.circuit.depth());
}

TEST(Profile, RandomAngleQaoaDominantLayer) {
  const Fixture f = fixture("qaoa4-random");
  ProfileOptions opts;
  opts.with_qfim = false;
  opts.with_ideal = false;
  EXPECT_EQ(profile(f.circuit, f.model, opts).dominant_layer(), 4);
}

TEST(Profile, StochasticToyRatioIsTwo) {
  const double p = 1e-3;
  ErrorModel model;
  model.set_gate(GateKind::kCnot, depolarizing_ptm(p, 2) * ideal_ptm(Gate::cnot(0, 1)));
  model.set_gate(GateKind::kSqrtX, ideal_ptm(Gate::sqrt_x(0)));
  model.set_gate(GateKind::kIdle, Ptm::identity(1));
  const Circuit c(2, {Layer({Gate::sqrt_x(0), Gate::sqrt_x(1)}), Layer({Gate::cnot(0, 1)}), Layer({Gate::sqrt_x(1)})});
  ProfileOptions opts;
  opts.with_qfim = false;
  const SensitivityReport r = profile(c, model, opts);
  EXPECT_NEAR(r.layers[1].eta / *r.layers[1].eta_ideal, 2.0, 1e-2);
}

TEST(ProfileProperty, ShotsConvergeToExact) {
  const Fixture f = fixture("qft3");
  ProfileOptions exact_opts;
  exact_opts.with_qfim = false;
  exact_opts.with_ideal = false;
  const SensitivityReport exact = profile(f.circuit, f.model, exact_opts);
  ProfileOptions shot_opts = exact_opts;
  shot_opts.shots = ShotSpec{100000, 17, 1};
  shot_opts.bootstrap = 200;
  const SensitivityReport shots = profile(f.circuit, f.model, shot_opts);
  double worst = 0.0;
  double worst_std = 0.0;
  for (std::size_t i = 0; i < exact.layers.size(); ++i) {
    const double diff = std::abs(shots.layers[i].eta - exact.layers[i].eta);
    ASSERT_TRUE(shots.layers[i].std.has_value());
    if (diff > worst) {
      worst = diff;
      worst_std = *shots.layers[i].std;
    }
  }
  EXPECT_LT(worst, 3 * worst_std);
  EXPECT_EQ(shots.counts.size(), exact.layers.size() + 1);
  for (const auto& c : shots.counts) EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::uint64_t{0}), 100000u);
}

TEST(ProfileProperty, ContextsPoolIntoCounts) {
  const Fixture f = fixture("qft3");
  ProfileOptions opts;
  opts.with_qfim = false;
  opts.with_ideal = false;
  opts.bootstrap = 10;
  opts.shots = ShotSpec{500, 3, 4};
  const SensitivityReport r = profile(f.circuit, f.model, opts);
  ASSERT_EQ(r.context_counts.size(), r.counts.size());
  for (std::size_t c = 0; c < r.counts.size(); ++c) {
    ASSERT_EQ(r.context_counts[c].size(), 4u);
    std::vector<std::uint64_t> pooled(r.counts[c].size(), 0);
    for (const auto& ctx : r.context_counts[c]) {
      EXPECT_EQ(std::accumulate(ctx.begin(), ctx.end(), std::uint64_t{0}), 500u);
      for (std::size_t k = 0; k < ctx.size(); ++k) pooled[k] += ctx[k];
    }
    EXPECT_EQ(pooled, r.counts[c]);
  }
  const SensitivityReport again = profile(f.circuit, f.model, opts);
  EXPECT_EQ(again.counts, r.counts);
  EXPECT_EQ(again.etas(), r.etas());
}

TEST(ProfileProperty, ArgmaxStableUnderMonotoneRescaling) {
  for (const char* name : {"qaoa4-opt", "qaoa4-random", "qft4-degraded"}) {
    const Fixture f = fixture(name);
    ProfileOptions opts;
    opts.with_qfim = false;
    opts.with_ideal = false;
    SensitivityReport r = profile(f.circuit, f.model, opts);
    const int dominant = r.dominant_layer();
    const auto etas = r.etas();
    EXPECT_EQ(static_cast<std::size_t>(std::max_element(etas.begin(), etas.end()) - etas.begin()) + 1,
              static_cast<std::size_t>(dominant));
    for (auto f_scale : {+[](double x) { return std::sqrt(x); }, +[](double x) { return std::exp(5 * x) - 3; },
                         +[](double x) { return std::log1p(x) * 100; }}) {
      SensitivityReport copy = r;
      for (auto& l : copy.layers) l.eta = f_scale(l.eta);
      EXPECT_EQ(copy.dominant_layer(), dominant) << name;
    }
  }
}

}  // namespace
}  // namespace locinv
