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

// Acceptance checks. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_util.hpp"
#include "locinv/analysis.hpp"
#include "locinv/drift.hpp"
#include "locinv/fixtures.hpp"
#include "locinv/sim.hpp"
#include "locinv/superop.hpp"

namespace locinv {
namespace {

// Tolerances.
constexpr double kFidelityTol = 5e-4;
constexpr double kInfidelityRelTol = 0.10;
constexpr double kQaoaPearsonTol = 0.1;
constexpr double kTwirlPearsonTol = 0.05;
constexpr double kQftPearsonTol = 0.05;
constexpr double kFirstOrderRelTol = 0.05;
constexpr double kRatioLo = 1.9;
constexpr double kRatioHi = 2.1;
constexpr double kKsMax = 0.05;
constexpr double kFalseDetectionMax = 0.07;
constexpr double kThresholdTol = 0.05;
constexpr int kTwirlInstances = 100;

// Runtime limits, seconds.
constexpr double kLimit1 = 1, kLimit2 = 1, kLimit3 = 10, kLimit4 = 120, kLimit5 = 30, kLimit7 = 300;

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Line {
  bool ok = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

bool report(int n, const char* title, Line& line, double seconds, double limit) {
  line.check(limit <= 0 || seconds < limit, "runtime");
  std::cout << "criterion " << n << ": " << (line.ok ? "PASS" : "FAIL") << "  " << title << "  ("
            << fmt("%.2f", seconds) << " s";
  if (limit > 0) std::cout << ", limit " << limit << " s";
  std::cout << ")  " << line.detail.str() << std::endl;
  return line.ok;
}

ProfileOptions exact_options() {
  ProfileOptions o;
  o.with_qfim = false;
  return o;
}

bool criterion1() {
  const auto t0 = Clock::now();
  Line line;
  const Ptm sx = ideal_ptm(Gate::sqrt_x(0));
  const Ptm z = ideal_ptm(Gate::zrot(0, std::numbers::pi));
  const Ptm n = gst_sqrt_x();
  const double f1 = avg_gate_fidelity(sx, n * z * n * z * n);
  const double f2 = avg_gate_fidelity(sx * sx * sx, n * n * n);
  line.detail << "F1=" << fmt("%.5f", f1) << " (0.9975) F2=" << fmt("%.5f", f2) << " (0.9971) ";
  line.check(std::abs(f1 - 0.9975) <= kFidelityTol, "F1");
  line.check(std::abs(f2 - 0.9971) <= kFidelityTol, "F2");
  return report(1, "fidelity anchors", line, std::chrono::duration<double>(Clock::now() - t0).count(), kLimit1);
}

bool criterion2() {
  const auto t0 = Clock::now();
  Line line;
  struct Row {
    const char* name;
    Ptm ideal;
    Ptm noisy;
    double expected;
  };
  const Row rows[] = {{"I", Ptm::identity(1), gst_idle(), 2.8e-3},
                      {"SX", ideal_ptm(Gate::sqrt_x(0)), gst_sqrt_x(), 8.8e-4},
                      {"CNOT", ideal_ptm(Gate::cnot(0, 1)), gst_cnot(), 1.9e-2}};
  for (const Row& r : rows) {
    const double avg = average_gate_infidelity(r.ideal, r.noisy);
    const double ent = entanglement_infidelity(r.ideal, r.noisy);
    line.detail << r.name << ": 1-F_avg=" << fmt("%.5f", avg) << " (expected " << r.expected
                << ", entanglement " << fmt("%.5f", ent) << ") ";
    line.check(std::abs(avg - r.expected) <= kInfidelityRelTol * r.expected, r.name);
  }
  return report(2, "gate error metrics", line, std::chrono::duration<double>(Clock::now() - t0).count(), kLimit2);
}

bool criterion3() {
  const auto t0 = Clock::now();
  Line line;
  struct Case {
    const char* name;
    int dominant;
    double pearson;
  };
  for (const Case& c : {Case{"qaoa4-opt", 2, 0.91}, Case{"qaoa4-random", 4, 0.93}}) {
    const Fixture f = fixture(c.name);
    const SensitivityReport r = profile(f.circuit, f.model, exact_options());
    line.detail << c.name << ": L" << r.dominant_layer() << " r=" << fmt("%.3f", *r.pearson) << " ";
    line.check(r.dominant_layer() == c.dominant, std::string(c.name) + " argmax");
    line.check(std::abs(*r.pearson - c.pearson) <= kQaoaPearsonTol, std::string(c.name) + " pearson");
  }
  return report(3, "QAOA angle sensitivity", line, std::chrono::duration<double>(Clock::now() - t0).count(), kLimit3);
}

bool criterion4() {
  const auto t0 = Clock::now();
  Line line;
  for (const char* name : {"qaoa4-opt", "qaoa4-random"}) {
    const Fixture f = fixture(name);
    const SensitivityReport plain = profile(f.circuit, f.model, exact_options());
    for (int i : {1, 8, 9}) {
      const auto& l = plain.layers[static_cast<std::size_t>(i - 1)];
      line.check(*l.eta_ideal > l.eta, std::string(name) + " L" + std::to_string(i) + " eta_ideal > eta");
    }
    ProfileOptions o = exact_options();
    o.twirl = {true, kTwirlInstances, 2024};
    const SensitivityReport twirled = profile(f.circuit, f.model, o);
    line.detail << name << ": r " << fmt("%.3f", *plain.pearson) << " -> " << fmt("%.3f", *twirled.pearson) << " ";
    if (std::string(name) == "qaoa4-opt") {
      line.check(std::abs(*twirled.pearson - 0.99) <= kTwirlPearsonTol, "twirled pearson");
    }
  }
  return report(4, "coherent cancellation and twirl recovery", line,
                std::chrono::duration<double>(Clock::now() - t0).count(), kLimit4);
}

bool criterion5() {
  const auto t0 = Clock::now();
  Line line;
  const Fixture deg = fixture("qft4-degraded");
  const SensitivityReport r = profile(deg.circuit, deg.model, exact_options());
  double prev = -1.0;
  line.detail << "eta@{6,7,12,13,14}=";
  for (int i : {6, 7, 12, 13, 14}) {
    const double eta = r.layers[static_cast<std::size_t>(i - 1)].eta;
    line.detail << fmt("%.4f", eta) << ",";
    line.check(eta > prev, "increasing at L" + std::to_string(i));
    prev = eta;
  }
  const Fixture plain = fixture("qft4");
  const SensitivityReport rp = profile(plain.circuit, plain.model, exact_options());
  line.detail << " r=" << fmt("%.4f", *r.pearson) << " (0.997) r_plain=" << fmt("%.4f", *rp.pearson) << " (0.99) ";
  line.check(std::abs(*r.pearson - 0.997) <= kQftPearsonTol, "degraded pearson");
  line.check(std::abs(*rp.pearson - 0.99) <= kQftPearsonTol, "plain pearson");
  return report(5, "degradation detection", line, std::chrono::duration<double>(Clock::now() - t0).count(), kLimit5);
}

ErrorModel depolarizing_model(double s) {
  ErrorModel m;
  m.set_gate(GateKind::kCnot, depolarizing_ptm(s, 2) * ideal_ptm(Gate::cnot(0, 1)));
  m.set_gate(GateKind::kSqrtX, depolarizing_ptm(s, 1) * ideal_ptm(Gate::sqrt_x(0)));
  m.set_gate(GateKind::kIdle, depolarizing_ptm(s, 1));
  return m;
}

bool criterion6() {
  const auto t0 = Clock::now();
  Line line;
  const Circuit c = qaoa4(kQaoaOptimized);
  for (double s : {1e-3, 5e-4}) {
    const ErrorModel model = depolarizing_model(s);
    const ProbDist base = simulate(c, model);
    double worst_rel = 0.0;
    double lo = 1e9, hi = 0.0;
    for (int i = 1; i <= c.depth(); ++i) {
      if (c.layer(i).is_virtual()) continue;
      const double exact = tvd(base, simulate(build_inverted(c, {i, 1, {}}), model));
      const double exact_ideal = tvd(base, simulate(c, model.with_ideal_layer(i)));
      const PerturbationResult p = first_order(c, model, i);
      worst_rel = std::max(worst_rel, std::abs(exact - p.eta) / p.eta);
      lo = std::min(lo, exact / exact_ideal);
      hi = std::max(hi, exact / exact_ideal);
    }
    line.detail << "s=" << s << ": max rel err " << fmt("%.4f", worst_rel) << ", ratio [" << fmt("%.4f", lo) << ", "
                << fmt("%.4f", hi) << "] ";
    line.check(worst_rel < kFirstOrderRelTol, "first-order error");
    line.check(lo >= kRatioLo && hi <= kRatioHi, "ratio");
  }
  return report(6, "first-order theory", line, std::chrono::duration<double>(Clock::now() - t0).count(), 0);
}

// Multinomial draw by sequential binomials.
void multinomial(std::mt19937_64& gen, const std::vector<double>& p, std::uint64_t shots, std::uint64_t* out) {
  double rest = 1.0;
  std::uint64_t left = shots;
  for (std::size_t m = 0; m + 1 < p.size(); ++m) {
    const double q = rest > 0 ? std::clamp(p[m] / rest, 0.0, 1.0) : 0.0;
    out[m] = std::binomial_distribution<std::uint64_t>(left, q)(gen);
    left -= out[m];
    rest -= p[m];
  }
  out[p.size() - 1] = left;
}

ContextCounts null_counts(std::mt19937_64& gen, const std::vector<std::vector<double>>& dists, int contexts,
                          std::uint64_t shots) {
  const int q_count = static_cast<int>(dists.size());
  const int m_count = static_cast<int>(dists[0].size());
  ContextCounts c(q_count, contexts, m_count);
  std::vector<std::uint64_t> draw(static_cast<std::size_t>(m_count));
  for (int q = 0; q < q_count; ++q) {
    for (int s = 0; s < contexts; ++s) {
      multinomial(gen, dists[static_cast<std::size_t>(q)], shots, draw.data());
      for (int m = 0; m < m_count; ++m) c.at(q, s, m) = draw[static_cast<std::size_t>(m)];
    }
  }
  return c;
}

bool criterion7() {
  const auto t0 = Clock::now();
  Line line;
  const int q_count = 26, s_count = 6, m_count = 16;
  const std::uint64_t shots = 11264;
  Rng rng(7);
  std::vector<std::vector<double>> dists;
  for (int q = 0; q < q_count; ++q) dists.push_back(testing::random_distribution(rng, m_count));

  // lambda_q against chi-square with (S-1)(M-1) dof.
  const int dof = (s_count - 1) * (m_count - 1);
  std::mt19937_64 gen(derive_seed(7, 1));
  std::vector<double> lambdas;
  const int replicates = 10000;
  const std::vector<std::vector<double>> one = {dists[0]};
  for (int r = 0; r < replicates; ++r) lambdas.push_back(llr(null_counts(gen, one, s_count, shots), 0));
  std::sort(lambdas.begin(), lambdas.end());
  boost::math::chi_squared chi(dof);
  double ks = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double f = boost::math::cdf(chi, lambdas[k]);
    ks = std::max({ks, std::abs(f - static_cast<double>(k) / replicates),
                   std::abs(f - static_cast<double>(k + 1) / replicates)});
  }
  line.detail << "KS(chi2_" << dof << ")=" << fmt("%.4f", ks) << " ";
  line.check(ks < kKsMax, "KS");

  // False detections of two_step at alpha = 0.05.
  int detections = 0;
  const int seeds = 500;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 g(derive_seed(7, 2, static_cast<std::uint64_t>(s)));
    if (two_step(null_counts(g, dists, s_count, shots), 0.05).detected()) ++detections;
  }
  const double rate = static_cast<double>(detections) / seeds;
  line.detail << "false detections " << detections << "/" << seeds << " ";
  line.check(rate <= kFalseDetectionMax, "false-detection rate");

  // Thresholds at 0.05 / 26.
  const double alpha = 0.05 / 26;
  const double t1 = n_sigma_threshold(alpha, q_count * (s_count - 1) * (m_count - 1));
  const double t2 = n_sigma_threshold(alpha, 29 * (s_count - 1) * (8 - 1));
  const double t16 = n_sigma_threshold(0.05 / 16 / 2, q_count * (s_count - 1) * (m_count - 1));
  line.detail << "N_sigma thresholds " << fmt("%.4f", t1) << " (2.97), " << fmt("%.4f", t2)
              << " (3.0); 16-way split gives " << fmt("%.4f", t16) << " ";
  line.check(std::abs(t1 - 2.97) <= kThresholdTol, "threshold 2.97");
  line.check(std::abs(t2 - 3.0) <= kThresholdTol, "threshold 3.0");
  return report(7, "drift calibration", line, std::chrono::duration<double>(Clock::now() - t0).count(), kLimit7);
}

double max_diff(const ProbDist& a, const ProbDist& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

bool criterion8() {
  const auto t0 = Clock::now();
  Line line;
  Rng rng(8);

  // Ideal-inversion cancellation, with and without twirl.
  int inversions = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const auto gates = testing::random_gates(rng, n, 2 + static_cast<int>(rng.below(12)));
    const Circuit c = split_into_layers(gates, n, rng.below(2) ? LayeringPolicy::kFoldVirtual : LayeringPolicy::kSegregate);
    const ProbDist base = simulate(c, ErrorModel::ideal());
    for (int i = 1; i <= c.depth(); ++i) {
      InversionSpec spec{i, 1 + static_cast<int>(rng.below(3)), {true, 3, rng.next()}};
      const Circuit inv = build_inverted(c, spec);
      worst = std::max(worst, max_diff(simulate(inv, ErrorModel::ideal()), base));
      ++inversions;
      if (c.layer(i).is_virtual()) continue;
      for (const auto& inst : attach_twirl(inv, spec)) {
        worst = std::max(worst, max_diff(simulate(inst.circuit, ErrorModel::ideal()), base));
        ++inversions;
      }
    }
  }
  line.detail << "cancellation " << inversions << " circuits max " << fmt("%.1e", worst) << "; ";
  line.check(worst < 1e-10, "ideal-inversion cancellation");

  // qFIM symmetric PSD.
  int qfim_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ProbDist base(3, testing::random_distribution(rng, 8, rng.below(2) == 0));
    std::vector<ProbDist> inv;
    for (std::size_t i = 0; i < 1 + rng.below(9); ++i) inv.emplace_back(3, testing::random_distribution(rng, 8, rng.below(2) == 0));
    const Qfim f = qfim(base, inv);
    const double scale = std::max(1.0, f.eigenvalues(0));
    if ((f.matrix - f.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 || f.eigenvalues.minCoeff() < -1e-9 * scale) ++qfim_bad;
  }
  line.detail << "qFIM 200 cases " << qfim_bad << " bad; ";
  line.check(qfim_bad == 0, "qFIM symmetric PSD");

  // TVD metric axioms.
  int tvd_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng.below(32);
    const auto a = testing::random_distribution(rng, m, true);
    const auto b = testing::random_distribution(rng, m, true);
    const auto c = testing::random_distribution(rng, m);
    const double ab = tvd(a, b);
    if (ab < 0 || ab > 1 + 1e-15 || ab != tvd(b, a) || tvd(a, a) != 0 || ab > tvd(a, c) + tvd(c, b) + 1e-15) ++tvd_bad;
  }
  line.detail << "TVD 1000 cases " << tvd_bad << " bad; ";
  line.check(tvd_bad == 0, "TVD axioms");

  // Hochberg contains Bonferroni.
  int hoch_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t q = 1 + rng.below(40);
    std::vector<double> p(q);
    for (auto& x : p) x = std::pow(rng.uniform(), 1 + 4 * rng.uniform());
    const double alpha = 0.01 + 0.1 * rng.uniform();
    const HochbergResult h = hochberg(p, alpha);
    for (std::size_t k = 0; k < q; ++k) {
      if (p[k] < alpha / static_cast<double>(q) &&
          std::find(h.rejected.begin(), h.rejected.end(), static_cast<int>(k)) == h.rejected.end()) {
        ++hoch_bad;
      }
    }
  }
  line.detail << "Hochberg 1000 cases " << hoch_bad << " bad; ";
  line.check(hoch_bad == 0, "Hochberg contains Bonferroni");

  // PTM round-trips.
  double rt = 0.0;
  double log_rt = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(2));
    const Ptm r = testing::random_cptp(rng, n, 2);
    rt = std::max(rt, (computational_to_ptm(ptm_to_computational(r), n).matrix() - r.matrix()).cwiseAbs().maxCoeff());
    const Ptm w = testing::near_identity_cptp(rng, n, 0.05);
    log_rt = std::max(log_rt, (matrix_exp(error_generator(w).generator) - w.matrix()).cwiseAbs().maxCoeff());
  }
  line.detail << "PTM round-trip max " << fmt("%.1e", rt) << ", exp(log) max " << fmt("%.1e", log_rt) << "; ";
  line.check(rt < 1e-12, "PTM round-trip");
  line.check(log_rt < 1e-8, "log/exp round-trip");

  // Seed reproducibility of sampled pipelines.
  const Fixture f = fixture("qft3");
  ProfileOptions o;
  o.shots = ShotSpec{400, 99, 3};
  o.bootstrap = 20;
  o.twirl = {true, 4, 5};
  const SensitivityReport a = profile(f.circuit, f.model, o);
  const SensitivityReport b = profile(f.circuit, f.model, o);
  bool same = a.context_counts == b.context_counts && a.etas() == b.etas();
  for (std::size_t i = 0; i < a.layers.size(); ++i) same = same && a.layers[i].std == b.layers[i].std;
  const ProbDist d(2, {0.1, 0.2, 0.3, 0.4});
  same = same && sample(d, 1000, 3) == sample(d, 1000, 3);
  line.detail << "seeded reruns " << (same ? "identical" : "differ");
  line.check(same, "reproducibility");
  return report(8, "property suites", line, std::chrono::duration<double>(Clock::now() - t0).count(), 0);
}

}  // namespace
}  // namespace locinv

int main() {
  using namespace locinv;
  const std::vector<std::function<bool()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  for (const auto& c : criteria) {
    try {
      if (!c()) ++failed;
    } catch (const std::exception& e) {
      std::cout << "  exception: " << e.what() << std::endl;
      ++failed;
    }
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
