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

#include "locinv/superop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "locinv/error.hpp"

namespace locinv {

namespace {

using Complex = std::complex<double>;

Eigen::Index pow4(int n) { return Eigen::Index{1} << (2 * n); }

int qubits_for_dim(Eigen::Index dim, Eigen::Index base) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d *= base;
    ++n;
  }
  if (d != dim) throw InputError("dimension " + std::to_string(dim) + " is not a qubit power");
  return n;
}

}  // namespace

Ptm::Ptm(int num_qubits, Matrix m) : num_qubits_(num_qubits), m_(std::move(m)) {
  if (num_qubits < 0 || m_.rows() != pow4(num_qubits) || m_.cols() != m_.rows()) {
    throw InputError("PTM on " + std::to_string(num_qubits) + " qubits must be " +
                     std::to_string(pow4(num_qubits)) + "x" + std::to_string(pow4(num_qubits)));
  }
}

Ptm Ptm::identity(int num_qubits) {
  return Ptm(num_qubits, Matrix::Identity(pow4(num_qubits), pow4(num_qubits)));
}

Ptm Ptm::operator*(const Ptm& rhs) const {
  if (rhs.num_qubits_ != num_qubits_) throw InputError("PTM dimension mismatch");
  return Ptm(num_qubits_, m_ * rhs.m_);
}

bool Ptm::is_trace_preserving(double tol) const {
  if (std::abs(m_(0, 0) - 1.0) > tol) return false;
  for (Eigen::Index j = 1; j < m_.cols(); ++j) {
    if (std::abs(m_(0, j)) > tol) return false;
  }
  return true;
}

bool Ptm::is_unital(double tol) const {
  for (Eigen::Index i = 1; i < m_.rows(); ++i) {
    if (std::abs(m_(i, 0)) > tol) return false;
  }
  return true;
}

bool Ptm::is_valid(double tol) const {
  return is_trace_preserving(tol) && m_.cwiseAbs().maxCoeff() <= 1.0 + tol;
}

CMatrix pauli_matrix(Pauli p) {
  CMatrix m(2, 2);
  const Complex i(0, 1);
  switch (p) {
    case Pauli::kI: m << 1, 0, 0, 1; break;
    case Pauli::kX: m << 0, 1, 1, 0; break;
    case Pauli::kY: m << 0, -i, i, 0; break;
    case Pauli::kZ: m << 1, 0, 0, -1; break;
  }
  return m;
}

CMatrix pauli_string(std::size_t index, int num_qubits) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < num_qubits; ++q) {
    const auto digit = (index >> (2 * (num_qubits - 1 - q))) & 3U;
    const CMatrix p = pauli_matrix(static_cast<Pauli>(digit));
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * p;
      }
    }
    out = std::move(next);
  }
  return out;
}

CMatrix gate_unitary(const Gate& gate) {
  const Complex i(0, 1);
  CMatrix u;
  switch (gate.kind()) {
    case GateKind::kCnot:
      u = CMatrix::Zero(4, 4);
      u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
      break;
    case GateKind::kSqrtX:
      u.resize(2, 2);
      u << 0.5 * (1.0 + i), 0.5 * (1.0 - i), 0.5 * (1.0 - i), 0.5 * (1.0 + i);
      break;
    case GateKind::kZRot:
      u = CMatrix::Zero(2, 2);
      u(0, 0) = std::exp(-i * gate.theta() / 2.0);
      u(1, 1) = std::exp(i * gate.theta() / 2.0);
      break;
    case GateKind::kIdle: u = CMatrix::Identity(2, 2); break;
    case GateKind::kPauli: u = pauli_matrix(gate.axis()); break;
  }
  return u;
}

Ptm unitary_ptm(const CMatrix& u) {
  const int n = qubits_for_dim(u.rows(), 2);
  const Eigen::Index d4 = pow4(n);
  const double d = static_cast<double>(u.rows());
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d4));
  for (Eigen::Index k = 0; k < d4; ++k) basis.push_back(pauli_string(static_cast<std::size_t>(k), n));
  Matrix r(d4, d4);
  for (Eigen::Index j = 0; j < d4; ++j) {
    const CMatrix image = u * basis[static_cast<std::size_t>(j)] * u.adjoint();
    for (Eigen::Index i = 0; i < d4; ++i) {
      r(i, j) = (basis[static_cast<std::size_t>(i)].cwiseProduct(image.transpose())).sum().real() / d;
    }
  }
  return Ptm(n, r);
}

Ptm ideal_ptm(const Gate& gate) { return unitary_ptm(gate_unitary(gate)); }

namespace {

void check_qubits(std::span<const int> qubits, int num_qubits) {
  for (std::size_t a = 0; a < qubits.size(); ++a) {
    if (qubits[a] < 0 || qubits[a] >= num_qubits) throw InputError("qubit index out of range");
    for (std::size_t b = a + 1; b < qubits.size(); ++b) {
      if (qubits[a] == qubits[b]) throw InputError("repeated qubit in embedding");
    }
  }
}

// Offsets in the 4^n index of each local basis index, and the list of base
// indices with the listed digits cleared.
struct Layout {
  std::vector<Eigen::Index> offsets;
  std::vector<Eigen::Index> bases;
};

Layout make_layout(std::span<const int> qubits, int num_qubits) {
  const int k = static_cast<int>(qubits.size());
  Layout layout;
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= Eigen::Index{3} << (2 * (num_qubits - 1 - q));
  layout.offsets.resize(static_cast<std::size_t>(pow4(k)));
  for (Eigen::Index a = 0; a < pow4(k); ++a) {
    Eigen::Index off = 0;
    for (int j = 0; j < k; ++j) {
      const Eigen::Index digit = (a >> (2 * (k - 1 - j))) & 3;
      off |= digit << (2 * (num_qubits - 1 - qubits[static_cast<std::size_t>(j)]));
    }
    layout.offsets[static_cast<std::size_t>(a)] = off;
  }
  const Eigen::Index total = pow4(num_qubits);
  layout.bases.reserve(static_cast<std::size_t>(total >> (2 * k)));
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    if ((idx & mask) == 0) layout.bases.push_back(idx);
  }
  return layout;
}

}  // namespace

Ptm embed(const Ptm& local, std::span<const int> qubits, int num_qubits) {
  if (local.num_qubits() != static_cast<int>(qubits.size())) {
    throw InputError("local PTM acts on " + std::to_string(local.num_qubits()) + " qubits, " +
                     std::to_string(qubits.size()) + " given");
  }
  check_qubits(qubits, num_qubits);
  const Layout layout = make_layout(qubits, num_qubits);
  const Eigen::Index total = pow4(num_qubits);
  Matrix out = Matrix::Zero(total, total);
  const auto kd = static_cast<Eigen::Index>(layout.offsets.size());
  for (Eigen::Index base : layout.bases) {
    for (Eigen::Index a = 0; a < kd; ++a) {
      for (Eigen::Index b = 0; b < kd; ++b) {
        out(base + layout.offsets[static_cast<std::size_t>(a)],
            base + layout.offsets[static_cast<std::size_t>(b)]) = local(a, b);
      }
    }
  }
  return Ptm(num_qubits, std::move(out));
}

Ptm depolarizing_ptm(double p, int k) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("depolarizing probability outside [0, 1]");
  if (k < 1) throw InputError("depolarizing channel needs at least one qubit");
  Matrix m = Matrix::Identity(pow4(k), pow4(k)) * (1.0 - p);
  m(0, 0) = 1.0;
  return Ptm(k, std::move(m));
}

void apply_local(std::span<double> state, int num_qubits, const Matrix& local,
                 std::span<const int> qubits) {
  if (static_cast<Eigen::Index>(state.size()) != pow4(num_qubits)) {
    throw InputError("state length does not match qubit count");
  }
  if (local.rows() != pow4(static_cast<int>(qubits.size())) || local.cols() != local.rows()) {
    throw InputError("local map dimension does not match qubit list");
  }
  check_qubits(qubits, num_qubits);
  const Layout layout = make_layout(qubits, num_qubits);
  const auto kd = static_cast<Eigen::Index>(layout.offsets.size());
  Vector in(kd);
  Vector out(kd);
  for (Eigen::Index base : layout.bases) {
    for (Eigen::Index a = 0; a < kd; ++a) {
      in(a) = state[static_cast<std::size_t>(base + layout.offsets[static_cast<std::size_t>(a)])];
    }
    out.noalias() = local * in;
    for (Eigen::Index a = 0; a < kd; ++a) {
      state[static_cast<std::size_t>(base + layout.offsets[static_cast<std::size_t>(a)])] = out(a);
    }
  }
}

Matrix matrix_exp(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("matrix_exp needs a square matrix");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);
  const Eigen::Index n = a.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < 40; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * std::max(1.0, result.cwiseAbs().maxCoeff())) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

namespace {

void check_log_domain(const Matrix& a) {
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) throw NumericError("eigenvalue computation failed");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const Complex ev = solver.eigenvalues()(k);
    const bool on_axis = std::abs(ev.imag()) <= 1e-9 * scale;
    if (std::abs(ev) <= 1e-12 * scale || (on_axis && ev.real() < 0.0)) {
      std::ostringstream msg;
      msg << "matrix logarithm undefined: eigenvalue " << ev.real();
      if (ev.imag() != 0.0) msg << (ev.imag() < 0 ? " - " : " + ") << std::abs(ev.imag()) << "i";
      msg << " lies on the closed negative real axis";
      throw NumericError(msg.str());
    }
  }
}

Matrix sqrt_denman_beavers(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Matrix y = a;
  Matrix z = Matrix::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    const Matrix y_inv = y.inverse();
    const Matrix z_inv = z.inverse();
    Matrix y_next = 0.5 * (y + z_inv);
    z = 0.5 * (z + y_inv);
    const double change = (y_next - y).cwiseAbs().maxCoeff();
    y = std::move(y_next);
    if (change <= 1e-14 * std::max(1.0, y.cwiseAbs().maxCoeff())) break;
  }
  if (!y.allFinite()) throw NumericError("matrix square root diverged");
  return y;
}

}  // namespace

Matrix matrix_log(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("matrix_log needs a square matrix");
  check_log_domain(a);
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix x = a;
  int roots = 0;
  while ((x - id).cwiseAbs().colwise().sum().maxCoeff() > 0.25) {
    if (++roots > 60) throw NumericError("matrix logarithm: square roots did not approach identity");
    x = sqrt_denman_beavers(x);
  }
  // log x = 2 atanh(t), t = (x - I)(x + I)^-1.
  const Matrix t = (x - id) * (x + id).inverse();
  const Matrix t2 = t * t;
  Matrix power = t;
  Matrix sum = t;
  for (int k = 3; k < 400; k += 2) {
    power = power * t2;
    const Matrix term = power / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-19) break;
  }
  return std::ldexp(2.0, roots) * sum;
}

ErrorGenerator error_generator(const Ptm& ptm) {
  ErrorGenerator out;
  out.num_qubits = ptm.num_qubits();
  out.generator = matrix_log(ptm.matrix());
  out.delta = out.generator.size() == 0 ? 0.0 : out.generator.cwiseAbs().maxCoeff();
  return out;
}

double avg_gate_fidelity(const Ptm& ideal, const Ptm& channel) {
  if (ideal.num_qubits() != channel.num_qubits()) throw InputError("PTM dimension mismatch");
  const double d = std::ldexp(1.0, ideal.num_qubits());
  const double overlap = (ideal.matrix().transpose() * channel.matrix()).trace();
  return (overlap + d) / (d * (d + 1.0));
}

double entanglement_infidelity(const Ptm& ideal, const Ptm& channel) {
  if (ideal.num_qubits() != channel.num_qubits()) throw InputError("PTM dimension mismatch");
  const double d = std::ldexp(1.0, ideal.num_qubits());
  return 1.0 - (ideal.matrix().transpose() * channel.matrix()).trace() / (d * d);
}

double average_gate_infidelity(const Ptm& ideal, const Ptm& channel) {
  return 1.0 - avg_gate_fidelity(ideal, channel);
}

namespace {

CMatrix vec_basis(int num_qubits) {
  const Eigen::Index d4 = pow4(num_qubits);
  CMatrix basis(d4, d4);
  for (Eigen::Index k = 0; k < d4; ++k) {
    const CMatrix p = pauli_string(static_cast<std::size_t>(k), num_qubits);
    basis.col(k) = Eigen::Map<const Eigen::VectorXcd>(p.data(), p.size());
  }
  return basis;
}

}  // namespace

CMatrix ptm_to_computational(const Ptm& ptm) {
  const CMatrix basis = vec_basis(ptm.num_qubits());
  const double d = std::ldexp(1.0, ptm.num_qubits());
  return basis * ptm.matrix().cast<Complex>() * basis.adjoint() / d;
}

Ptm computational_to_ptm(const CMatrix& superop, int num_qubits) {
  if (superop.rows() != pow4(num_qubits) || superop.cols() != superop.rows()) {
    throw InputError("superoperator dimension does not match qubit count");
  }
  const CMatrix basis = vec_basis(num_qubits);
  const double d = std::ldexp(1.0, num_qubits);
  return Ptm(num_qubits, (basis.adjoint() * superop * basis / d).real());
}

bool Degradation::matches(const Gate& gate) const {
  if (gate.kind() != kind || static_cast<std::size_t>(gate.arity()) != qubits.size()) return false;
  std::vector<int> a(gate.qubits().begin(), gate.qubits().end());
  std::vector<int> b = qubits;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

double Degradation::probability(int ordinal) const {
  if (probabilities.empty()) return 0.0;
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(ordinal, 0)),
                                       probabilities.size() - 1);
  return probabilities[k];
}

ErrorModel ErrorModel::ideal() {
  ErrorModel m;
  m.ideal_ = true;
  return m;
}

void ErrorModel::set_gate(GateKind kind, const Ptm& noisy) {
  int arity = 0;
  switch (kind) {
    case GateKind::kCnot: arity = 2; break;
    case GateKind::kSqrtX:
    case GateKind::kIdle: arity = 1; break;
    default: throw InputError("only CNOT, SX and ID carry noise");
  }
  if (noisy.num_qubits() != arity) throw InputError("noisy PTM has the wrong dimension");
  if (!noisy.is_valid(1e-9)) throw InputError("noisy PTM is not trace preserving or has entries outside [-1, 1]");
  gates_[kind] = noisy;
  ideal_ = false;
}

bool ErrorModel::has_gate(GateKind kind) const { return gates_.count(kind) != 0; }

Ptm ErrorModel::gate_ptm(const Gate& gate) const {
  if (ideal_ || gate.kind() == GateKind::kZRot || gate.kind() == GateKind::kPauli) return ideal_ptm(gate);
  auto it = gates_.find(gate.kind());
  if (it == gates_.end()) throw InputError("noise model has no entry for " + gate.name());
  return it->second;
}

void ErrorModel::add_degradation(Degradation d) {
  if (d.kind != GateKind::kCnot && d.kind != GateKind::kSqrtX && d.kind != GateKind::kIdle) {
    throw InputError("degradation applies to CNOT, SX or ID only");
  }
  if (static_cast<int>(d.qubits.size()) != (d.kind == GateKind::kCnot ? 2 : 1)) {
    throw InputError("degradation qubit list does not match gate arity");
  }
  if (d.probabilities.empty()) throw InputError("degradation schedule is empty");
  for (double p : d.probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("degradation probability outside [0, 1]");
  }
  degradation_.push_back(std::move(d));
}

ErrorModel ErrorModel::with_ideal_layer(int source_layer) const {
  ErrorModel out = *this;
  if (!out.layer_is_ideal(source_layer)) out.ideal_layers_.push_back(source_layer);
  return out;
}

bool ErrorModel::layer_is_ideal(int source_layer) const {
  return std::find(ideal_layers_.begin(), ideal_layers_.end(), source_layer) != ideal_layers_.end();
}

std::vector<LocalOp> layer_ops(const Layer& layer, const ErrorModel& model, const LayerContext& ctx) {
  if (!ctx.depolarizing.empty() && ctx.depolarizing.size() != layer.gates().size()) {
    throw InputError("layer context does not match the layer");
  }
  std::vector<LocalOp> ops;
  const auto& gates = layer.gates();
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Gate& g = gates[k];
    std::vector<int> qs(g.qubits().begin(), g.qubits().end());
    const bool ideal = ctx.ideal || !g.is_physical();
    ops.push_back({(ideal ? ideal_ptm(g) : model.gate_ptm(g)).matrix(), qs});
    if (!ideal && !ctx.depolarizing.empty() && ctx.depolarizing[k] > 0.0) {
      ops.push_back({depolarizing_ptm(ctx.depolarizing[k], g.arity()).matrix(), qs});
    }
  }
  return ops;
}

namespace {

Ptm compose_ops(const std::vector<LocalOp>& ops, int num_qubits) {
  Matrix m = Matrix::Identity(pow4(num_qubits), pow4(num_qubits));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    std::span<double> col(m.col(c).data(), static_cast<std::size_t>(m.rows()));
    for (const LocalOp& op : ops) apply_local(col, num_qubits, op.map, op.qubits);
  }
  return Ptm(num_qubits, std::move(m));
}

}  // namespace

Ptm layer_superop(const Layer& layer, int num_qubits, const ErrorModel& model, const LayerContext& ctx) {
  return compose_ops(layer_ops(layer, model, ctx), num_qubits);
}

Ptm ideal_layer_superop(const Layer& layer, int num_qubits) {
  LayerContext ctx;
  ctx.ideal = true;
  return compose_ops(layer_ops(layer, ErrorModel::ideal(), ctx), num_qubits);
}

}  // namespace locinv
