#include "qsl/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace qsl {

namespace {

Matrix initial_state(int dim) {
  Matrix x = Matrix::Zero(dim, 2);
  x.block(0, 0, 2, 2) = Matrix2::Identity();
  return x;
}

}  // namespace

GateTarget GateTarget::named(std::string_view name) {
  const Complex i(0.0, 1.0);
  Matrix2 u;
  if (name == "X") {
    u << 0, 1, 1, 0;
  } else if (name == "Z") {
    u << 1, 0, 0, -1;
  } else if (name == "S") {
    u << 1, 0, 0, i;
  } else if (name == "H") {
    const double r = 1.0 / std::sqrt(2.0);
    u << r, r, r, -r;
  } else {
    throw std::invalid_argument("GateTarget: unknown gate '" + std::string(name) + "'");
  }
  return GateTarget{std::string(name), u};
}

GateTarget GateTarget::custom(const Matrix2& u, std::string name) {
  if ((u.adjoint() * u - Matrix2::Identity()).norm() > 1e-12)
    throw std::invalid_argument("GateTarget: matrix is not unitary");
  return GateTarget{std::move(name), u};
}

double gate_error(const Matrix2& u, const GateTarget& target) {
  const Complex z = (target.matrix.adjoint() * u).trace();
  return std::max(0.0, 1.0 - std::norm(z) / 4.0);
}

ObjectiveEvaluator::ObjectiveEvaluator(const AugmentedGenerator& gen, const GateTarget& target,
                                       double segment_duration, BlockWeights weights)
    : order_(gen.order),
      target_(target),
      kernel_(build_step_kernel(gen, segment_duration)),
      weights_(static_cast<std::size_t>(gen.order.block_count()), 1.0) {
  for (const auto& [key, w] : weights) {
    const auto [k1, k2] = key;
    if (k1 < 0 || k1 > order_.n1 || k2 < 0 || k2 > order_.n2)
      throw std::invalid_argument("ObjectiveEvaluator: weight index outside order box");
    weights_[order_.block_index(k1, k2)] = w;
  }
}

CostReport ObjectiveEvaluator::report_from_state(const Matrix& state) const {
  CostReport rep;
  rep.gate_error = qsl::gate_error(state.block(0, 0, 2, 2), target_);
  rep.total = rep.gate_error;
  for (int k1 = 0; k1 <= order_.n1; ++k1)
    for (int k2 = 0; k2 <= order_.n2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const int b = order_.block_index(k1, k2);
      const double norm = state.block(2 * b, 0, 2, 2).squaredNorm();
      rep.block_norms[{k1, k2}] = norm;
      rep.total += weights_[b] * norm;
    }
  return rep;
}

// Conjugate gradient dJ/d(conj X) at the final state, so that dJ = 2 Re tr(G^dag dX).
Matrix ObjectiveEvaluator::terminal_adjoint(const Matrix& state) const {
  Matrix g = Matrix::Zero(state.rows(), 2);
  const Complex z = (target_.matrix.adjoint() * state.block(0, 0, 2, 2)).trace();
  g.block(0, 0, 2, 2) = (-0.25 * z) * target_.matrix;
  for (int b = 1; b < order_.block_count(); ++b)
    g.block(2 * b, 0, 2, 2) = weights_[b] * state.block(2 * b, 0, 2, 2);
  return g;
}

CostReport ObjectiveEvaluator::cost(const std::vector<double>& phases) const {
  const int dim = order_.dim();
  Matrix v(dim, dim);
  Matrix x = initial_state(dim);
  Matrix xn(dim, 2);
  for (double phi : phases) {
    v = kernel_.e0;
    v.noalias() += std::cos(phi) * kernel_.ex;
    v.noalias() += std::sin(phi) * kernel_.ey;
    xn.noalias() = v * x;
    x.swap(xn);
  }
  return report_from_state(x);
}

CostReport ObjectiveEvaluator::cost_and_gradient(const std::vector<double>& phases,
                                                 std::vector<double>& grad) const {
  const int n = static_cast<int>(phases.size());
  const int dim = order_.dim();
  std::vector<Matrix> steps(n);
  std::vector<Matrix> states(n + 1);
  states[0] = initial_state(dim);
  for (int j = 0; j < n; ++j) {
    Matrix& v = steps[j];
    v = kernel_.e0;
    v.noalias() += std::cos(phases[j]) * kernel_.ex;
    v.noalias() += std::sin(phases[j]) * kernel_.ey;
    states[j + 1].noalias() = v * states[j];
  }
  const CostReport rep = report_from_state(states[n]);

  grad.assign(phases.size(), 0.0);
  Matrix lambda = terminal_adjoint(states[n]);
  Matrix dv(dim, dim), y(dim, 2), lnext(dim, 2);
  for (int j = n - 1; j >= 0; --j) {
    dv = -std::sin(phases[j]) * kernel_.ex;
    dv.noalias() += std::cos(phases[j]) * kernel_.ey;
    y.noalias() = dv * states[j];
    grad[j] = 2.0 * (lambda.array().conjugate() * y.array()).sum().real();
    if (j > 0) {
      lnext.noalias() = steps[j].adjoint() * lambda;
      lambda.swap(lnext);
    }
  }
  return rep;
}

namespace {

void check_compatible(const AugmentedGenerator& gen, const ControlPulse& pulse) {
  if (std::abs(pulse.omega - gen.omega) > 1e-12 * std::max(1.0, std::abs(gen.omega)))
    throw std::invalid_argument("cost: pulse omega does not match generator");
}

}  // namespace

CostReport cost(const AugmentedGenerator& gen, const ControlPulse& pulse,
                const GateTarget& target) {
  if (pulse.phases.empty()) {
    // Zero-length pulse: the propagator is the identity.
    CostReport rep;
    rep.gate_error = gate_error(Matrix2::Identity(), target);
    rep.total = rep.gate_error;
    for (int k1 = 0; k1 <= gen.order.n1; ++k1)
      for (int k2 = 0; k2 <= gen.order.n2; ++k2)
        if (k1 != 0 || k2 != 0) rep.block_norms[{k1, k2}] = 0.0;
    return rep;
  }
  check_compatible(gen, pulse);
  return ObjectiveEvaluator(gen, target, pulse.segment_duration).cost(pulse.phases);
}

std::vector<double> cost_gradient(const AugmentedGenerator& gen, const ControlPulse& pulse,
                                  const GateTarget& target) {
  check_compatible(gen, pulse);
  std::vector<double> grad;
  ObjectiveEvaluator(gen, target, pulse.segment_duration).cost_and_gradient(pulse.phases, grad);
  return grad;
}

}  // namespace qsl
