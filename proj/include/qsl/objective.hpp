#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsl/propagator.hpp"

namespace qsl {

struct GateTarget {
  std::string name;
  Matrix2 matrix;  // 2x2 unitary

  static GateTarget named(std::string_view name);  // X | Z | S | H
  static GateTarget custom(const Matrix2& u, std::string name = "custom");
};

// Gate error F[U] = 1 - |tr(Uf^dag U)|^2 / 4, invariant under global phase.
double gate_error(const Matrix2& u, const GateTarget& target);

struct CostReport {
  double total = 0.0;
  double gate_error = 0.0;
  // tr[U_{k1,k2}^dag U_{k1,k2}] for every (k1,k2) != (0,0) in the order box.
  std::map<std::pair<int, int>, double> block_norms;
};

using BlockWeights = std::map<std::pair<int, int>, double>;

// Evaluates the robust cost J = F[U00(T)] + sum_b w_b tr[U_b^dag U_b] and its
// exact gradient w.r.t. the phase vector, for a fixed generator, target and
// segment duration. Weights default to 1 on every block.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const AugmentedGenerator& gen, const GateTarget& target,
                     double segment_duration, BlockWeights weights = {});

  CostReport cost(const std::vector<double>& phases) const;
  CostReport cost_and_gradient(const std::vector<double>& phases,
                               std::vector<double>& grad) const;

  const StepKernel& kernel() const { return kernel_; }
  const RobustnessOrder& order() const { return order_; }

 private:
  CostReport report_from_state(const Matrix& state) const;
  Matrix terminal_adjoint(const Matrix& state) const;

  RobustnessOrder order_;
  GateTarget target_;
  StepKernel kernel_;
  std::vector<double> weights_;  // indexed by block
};

CostReport cost(const AugmentedGenerator& gen, const ControlPulse& pulse,
                const GateTarget& target);

std::vector<double> cost_gradient(const AugmentedGenerator& gen, const ControlPulse& pulse,
                                  const GateTarget& target);

}  // namespace qsl
