#pragma once

#include <vector>

#include "qsl/algebra.hpp"

namespace qsl {

// Piecewise-constant phase pulse at full drive power: on segment j the
// controls are ux = omega*cos(phi_j), uy = omega*sin(phi_j).
struct ControlPulse {
  std::vector<double> phases;       // radians
  double segment_duration = 0.0;    // dimensionless
  double omega = 0.0;               // dimensionless drive bound

  int segment_count() const { return static_cast<int>(phases.size()); }
  double total_duration() const { return phases.size() * segment_duration; }
};

// Precomputed phase-independent pieces of the step propagator
//   V(phi) = C (x) I2 - i dt [ S k1 (x) sz + S k2 (x) (W cos(phi) sx + W sin(phi) sy) ],
// assembled so that V(phi) = e0 + cos(phi) ex + sin(phi) ey.
struct StepKernel {
  RobustnessOrder order;
  double dt = 0.0;
  double omega = 0.0;
  Matrix c_mat, s_mat;  // block-space series C(dt), S(dt)
  Matrix k1, k2;
  Matrix e0, ex, ey;    // N x N
};

StepKernel build_step_kernel(const AugmentedGenerator& gen, double dt);

Matrix step(const StepKernel& kernel, double phi);

// d/dphi of step(kernel, phi); exact, not a first-order-in-dt approximation.
Matrix step_gradient(const StepKernel& kernel, double phi);

// Ordered product V_n ... V_1 (segment 1 acts first). Empty pulse gives I_N.
Matrix propagate(const AugmentedGenerator& gen, const ControlPulse& pulse);

// General-purpose dense matrix exponential (scaling-and-squaring), used as a
// cross-validation oracle for the step kernel.
Matrix reference_expm(const Matrix& a);

}  // namespace qsl
