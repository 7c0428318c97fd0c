#include "qsl/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace qsl {

StepKernel build_step_kernel(const AugmentedGenerator& gen, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("build_step_kernel: dt must be positive");

  const Eigen::Index b = gen.k1.rows();
  // M = k1^2 + W^2 k2^2; the squared generator is (M/4) (x) I2 for every phase
  // (half-Pauli convention), so the exponential splits into cos/sinc series in
  // x = (dt/2)^2 * M.
  const Matrix m = gen.k1 * gen.k1 + (gen.omega * gen.omega) * (gen.k2 * gen.k2);
  const Matrix x = (0.25 * dt * dt) * m;

  Matrix c = Matrix::Zero(b, b);
  Matrix s = Matrix::Zero(b, b);
  Matrix term = Matrix::Identity(b, b);  // (-x)^m / (2m)!
  constexpr int kMaxTerms = 200;
  int mm = 0;
  for (; mm < kMaxTerms; ++mm) {
    c += term;
    s += term / (2.0 * mm + 1.0);
    const double tail = term.norm();
    if (tail < 1e-16 * std::max(1.0, c.norm())) break;
    term = term * (-x) / ((2.0 * mm + 1.0) * (2.0 * mm + 2.0));
  }
  if (mm == kMaxTerms) throw std::runtime_error("build_step_kernel: series did not converge");

  const PauliSet p = pauli_set();
  const Complex mid(0.0, -dt);  // -i dt

  StepKernel kernel;
  kernel.order = gen.order;
  kernel.dt = dt;
  kernel.omega = gen.omega;
  kernel.c_mat = c;
  kernel.s_mat = s;
  kernel.k1 = gen.k1;
  kernel.k2 = gen.k2;
  kernel.e0 = kron(c, Matrix::Identity(2, 2)) + mid * kron(s * gen.k1, p.sz);
  kernel.ex = (mid * gen.omega) * kron(s * gen.k2, p.sx);
  kernel.ey = (mid * gen.omega) * kron(s * gen.k2, p.sy);
  return kernel;
}

Matrix step(const StepKernel& kernel, double phi) {
  return kernel.e0 + std::cos(phi) * kernel.ex + std::sin(phi) * kernel.ey;
}

Matrix step_gradient(const StepKernel& kernel, double phi) {
  return -std::sin(phi) * kernel.ex + std::cos(phi) * kernel.ey;
}

Matrix propagate(const AugmentedGenerator& gen, const ControlPulse& pulse) {
  const Eigen::Index n = gen.h0.rows();
  if (pulse.phases.empty()) return Matrix::Identity(n, n);
  if (std::abs(pulse.omega - gen.omega) > 1e-12 * std::max(1.0, std::abs(gen.omega)))
    throw std::invalid_argument("propagate: pulse omega does not match generator");

  const StepKernel kernel = build_step_kernel(gen, pulse.segment_duration);
  Matrix v = Matrix::Identity(n, n);
  for (double phi : pulse.phases) v = step(kernel, phi) * v;
  return v;
}

Matrix reference_expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("reference_expm: matrix must be square");
  return a.exp();
}

}  // namespace qsl
