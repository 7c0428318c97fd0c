#include "qsl/algebra.hpp"

#include <stdexcept>

namespace qsl {

PauliSet pauli_set() {
  const Complex i(0.0, 1.0);
  PauliSet p;
  p.sx << 0.0, 0.5, 0.5, 0.0;
  p.sy << 0.0, 0.5 * i, -0.5 * i, 0.0;
  p.sz << 0.5, 0.0, 0.0, -0.5;
  return p;
}

Matrix shift_matrix(int n) {
  if (n < 0) throw std::invalid_argument("shift_matrix: n must be non-negative");
  Matrix l = Matrix::Zero(n + 1, n + 1);
  for (int r = 1; r <= n; ++r) l(r, r - 1) = 1.0;
  return l;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

AugmentedGenerator assemble_generator(const RobustnessOrder& order, double omega) {
  if (omega <= 0.0) throw std::invalid_argument("assemble_generator: omega must be positive");
  if (order.n1 < 0 || order.n2 < 0)
    throw std::invalid_argument("assemble_generator: negative robustness order");

  const PauliSet p = pauli_set();
  const Matrix i1 = Matrix::Identity(order.n1 + 1, order.n1 + 1);
  const Matrix i2 = Matrix::Identity(order.n2 + 1, order.n2 + 1);

  AugmentedGenerator gen;
  gen.order = order;
  gen.omega = omega;
  gen.k1 = kron(shift_matrix(order.n1), i2);
  gen.k2 = kron(i1, i2 + shift_matrix(order.n2));
  gen.h0 = kron(gen.k1, p.sz);
  gen.h1 = kron(gen.k2, p.sx);
  gen.h2 = kron(gen.k2, p.sy);
  return gen;
}

}  // namespace qsl
