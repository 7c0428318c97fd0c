#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qsl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

// Half-scaled Pauli matrices: each squares to I/4, distinct pairs anticommute.
struct PauliSet {
  Matrix2 sx, sy, sz;
};

PauliSet pauli_set();

// (n+1)x(n+1) matrix with ones on the first subdiagonal; nilpotent of order n+1.
Matrix shift_matrix(int n);

Matrix kron(const Matrix& a, const Matrix& b);

// Taylor orders (n1, n2) in frequency / amplitude uncertainty that a pulse is
// required to cancel. Augmented dimension is 2*(n1+1)*(n2+1).
struct RobustnessOrder {
  int n1 = 0;
  int n2 = 0;

  int block_count() const { return (n1 + 1) * (n2 + 1); }
  int dim() const { return 2 * block_count(); }
  // Stacked ordering of expansion blocks: k2 fastest.
  int block_index(int k1, int k2) const { return k1 * (n2 + 1) + k2; }

  bool operator==(const RobustnessOrder&) const = default;
};

// Operators of the unified expansion model. h0/h1/h2 act on the stacked
// block state (dimension N); k1/k2 are the block-space factors such that
// h0 = k1 (x) sz and h1/h2 = k2 (x) sx/sy.
struct AugmentedGenerator {
  RobustnessOrder order;
  double omega = 0.0;  // dimensionless drive bound
  Matrix h0, h1, h2;   // N x N
  Matrix k1, k2;       // (n1+1)(n2+1) square
};

AugmentedGenerator assemble_generator(const RobustnessOrder& order, double omega);

}  // namespace qsl
