#pragma once

#include "qsl/objective.hpp"

namespace qsl {

struct UncertaintyGrid {
  std::vector<double> eps1_values;  // frequency offsets (dimensionless)
  std::vector<double> eps2_values;  // amplitude offsets

  static UncertaintyGrid uniform(int nodes = 101, double half_range = 0.5);
};

struct ErrorSurface {
  UncertaintyGrid grid;
  Eigen::MatrixXd errors;  // errors(i, j) = F at (eps1_values[i], eps2_values[j])
};

// Exact propagator of the uncertain two-level model: per segment the generator
// eps1*sz + (1+eps2)*omega*(cos(phi) sx + sin(phi) sy) is constant, so the
// product of closed-form 2x2 exponentials is exact to machine precision.
Matrix2 simulate_exact(const ControlPulse& pulse, double eps1, double eps2);

ErrorSurface error_surface(const ControlPulse& pulse, const GateTarget& target,
                           const UncertaintyGrid& grid);

enum class UncertaintyAxis { frequency, amplitude, diagonal };

struct CoefficientFit {
  std::vector<Matrix2> coefficients;  // fitted Taylor coefficient matrices, order 0..max_order
  std::vector<double> norms;          // Frobenius norms of the above
  double condition = 0.0;             // condition number of the fit design matrix
};

// Independent oracle for the expansion blocks: samples the exact propagator at
// Chebyshev-spaced offsets in [-1e-2, 1e-2] along the axis and fits a
// polynomial per matrix entry. Along the diagonal axis the order-m coefficient
// aggregates all blocks with k1 + k2 = m.
CoefficientFit fit_error_coefficients(const ControlPulse& pulse, UncertaintyAxis axis,
                                      int max_order);

// Least-squares slope of log F vs log eps over (eps_lo, eps_hi]; expected
// 2(n+1) for an n-th order robust pulse along the matching axis. Throws when
// F sits below the 1e-14 noise floor across the range.
double scaling_slope(const ControlPulse& pulse, const GateTarget& target,
                     UncertaintyAxis axis, double eps_lo, double eps_hi);

struct RegionSummary {
  double eps1_half_width = 0.0;  // maximal symmetric interval around 0, eps2 = 0
  double eps2_half_width = 0.0;  // same along the other axis
  long cell_count = 0;           // nodes of the sublevel region connected to the origin
};

RegionSummary level_set_region(const ErrorSurface& surface, double level);

}  // namespace qsl
