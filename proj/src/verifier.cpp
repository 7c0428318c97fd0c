#include "qsl/verifier.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace qsl {

UncertaintyGrid UncertaintyGrid::uniform(int nodes, double half_range) {
  if (nodes < 2 || half_range <= 0.0)
    throw std::invalid_argument("UncertaintyGrid: need at least two nodes and a positive range");
  UncertaintyGrid grid;
  grid.eps1_values.resize(nodes);
  grid.eps2_values.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double v = -half_range + 2.0 * half_range * i / (nodes - 1);
    grid.eps1_values[i] = v;
    grid.eps2_values[i] = v;
  }
  return grid;
}

Matrix2 simulate_exact(const ControlPulse& pulse, double eps1, double eps2) {
  const PauliSet p = pauli_set();
  const Complex mi(0.0, -1.0);
  Matrix2 u = Matrix2::Identity();
  for (double phi : pulse.phases) {
    const double drive = (1.0 + eps2) * pulse.omega;
    const Matrix2 h = eps1 * p.sz + drive * (std::cos(phi) * p.sx + std::sin(phi) * p.sy);
    // h is traceless Hermitian with h^2 = lam^2 I.
    const double lam = 0.5 * std::hypot(eps1, drive);
    const double theta = lam * pulse.segment_duration;
    Matrix2 seg = std::cos(theta) * Matrix2::Identity();
    if (lam > 0.0) seg += (mi * (std::sin(theta) / lam)) * h;
    u = seg * u;
  }
  return u;
}

ErrorSurface error_surface(const ControlPulse& pulse, const GateTarget& target,
                           const UncertaintyGrid& grid) {
  ErrorSurface surface;
  surface.grid = grid;
  surface.errors.resize(grid.eps1_values.size(), grid.eps2_values.size());
  for (std::size_t i = 0; i < grid.eps1_values.size(); ++i)
    for (std::size_t j = 0; j < grid.eps2_values.size(); ++j)
      surface.errors(i, j) =
          gate_error(simulate_exact(pulse, grid.eps1_values[i], grid.eps2_values[j]), target);
  return surface;
}

CoefficientFit fit_error_coefficients(const ControlPulse& pulse, UncertaintyAxis axis,
                                      int max_order) {
  if (max_order < 0) throw std::invalid_argument("fit_error_coefficients: negative order");
  // Guard degrees absorb the Taylor tail beyond max_order so low-order
  // coefficients are not contaminated by aliasing.
  constexpr int kGuard = 6;
  const int degree = max_order + kGuard;
  if (degree > 40) throw std::invalid_argument("fit_error_coefficients: order too high");
  const int nodes = 2 * degree + 3;
  const double window = 1e-2;

  Eigen::MatrixXd design(nodes, degree + 1);
  Eigen::MatrixXcd samples(nodes, 4);
  for (int k = 0; k < nodes; ++k) {
    const double s = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * nodes));
    const double eps = window * s;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      design(k, d) = p;
      p *= s;
    }
    const double e1 = axis == UncertaintyAxis::amplitude ? 0.0 : eps;
    const double e2 = axis == UncertaintyAxis::frequency ? 0.0 : eps;
    const Matrix2 u = simulate_exact(pulse, e1, e2);
    samples.row(k) << u(0, 0), u(0, 1), u(1, 0), u(1, 1);
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
  if (!std::isfinite(cond) || cond > 1e8)
    throw std::runtime_error("fit_error_coefficients: ill-conditioned fit");

  Eigen::MatrixXcd coeffs(degree + 1, 4);
  for (int col = 0; col < 4; ++col) {
    coeffs.col(col).real() = svd.solve(samples.col(col).real().eval());
    coeffs.col(col).imag() = svd.solve(samples.col(col).imag().eval());
  }

  CoefficientFit fit;
  fit.condition = cond;
  double scale = 1.0;  // window^-d rescales from the normalized variable
  for (int d = 0; d <= max_order; ++d) {
    Matrix2 c;
    c << coeffs(d, 0), coeffs(d, 1), coeffs(d, 2), coeffs(d, 3);
    c *= scale;
    fit.coefficients.push_back(c);
    fit.norms.push_back(c.norm());
    scale /= window;
  }
  return fit;
}

double scaling_slope(const ControlPulse& pulse, const GateTarget& target,
                     UncertaintyAxis axis, double eps_lo, double eps_hi) {
  if (!(0.0 < eps_lo && eps_lo < eps_hi && eps_hi <= 0.1))
    throw std::invalid_argument("scaling_slope: range must satisfy 0 < lo < hi <= 0.1");

  constexpr int kPoints = 12;
  std::vector<double> lx, ly;
  for (int k = 0; k < kPoints; ++k) {
    const double eps = eps_lo * std::pow(eps_hi / eps_lo, k / (kPoints - 1.0));
    const double e1 = axis == UncertaintyAxis::amplitude ? 0.0 : eps;
    const double e2 = axis == UncertaintyAxis::frequency ? 0.0 : eps;
    const double f = gate_error(simulate_exact(pulse, e1, e2), target);
    if (f < 1e-14) continue;  // numerical noise floor
    lx.push_back(std::log(eps));
    ly.push_back(std::log(f));
  }
  if (lx.size() < 3)
    throw std::runtime_error("scaling_slope: gate error below noise floor across the range");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(lx.size());
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RegionSummary level_set_region(const ErrorSurface& surface, double level) {
  if (level <= 0.0) throw std::invalid_argument("level_set_region: level must be positive");
  const auto& e1 = surface.grid.eps1_values;
  const auto& e2 = surface.grid.eps2_values;
  const int n1 = static_cast<int>(e1.size());
  const int n2 = static_cast<int>(e2.size());

  auto center = [](const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
      if (std::abs(v[i]) < std::abs(v[best])) best = i;
    return best;
  };
  const int c1 = center(e1);
  const int c2 = center(e2);

  RegionSummary summary;
  auto half_width = [level](const std::vector<double>& axis, int c, auto value_at) {
    double width = 0.0;
    for (int k = 0;; ++k) {
      const int lo = c - k, hi = c + k;
      if (lo < 0 || hi >= static_cast<int>(axis.size())) break;
      if (value_at(lo) > level || value_at(hi) > level) break;
      width = std::min(std::abs(axis[lo]), std::abs(axis[hi]));
    }
    return width;
  };
  summary.eps1_half_width =
      half_width(e1, c1, [&](int i) { return surface.errors(i, c2); });
  summary.eps2_half_width =
      half_width(e2, c2, [&](int j) { return surface.errors(c1, j); });

  if (surface.errors(c1, c2) <= level) {
    Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(n1, n2);
    std::queue<std::pair<int, int>> frontier;
    frontier.emplace(c1, c2);
    seen(c1, c2) = 1;
    while (!frontier.empty()) {
      const auto [i, j] = frontier.front();
      frontier.pop();
      ++summary.cell_count;
      const int di[] = {1, -1, 0, 0};
      const int dj[] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int ni = i + di[k], nj = j + dj[k];
        if (ni < 0 || ni >= n1 || nj < 0 || nj >= n2 || seen(ni, nj)) continue;
        if (surface.errors(ni, nj) > level) continue;
        seen(ni, nj) = 1;
        frontier.emplace(ni, nj);
      }
    }
  }
  return summary;
}

}  // namespace qsl
