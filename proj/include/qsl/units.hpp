#pragma once

#include <vector>

#include "qsl/propagator.hpp"

namespace qsl {

// Map between the dimensionless model and physical units. All physical
// angular frequencies are in rad/s.
struct PhysicalScale {
  double omega0 = 0.0;      // scaling factor, rad/s
  double omega_phys = 0.0;  // drive amplitude bound, rad/s

  double omega_bar() const { return omega_phys / omega0; }
};

// Builds the scale for a given physical bound and dimensionless bound:
// omega0 = omega_phys / omega_bar.
PhysicalScale scale_for(double omega_phys, double omega_bar);

// t = t_bar / omega0.
double rescale_time(double t_bar, const PhysicalScale& scale);

struct PhysicalSegment {
  double t_start_s = 0.0;
  double duration_s = 0.0;
  double ux_rad_s = 0.0;
  double uy_rad_s = 0.0;
};

// Dimensionless pulse -> physical waveform; ux^2 + uy^2 = omega_phys^2 on
// every segment. Requires pulse.omega == omega_phys / omega0.
std::vector<PhysicalSegment> rescale_pulse(const ControlPulse& pulse,
                                           const PhysicalScale& scale);

// Inverse of rescale_pulse (uniform-duration segments expected).
ControlPulse dimensionless_pulse(const std::vector<PhysicalSegment>& segments,
                                 const PhysicalScale& scale);

}  // namespace qsl
