#include "qsl/units.hpp"

#include <cmath>
#include <stdexcept>

namespace qsl {

PhysicalScale scale_for(double omega_phys, double omega_bar) {
  if (omega_phys <= 0.0 || omega_bar <= 0.0)
    throw std::invalid_argument("scale_for: frequencies must be positive");
  return PhysicalScale{omega_phys / omega_bar, omega_phys};
}

double rescale_time(double t_bar, const PhysicalScale& scale) {
  if (scale.omega0 <= 0.0) throw std::invalid_argument("rescale_time: invalid scale");
  return t_bar / scale.omega0;
}

std::vector<PhysicalSegment> rescale_pulse(const ControlPulse& pulse,
                                           const PhysicalScale& scale) {
  if (std::abs(pulse.omega - scale.omega_bar()) > 1e-12 * std::max(1.0, scale.omega_bar()))
    throw std::invalid_argument("rescale_pulse: pulse bound does not match scale");

  std::vector<PhysicalSegment> out;
  out.reserve(pulse.phases.size());
  const double dt_s = pulse.segment_duration / scale.omega0;
  double t = 0.0;
  for (double phi : pulse.phases) {
    PhysicalSegment seg;
    seg.t_start_s = t;
    seg.duration_s = dt_s;
    seg.ux_rad_s = scale.omega_phys * std::cos(phi);
    seg.uy_rad_s = scale.omega_phys * std::sin(phi);
    out.push_back(seg);
    t += dt_s;
  }
  return out;
}

ControlPulse dimensionless_pulse(const std::vector<PhysicalSegment>& segments,
                                 const PhysicalScale& scale) {
  ControlPulse pulse;
  pulse.omega = scale.omega_bar();
  if (segments.empty()) return pulse;
  pulse.segment_duration = segments.front().duration_s * scale.omega0;
  pulse.phases.reserve(segments.size());
  for (const auto& seg : segments) {
    if (std::abs(seg.duration_s - segments.front().duration_s) >
        1e-12 * segments.front().duration_s)
      throw std::invalid_argument("dimensionless_pulse: segments must share one duration");
    pulse.phases.push_back(std::atan2(seg.uy_rad_s, seg.ux_rad_s));
  }
  return pulse;
}

}  // namespace qsl
