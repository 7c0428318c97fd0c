#pragma once

#include <filesystem>
#include <string>

#include "qsl/sweep.hpp"
#include "qsl/units.hpp"
#include "qsl/verifier.hpp"

namespace qsl::io {

struct PulseFile {
  ControlPulse pulse;
  std::string gate;  // may be empty
  RobustnessOrder order;
};

// CSV with a `# key=value` header block (omega, segment_duration, order, gate)
// followed by `segment_index,phi_rad` rows.
void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse,
                     const std::string& gate, const RobustnessOrder& order);
PulseFile read_pulse_csv(const std::filesystem::path& path);

void write_qsl_record_json(const std::filesystem::path& path, const QslRecord& record);
QslRecord read_qsl_record_json(const std::filesystem::path& path);

// CSV with header `T,cost`.
void write_sweep_trace_csv(const std::filesystem::path& path,
                           const std::vector<std::pair<double, double>>& trace);

// CSV with header `eps1,eps2,error`.
void write_surface_csv(const std::filesystem::path& path, const ErrorSurface& surface);

void write_region_json(const std::filesystem::path& path, const RegionSummary& summary,
                       double level);

// CSV with header `t_start_s,duration_s,ux_rad_s,uy_rad_s`.
void write_physical_pulse_csv(const std::filesystem::path& path,
                              const std::vector<PhysicalSegment>& segments);

}  // namespace qsl::io
