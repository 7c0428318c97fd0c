#include "qsl/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qsl::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

}  // namespace

void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse,
                     const std::string& gate, const RobustnessOrder& order) {
  auto out = open_out(path);
  out << "# qsl-pulse v1\n";
  out << "# gate=" << (gate.empty() ? "unknown" : gate) << "\n";
  out << "# order=" << order.n1 << "," << order.n2 << "\n";
  out << "# omega=" << pulse.omega << "\n";
  out << "# segment_duration=" << pulse.segment_duration << "\n";
  out << "segment_index,phi_rad\n";
  for (std::size_t j = 0; j < pulse.phases.size(); ++j)
    out << j << "," << pulse.phases[j] << "\n";
}

PulseFile read_pulse_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  PulseFile file;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "gate") {
        file.gate = value;
      } else if (key == "omega") {
        file.pulse.omega = std::stod(value);
      } else if (key == "segment_duration") {
        file.pulse.segment_duration = std::stod(value);
      } else if (key == "order") {
        std::istringstream ss(value);
        char comma = 0;
        if (!(ss >> file.order.n1 >> comma >> file.order.n2) || comma != ',')
          throw std::runtime_error("malformed order header in " + path.string());
      }
      continue;
    }
    if (!saw_header) {
      if (line != "segment_index,phi_rad")
        throw std::runtime_error("malformed pulse file header in " + path.string());
      saw_header = true;
      continue;
    }
    std::istringstream ss(line);
    long idx = 0;
    char comma = 0;
    double phi = 0.0;
    if (!(ss >> idx >> comma >> phi) || comma != ',')
      throw std::runtime_error("malformed pulse row in " + path.string());
    file.pulse.phases.push_back(phi);
  }
  if (!saw_header) throw std::runtime_error("not a pulse file: " + path.string());
  if (file.pulse.omega <= 0.0 || file.pulse.segment_duration <= 0.0)
    throw std::runtime_error("pulse file missing omega/segment_duration: " + path.string());
  return file;
}

void write_qsl_record_json(const std::filesystem::path& path, const QslRecord& record) {
  nlohmann::json j;
  j["gate"] = record.gate;
  j["order"] = {{"n1", record.order.n1}, {"n2", record.order.n2}};
  j["qsl"] = record.qsl;
  j["final_cost"] = record.final_cost;
  j["seeds"] = record.seeds;
  j["pulse"] = {{"omega", record.pulse.omega},
                {"segment_duration", record.pulse.segment_duration},
                {"phases", record.pulse.phases}};
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [t, cost] : record.sweep_trace) trace.push_back({{"T", t}, {"cost", cost}});
  j["sweep_trace"] = trace;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

QslRecord read_qsl_record_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  nlohmann::json j;
  in >> j;
  QslRecord record;
  record.gate = j.at("gate").get<std::string>();
  record.order.n1 = j.at("order").at("n1").get<int>();
  record.order.n2 = j.at("order").at("n2").get<int>();
  record.qsl = j.at("qsl").get<double>();
  record.final_cost = j.at("final_cost").get<double>();
  record.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  record.pulse.omega = j.at("pulse").at("omega").get<double>();
  record.pulse.segment_duration = j.at("pulse").at("segment_duration").get<double>();
  record.pulse.phases = j.at("pulse").at("phases").get<std::vector<double>>();
  for (const auto& entry : j.at("sweep_trace"))
    record.sweep_trace.emplace_back(entry.at("T").get<double>(), entry.at("cost").get<double>());
  return record;
}

void write_sweep_trace_csv(const std::filesystem::path& path,
                           const std::vector<std::pair<double, double>>& trace) {
  auto out = open_out(path);
  out << "T,cost\n";
  for (const auto& [t, cost] : trace) out << t << "," << cost << "\n";
}

void write_surface_csv(const std::filesystem::path& path, const ErrorSurface& surface) {
  auto out = open_out(path);
  out << "eps1,eps2,error\n";
  for (std::size_t i = 0; i < surface.grid.eps1_values.size(); ++i)
    for (std::size_t j = 0; j < surface.grid.eps2_values.size(); ++j)
      out << surface.grid.eps1_values[i] << "," << surface.grid.eps2_values[j] << ","
          << surface.errors(i, j) << "\n";
}

void write_region_json(const std::filesystem::path& path, const RegionSummary& summary,
                       double level) {
  nlohmann::json j;
  j["level"] = level;
  j["eps1_half_width"] = summary.eps1_half_width;
  j["eps2_half_width"] = summary.eps2_half_width;
  j["cell_count"] = summary.cell_count;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_physical_pulse_csv(const std::filesystem::path& path,
                              const std::vector<PhysicalSegment>& segments) {
  auto out = open_out(path);
  out << "t_start_s,duration_s,ux_rad_s,uy_rad_s\n";
  for (const auto& seg : segments)
    out << seg.t_start_s << "," << seg.duration_s << "," << seg.ux_rad_s << "," << seg.uy_rad_s
        << "\n";
}

}  // namespace qsl::io
