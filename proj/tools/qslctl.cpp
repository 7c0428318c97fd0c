// qslctl: command-line front end for robust quantum-speed-limit searches.
//
// Commands: search, optimize, verify, rescale, table1, export.
// A JSON config file supplies defaults; command-line flags override it.
// QSL_OUTPUT_DIR sets the default output directory.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "qsl/io.hpp"
#include "qsl/sweep.hpp"
#include "qsl/units.hpp"
#include "qsl/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Settings {
  std::string gate;
  std::string order = "0,0";
  qsl::SweepConfig sweep;
  int grid_nodes = 101;
  double grid_half_range = 0.5;
  std::string output_dir;
};

qsl::RobustnessOrder parse_order(const std::string& text) {
  int n1 = 0, n2 = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> n1 >> comma >> n2) || comma != ',' || !(in >> std::ws).eof() || n1 < 0 || n2 < 0)
    throw CLI::ValidationError("--order", "expected \"n1,n2\" with nonnegative integers, got \"" +
                                              text + "\"");
  return {n1, n2};
}

fs::path resolve_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("QSL_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

void load_config_file(const fs::path& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path.string());
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& err) {
    throw CLI::ValidationError("--config", std::string("parse error: ") + err.what());
  }
  auto get = [](const json& node, const char* key, auto& out) {
    if (node.contains(key)) node.at(key).get_to(out);
  };
  get(cfg, "gate", s.gate);
  get(cfg, "order", s.order);
  get(cfg, "omega", s.sweep.omega);
  get(cfg, "output_dir", s.output_dir);
  if (cfg.contains("sweep")) {
    const json& sw = cfg["sweep"];
    get(sw, "t_start", s.sweep.t_start);
    get(sw, "t_step", s.sweep.t_step);
    get(sw, "t_max", s.sweep.t_max);
    get(sw, "threshold", s.sweep.threshold);
    get(sw, "segment_target", s.sweep.segment_target);
  }
  if (cfg.contains("optimizer")) {
    const json& op = cfg["optimizer"];
    get(op, "max_iterations", s.sweep.optimizer.max_iterations);
    get(op, "gradient_tolerance", s.sweep.optimizer.gradient_tolerance);
    get(op, "cost_tolerance", s.sweep.optimizer.cost_tolerance);
    get(op, "restarts", s.sweep.optimizer.restarts);
    get(op, "seed", s.sweep.optimizer.seed);
    get(op, "stall_window", s.sweep.optimizer.stall_window);
    get(op, "stall_rtol", s.sweep.optimizer.stall_rtol);
  }
  if (cfg.contains("grid")) {
    get(cfg["grid"], "nodes", s.grid_nodes);
    get(cfg["grid"], "half_range", s.grid_half_range);
  }
}

json settings_json(const Settings& s) {
  return json{{"gate", s.gate},
              {"order", s.order},
              {"omega", s.sweep.omega},
              {"sweep",
               {{"t_start", s.sweep.t_start},
                {"t_step", s.sweep.t_step},
                {"t_max", s.sweep.t_max},
                {"threshold", s.sweep.threshold},
                {"segment_target", s.sweep.segment_target}}},
              {"optimizer",
               {{"max_iterations", s.sweep.optimizer.max_iterations},
                {"gradient_tolerance", s.sweep.optimizer.gradient_tolerance},
                {"cost_tolerance", s.sweep.optimizer.cost_tolerance},
                {"restarts", s.sweep.optimizer.restarts},
                {"seed", s.sweep.optimizer.seed},
                {"stall_window", s.sweep.optimizer.stall_window},
                {"stall_rtol", s.sweep.optimizer.stall_rtol}}},
              {"grid", {{"nodes", s.grid_nodes}, {"half_range", s.grid_half_range}}}};
}

// Sidecar with config hash, seeds and version; timestamps live only here so
// result files stay byte-identical across reruns.
void write_provenance(const fs::path& dir, const std::string& command, const Settings& s,
                      const std::vector<std::uint64_t>& seeds,
                      const std::vector<std::string>& outputs) {
  const std::string canonical = settings_json(s).dump();
  std::ostringstream hash;
  hash << std::hex << std::hash<std::string>{}(canonical);
  json side{{"command", command},
            {"version", kVersion},
            {"config_hash", hash.str()},
            {"config", settings_json(s)},
            {"seeds", seeds},
            {"outputs", outputs},
            {"timestamp_unix", std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count()}};
  std::ofstream out(dir / (command + ".provenance.json"));
  out << side.dump(2) << '\n';
}

std::string order_tag(const qsl::RobustnessOrder& order) {
  return std::to_string(order.n1) + "-" + std::to_string(order.n2);
}

// Escalation path to an arbitrary target order: raise n1 first, then n2,
// each sweep starting at the previous element's QSL.
std::vector<qsl::QslRecord> chain_to(const qsl::GateTarget& gate,
                                     const qsl::RobustnessOrder& target,
                                     const qsl::SweepConfig& base) {
  std::vector<qsl::RobustnessOrder> path{{0, 0}};
  for (int k = 1; k <= target.n1; ++k) path.push_back({k, 0});
  for (int k = 1; k <= target.n2; ++k) path.push_back({target.n1, k});

  std::vector<qsl::QslRecord> records;
  qsl::SweepConfig cfg = base;
  for (const auto& order : path) {
    qsl::QslRecord rec = qsl::sweep(gate, order, cfg);
    cfg.t_start = std::max(base.t_start, rec.qsl);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_record_files(const fs::path& dir, const qsl::QslRecord& rec,
                        std::vector<std::string>& outputs) {
  const std::string stem = rec.gate + "_" + order_tag(rec.order);
  qsl::io::write_qsl_record_json(dir / (stem + "_record.json"), rec);
  qsl::io::write_pulse_csv(dir / (stem + "_pulse.csv"), rec.pulse, rec.gate, rec.order);
  qsl::io::write_sweep_trace_csv(dir / (stem + "_trace.csv"), rec.sweep_trace);
  for (const char* suffix : {"_record.json", "_pulse.csv", "_trace.csv"})
    outputs.push_back(stem + suffix);
}

int cmd_search(const Settings& s) {
  const qsl::RobustnessOrder order = parse_order(s.order);
  const qsl::GateTarget gate = qsl::GateTarget::named(s.gate);
  const fs::path dir = resolve_output_dir(s.output_dir);
  fs::create_directories(dir);

  std::vector<std::string> outputs;
  std::vector<std::uint64_t> seeds;
  try {
    const std::vector<qsl::QslRecord> records = chain_to(gate, order, s.sweep);
    for (const auto& rec : records) {
      write_record_files(dir, rec, outputs);
      seeds.insert(seeds.end(), rec.seeds.begin(), rec.seeds.end());
    }
    const qsl::QslRecord& final = records.back();
    std::cout << "QSL(" << s.gate << ", order " << final.order.n1 << "," << final.order.n2
              << ") = " << final.qsl << "  (cost " << final.final_cost << ")\n";
  } catch (const std::runtime_error& err) {
    std::cerr << "search failed: " << err.what() << '\n';
    write_provenance(dir, "search", s, seeds, outputs);
    return 1;
  }
  write_provenance(dir, "search", s, seeds, outputs);
  return 0;
}

int cmd_optimize(const Settings& s, double duration) {
  const qsl::RobustnessOrder order = parse_order(s.order);
  const qsl::GateTarget gate = qsl::GateTarget::named(s.gate);
  const fs::path dir = resolve_output_dir(s.output_dir);
  fs::create_directories(dir);

  const qsl::AugmentedGenerator gen = qsl::assemble_generator(order, s.sweep.omega);
  const qsl::OptimizationResult result =
      qsl::multi_start(gen, gate, duration, s.sweep.segment_target, s.sweep.optimizer);

  std::vector<std::string> outputs;
  const std::string stem = s.gate + "_" + order_tag(order) + "_T" + std::to_string(duration);
  qsl::io::write_pulse_csv(dir / (stem + "_pulse.csv"), result.pulse, s.gate, order);
  outputs.push_back(stem + "_pulse.csv");
  write_provenance(dir, "optimize", s, {result.seed}, outputs);

  std::cout << "cost = " << result.final_cost.total << "  converged = " << std::boolalpha
            << result.converged << "  iterations = " << result.iterations << "  seed = "
            << result.seed << '\n';
  return 0;
}

int cmd_verify(const Settings& s, const std::string& pulse_path, double level,
               const std::string& slope_axis) {
  const qsl::io::PulseFile file = qsl::io::read_pulse_csv(pulse_path);
  const std::string gate_name = s.gate.empty() ? file.gate : s.gate;
  if (gate_name.empty())
    throw CLI::ValidationError("--gate", "pulse file names no gate; pass --gate");
  const qsl::GateTarget gate = qsl::GateTarget::named(gate_name);
  const fs::path dir = resolve_output_dir(s.output_dir);
  fs::create_directories(dir);

  const qsl::UncertaintyGrid grid = qsl::UncertaintyGrid::uniform(s.grid_nodes, s.grid_half_range);
  const qsl::ErrorSurface surface = qsl::error_surface(file.pulse, gate, grid);
  const qsl::RegionSummary region = qsl::level_set_region(surface, level);

  const std::string stem = fs::path(pulse_path).stem().string();
  std::vector<std::string> outputs{stem + "_surface.csv", stem + "_region.json"};
  qsl::io::write_surface_csv(dir / outputs[0], surface);
  qsl::io::write_region_json(dir / outputs[1], region, level);

  std::cout << "origin error = "
            << qsl::gate_error(qsl::simulate_exact(file.pulse, 0.0, 0.0), gate) << '\n'
            << "level " << level << ": |eps1| <= " << region.eps1_half_width << ", |eps2| <= "
            << region.eps2_half_width << ", cells = " << region.cell_count << '\n';

  if (!slope_axis.empty()) {
    qsl::UncertaintyAxis axis;
    if (slope_axis == "frequency")
      axis = qsl::UncertaintyAxis::frequency;
    else if (slope_axis == "amplitude")
      axis = qsl::UncertaintyAxis::amplitude;
    else if (slope_axis == "diagonal")
      axis = qsl::UncertaintyAxis::diagonal;
    else
      throw CLI::ValidationError("--slope-axis", "expected frequency|amplitude|diagonal");
    std::cout << "slope(" << slope_axis << ") = "
              << qsl::scaling_slope(file.pulse, gate, axis, 1e-3, 3e-2) << '\n';
  }
  write_provenance(dir, "verify", s, {}, outputs);
  return 0;
}

int cmd_rescale(const Settings& s, const std::string& pulse_path,
                std::optional<double> omega_rad_s, std::optional<double> omega_hz) {
  if (omega_rad_s.has_value() == omega_hz.has_value())
    throw CLI::ValidationError("--omega-rad-s/--omega-hz",
                               "pass exactly one explicit drive-bound unit tag");
  const double omega_phys =
      omega_rad_s ? *omega_rad_s : 2.0 * std::numbers::pi * *omega_hz;

  const qsl::io::PulseFile file = qsl::io::read_pulse_csv(pulse_path);
  const qsl::PhysicalScale scale = qsl::scale_for(omega_phys, file.pulse.omega);
  const auto segments = qsl::rescale_pulse(file.pulse, scale);

  const fs::path dir = resolve_output_dir(s.output_dir);
  fs::create_directories(dir);
  const std::string name = fs::path(pulse_path).stem().string() + "_physical.csv";
  qsl::io::write_physical_pulse_csv(dir / name, segments);
  write_provenance(dir, "rescale", s, {}, {name});

  const double total = segments.empty()
                           ? 0.0
                           : segments.back().t_start_s + segments.back().duration_s;
  std::cout << "omega_phys = " << omega_phys << " rad/s, duration = " << total << " s\n";
  return 0;
}

struct Table1Cell {
  qsl::RobustnessOrder order;
  double reference;
};

// Reference QSL values, one row per gate, cells in Table-1 layout order.
const std::map<std::string, std::vector<Table1Cell>> kTable1 = {
    {"X", {{{0, 0}, 1.00}, {{1, 0}, 2.33}, {{2, 0}, 4.28}, {{3, 0}, 5.04}, {{4, 0}, 6.72},
           {{0, 1}, 2.58}, {{0, 2}, 4.21}, {{0, 3}, 5.85}, {{1, 1}, 4.44}, {{2, 2}, 8.22}}},
    {"Z", {{{0, 0}, 1.74}, {{1, 0}, 3.48}, {{2, 0}, 4.43}, {{3, 0}, 5.99}, {{4, 0}, 7.19},
           {{0, 1}, 3.46}, {{0, 2}, 5.17}, {{0, 3}, 6.91}, {{1, 1}, 5.34}, {{2, 2}, 8.78}}},
    {"S", {{{0, 0}, 1.32}, {{1, 0}, 2.97}, {{2, 0}, 4.12}, {{3, 0}, 5.53}, {{4, 0}, 6.71},
           {{0, 1}, 3.04}, {{0, 2}, 4.74}, {{0, 3}, 6.48}, {{1, 1}, 4.83}, {{2, 2}, 8.11}}},
    {"H", {{{0, 0}, 1.25}, {{1, 0}, 2.69}, {{2, 0}, 4.34}, {{3, 0}, 5.47}, {{4, 0}, 7.00},
           {{0, 1}, 2.73}, {{0, 2}, 4.18}, {{0, 3}, 5.81}, {{1, 1}, 4.89}, {{2, 2}, 8.83}}}};

struct ChainJob {
  std::string gate;
  std::vector<Table1Cell> cells;  // one escalation chain, increasing order
};

int cmd_table1(const Settings& s, const std::vector<std::string>& gates, int jobs) {
  const fs::path dir = resolve_output_dir(s.output_dir);
  fs::create_directories(dir);

  // Three independent chains per gate: frequency (k,0), amplitude (0,k),
  // diagonal (k,k); chains for different gates are independent too.
  std::vector<ChainJob> queue;
  for (const std::string& g : gates) {
    const auto it = kTable1.find(g);
    if (it == kTable1.end()) throw CLI::ValidationError("--gates", "unknown gate " + g);
    ChainJob freq{g, {}}, amp{g, {}}, diag{g, {}};
    for (const Table1Cell& cell : it->second) {
      if (cell.order.n2 == 0)
        freq.cells.push_back(cell);
      else if (cell.order.n1 == 0)
        amp.cells.push_back(cell);
      else
        diag.cells.push_back(cell);
    }
    // The diagonal chains re-root at (0,0) like the axis chains do.
    diag.cells.insert(diag.cells.begin(), freq.cells.front());
    queue.push_back(std::move(freq));
    queue.push_back(std::move(amp));
    queue.push_back(std::move(diag));
  }

  struct Row {
    std::string gate;
    qsl::RobustnessOrder order;
    double reference = 0.0;
    double computed = 0.0;
    std::string status;
  };
  std::vector<Row> rows;
  std::mutex rows_mutex;
  std::vector<std::string> outputs;
  std::size_t next = 0;
  std::mutex next_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t index;
      {
        std::lock_guard lock(next_mutex);
        if (next >= queue.size()) return;
        index = next++;
      }
      const ChainJob& job = queue[index];
      const qsl::GateTarget gate = qsl::GateTarget::named(job.gate);
      qsl::SweepConfig cfg = s.sweep;
      for (const Table1Cell& cell : job.cells) {
        Row row{job.gate, cell.order, cell.reference, 0.0, "ok"};
        try {
          qsl::QslRecord rec = qsl::sweep(gate, cell.order, cfg);
          row.computed = rec.qsl;
          cfg.t_start = std::max(s.sweep.t_start, rec.qsl);
          std::lock_guard lock(rows_mutex);
          write_record_files(dir, rec, outputs);
        } catch (const std::exception& err) {
          row.status = err.what();
          std::lock_guard lock(rows_mutex);
          rows.push_back(row);
          break;  // the rest of this chain has no starting point
        }
        std::lock_guard lock(rows_mutex);
        rows.push_back(row);
      }
    }
  };

  std::vector<std::thread> pool;
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(queue.size())));
  for (int w = 0; w < workers - 1; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    const auto key = [](const Row& r) {
      return std::tuple(r.gate, r.order.n2 == 0 ? 0 : (r.order.n1 == 0 ? 1 : 2), r.order.n1,
                        r.order.n2);
    };
    return key(a) < key(b);
  });

  std::ofstream table(dir / "table1.csv");
  table << "gate,n1,n2,reference,computed,deviation,status\n";
  table.precision(17);
  for (const Row& row : rows) {
    table << row.gate << ',' << row.order.n1 << ',' << row.order.n2 << ',' << row.reference
          << ',' << row.computed << ',' << row.computed - row.reference << ',' << row.status
          << '\n';
    std::cout << row.gate << " (" << row.order.n1 << "," << row.order.n2 << "): ref "
              << row.reference << ", computed " << row.computed << " [" << row.status << "]\n";
  }
  outputs.push_back("table1.csv");
  write_provenance(dir, "table1", s, {}, outputs);
  return 0;
}

int cmd_export(const Settings& s, const std::string& record_path) {
  const qsl::QslRecord rec = qsl::io::read_qsl_record_json(record_path);
  const fs::path dir = resolve_output_dir(s.output_dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  write_record_files(dir, rec, outputs);
  write_provenance(dir, "export", s, rec.seeds, outputs);
  std::cout << "exported " << outputs.size() << " files for " << rec.gate << " ("
            << rec.order.n1 << "," << rec.order.n2 << ")\n";
  return 0;
}

void add_common_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--config", "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  cmd->add_option("--output-dir", s.output_dir, "output directory (default: $QSL_OUTPUT_DIR)");
  cmd->add_option("--omega", s.sweep.omega, "dimensionless drive bound")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", s.sweep.optimizer.seed, "base RNG seed");
  cmd->add_option("--restarts", s.sweep.optimizer.restarts, "random restarts per duration")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations", s.sweep.optimizer.max_iterations)
      ->check(CLI::PositiveNumber);
}

void add_sweep_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--t-start", s.sweep.t_start)->check(CLI::PositiveNumber);
  cmd->add_option("--t-step", s.sweep.t_step)->check(CLI::PositiveNumber);
  cmd->add_option("--t-max", s.sweep.t_max)->check(CLI::PositiveNumber);
  cmd->add_option("--threshold", s.sweep.threshold)->check(CLI::PositiveNumber);
  cmd->add_option("--segment-target", s.sweep.segment_target)->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust quantum-speed-limit search and verification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Settings s;
  // Config files load before CLI11 writes flag values, so flags win.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string_view(argv[i]) == "--config") {
      try {
        load_config_file(argv[i + 1], s);
      } catch (const CLI::Error& err) {
        std::cerr << err.what() << '\n';
        return 1;
      }
    }

  double duration = 0.0;
  double level = 1e-6;
  std::string pulse_path, record_path, slope_axis;
  std::optional<double> omega_rad_s, omega_hz;
  std::vector<std::string> gates{"X", "Z", "S", "H"};
  int jobs = 1;

  CLI::App* search = app.add_subcommand("search", "sweep durations upward to find a QSL");
  search->add_option("--gate", s.gate, "X | Z | S | H")->required();
  search->add_option("--order", s.order, "robustness order \"n1,n2\"")->required();
  add_common_flags(search, s);
  add_sweep_flags(search, s);

  CLI::App* optimize = app.add_subcommand("optimize", "optimize a pulse at fixed duration");
  optimize->add_option("--gate", s.gate)->required();
  optimize->add_option("--order", s.order)->required();
  optimize->add_option("--duration", duration, "dimensionless total duration")
      ->required()
      ->check(CLI::PositiveNumber);
  add_common_flags(optimize, s);
  optimize->add_option("--segment-target", s.sweep.segment_target)->check(CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand("verify", "exact-model robustness diagnostics");
  verify->add_option("--pulse", pulse_path, "pulse CSV")->required()->check(CLI::ExistingFile);
  verify->add_option("--gate", s.gate, "override the gate named in the pulse file");
  verify->add_option("--level", level, "sublevel threshold")->check(CLI::PositiveNumber);
  verify->add_option("--grid-nodes", s.grid_nodes)->check(CLI::PositiveNumber);
  verify->add_option("--grid-half-range", s.grid_half_range)->check(CLI::PositiveNumber);
  verify->add_option("--slope-axis", slope_axis, "frequency | amplitude | diagonal");
  verify->add_option("--config", "JSON config file")->check(CLI::ExistingFile);
  verify->add_option("--output-dir", s.output_dir);

  CLI::App* rescale = app.add_subcommand("rescale", "emit a physical waveform");
  rescale->add_option("--pulse", pulse_path)->required()->check(CLI::ExistingFile);
  rescale->add_option("--omega-rad-s", omega_rad_s, "drive bound in rad/s");
  rescale->add_option("--omega-hz", omega_hz, "drive bound as an ordinary frequency in Hz");
  rescale->add_option("--output-dir", s.output_dir);

  CLI::App* table1 = app.add_subcommand("table1", "full escalation over all gates");
  table1->add_option("--gates", gates, "subset of X Z S H")->delimiter(',');
  table1->add_option("--jobs", jobs, "worker pool size")->check(CLI::PositiveNumber);
  add_common_flags(table1, s);
  add_sweep_flags(table1, s);

  CLI::App* exp = app.add_subcommand("export", "re-emit result files from a record JSON");
  exp->add_option("--record", record_path)->required()->check(CLI::ExistingFile);
  exp->add_option("--output-dir", s.output_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (search->parsed()) return cmd_search(s);
    if (optimize->parsed()) return cmd_optimize(s, duration);
    if (verify->parsed()) return cmd_verify(s, pulse_path, level, slope_axis);
    if (rescale->parsed()) return cmd_rescale(s, pulse_path, omega_rad_s, omega_hz);
    if (table1->parsed()) return cmd_table1(s, gates, jobs);
    if (exp->parsed()) return cmd_export(s, record_path);
  } catch (const CLI::Error& err) {
    std::cerr << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
