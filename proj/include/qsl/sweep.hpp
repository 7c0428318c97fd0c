#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qsl/optimizer.hpp"

namespace qsl {

struct SweepConfig {
  double omega = 3.14159265358979323846;  // dimensionless drive bound (pi by default)
  double t_start = 0.3;
  double t_step = 0.005;
  double t_max = 12.0;
  double threshold = 1e-10;       // convergence threshold on J
  double segment_target = 0.01;   // target segment duration; count = ceil(T / target)
  OptimizerConfig optimizer;
};

struct QslRecord {
  std::string gate;
  RobustnessOrder order;
  double qsl = 0.0;
  ControlPulse pulse;
  double final_cost = 0.0;
  std::vector<std::pair<double, double>> sweep_trace;  // (T, best cost)
  std::vector<std::uint64_t> seeds;                    // seeds tried at the hitting time
};

// Stretches a pulse to new_total by linear interpolation of the phase profile
// in rescaled time, regridded so the segment duration stays <= segment_target.
ControlPulse warm_start_resample(const ControlPulse& pulse, double new_total,
                                 double segment_target);

// Walks T upward from t_start in steps of t_step, re-optimizing at every T
// with the previous optimum as warm start plus fresh random restarts, and
// returns the first grid time whose cost reaches the threshold.
// Throws std::runtime_error("t_max exhausted") when the cap is hit.
QslRecord sweep(const GateTarget& gate, const RobustnessOrder& order, const SweepConfig& cfg);

// Sequential order escalation: frequency chain (k,0), amplitude chain (0,k)
// and the diagonal chain (k,k) up to max_order, each sweep starting its grid
// at the previous chain element's QSL.
std::vector<QslRecord> escalate(const GateTarget& gate, const RobustnessOrder& max_order,
                                const SweepConfig& cfg);

}  // namespace qsl
