#pragma once

#include <cstdint>
#include <random>

#include "qsl/objective.hpp"

namespace qsl {

enum class StepRule { fixed, backtracking, quasi_newton };

struct OptimizerConfig {
  int max_iterations = 2000;
  double gradient_tolerance = 1e-8;
  double cost_tolerance = 1e-10;
  StepRule step_rule = StepRule::quasi_newton;
  double initial_step = 1.0;
  std::uint64_t seed = 0;
  int restarts = 8;
  // Give up when the best cost has not improved by stall_rtol (relative) over
  // stall_window accepted iterations. Does not count as convergence.
  int stall_window = 80;
  double stall_rtol = 1e-5;
  bool record_trace = false;
};

struct OptimizationResult {
  ControlPulse pulse;
  CostReport final_cost;
  int iterations = 0;
  bool converged = false;  // final_cost.total <= cost_tolerance
  std::uint64_t seed = 0;
  std::vector<double> trace;  // best-so-far cost per iteration when recorded
};

// Minimizes J over the phase vector at fixed duration; the amplitude stays
// pinned at omega by construction. Throws on non-finite cost or gradient.
OptimizationResult optimize(const AugmentedGenerator& gen, const ControlPulse& initial,
                            const GateTarget& target, const OptimizerConfig& cfg);

// Uniform random phases in [-pi, pi).
ControlPulse random_pulse(int segments, double segment_duration, double omega,
                          std::mt19937_64& rng);

// cfg.restarts independent runs from random pulses seeded cfg.seed, cfg.seed+1, ...
// Returns the lowest-cost result (seed breaks ties). Segment count is
// ceil(total_duration / segment_target).
OptimizationResult multi_start(const AugmentedGenerator& gen, const GateTarget& target,
                               double total_duration, double segment_target,
                               const OptimizerConfig& cfg);

}  // namespace qsl
