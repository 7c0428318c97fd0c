#include "qsl/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsl {

namespace {

int segment_count(double total, double target) {
  return std::max(1, static_cast<int>(std::ceil(total / target - 1e-12)));
}

// Piecewise-linear interpolation of phases placed at segment centers.
double sample_profile(const std::vector<double>& phases, double dt, double t) {
  const int n = static_cast<int>(phases.size());
  const double u = t / dt - 0.5;
  if (u <= 0.0) return phases.front();
  if (u >= n - 1) return phases.back();
  const int j = static_cast<int>(u);
  const double w = u - j;
  return (1.0 - w) * phases[j] + w * phases[j + 1];
}

}  // namespace

ControlPulse warm_start_resample(const ControlPulse& pulse, double new_total,
                                 double segment_target) {
  const double old_total = pulse.total_duration();
  if (new_total < old_total - 1e-12)
    throw std::invalid_argument("warm_start_resample: duration may not shrink");
  if (pulse.phases.empty())
    throw std::invalid_argument("warm_start_resample: empty pulse");

  const int n = segment_count(new_total, segment_target);
  const double dt = new_total / n;
  const double stretch = old_total / new_total;

  ControlPulse out;
  out.segment_duration = dt;
  out.omega = pulse.omega;
  out.phases.resize(n);
  for (int j = 0; j < n; ++j) {
    const double t_old = (j + 0.5) * dt * stretch;
    out.phases[j] = sample_profile(pulse.phases, pulse.segment_duration, t_old);
  }
  return out;
}

QslRecord sweep(const GateTarget& gate, const RobustnessOrder& order, const SweepConfig& cfg) {
  if (cfg.t_start <= 0.0 || cfg.t_step <= 0.0 || cfg.t_start >= cfg.t_max)
    throw std::invalid_argument("sweep: invalid time grid");
  if (cfg.threshold <= 0.0) throw std::invalid_argument("sweep: threshold must be positive");

  const AugmentedGenerator gen = assemble_generator(order, cfg.omega);

  QslRecord record;
  record.gate = gate.name;
  record.order = order;

  ControlPulse warm;
  bool have_warm = false;
  for (int i = 0;; ++i) {
    const double t = cfg.t_start + i * cfg.t_step;
    if (t > cfg.t_max + 1e-12) throw std::runtime_error("t_max exhausted");

    const std::uint64_t base_seed =
        cfg.optimizer.seed + static_cast<std::uint64_t>(i) * std::max(cfg.optimizer.restarts, 1);
    std::vector<std::uint64_t> seeds;

    bool any = false;
    OptimizationResult best;
    if (have_warm) {
      OptimizerConfig warm_cfg = cfg.optimizer;
      warm_cfg.seed = base_seed;
      warm_cfg.cost_tolerance = cfg.threshold;
      seeds.push_back(warm_cfg.seed);
      best = optimize(gen, warm_start_resample(warm, t, cfg.segment_target), gate, warm_cfg);
      any = true;
    }
    const int fresh = cfg.optimizer.restarts - (have_warm ? 1 : 0);
    const int n_seg = segment_count(t, cfg.segment_target);
    const double dt = t / n_seg;
    for (int r = 0; r < fresh; ++r) {
      OptimizerConfig run_cfg = cfg.optimizer;
      run_cfg.seed = base_seed + 1 + static_cast<std::uint64_t>(r);
      run_cfg.cost_tolerance = cfg.threshold;
      seeds.push_back(run_cfg.seed);
      std::mt19937_64 rng(run_cfg.seed);
      const ControlPulse start = random_pulse(n_seg, dt, gen.omega, rng);
      OptimizationResult res = optimize(gen, start, gate, run_cfg);
      if (!any || res.final_cost.total < best.final_cost.total) {
        best = std::move(res);
        any = true;
      }
    }

    record.sweep_trace.emplace_back(t, best.final_cost.total);
    if (best.final_cost.total <= cfg.threshold) {
      record.qsl = t;
      record.pulse = best.pulse;
      record.final_cost = best.final_cost.total;
      record.seeds = std::move(seeds);
      return record;
    }
    warm = best.pulse;
    have_warm = true;
  }
}

std::vector<QslRecord> escalate(const GateTarget& gate, const RobustnessOrder& max_order,
                                const SweepConfig& cfg) {
  std::vector<QslRecord> records;
  auto chained = [&cfg](double prev_qsl) {
    SweepConfig c = cfg;
    c.t_start = std::max(cfg.t_start, prev_qsl);
    return c;
  };

  records.push_back(sweep(gate, RobustnessOrder{0, 0}, cfg));
  const double root_qsl = records.front().qsl;

  double prev = root_qsl;
  for (int k = 1; k <= max_order.n1; ++k) {
    records.push_back(sweep(gate, RobustnessOrder{k, 0}, chained(prev)));
    prev = records.back().qsl;
  }
  prev = root_qsl;
  for (int k = 1; k <= max_order.n2; ++k) {
    records.push_back(sweep(gate, RobustnessOrder{0, k}, chained(prev)));
    prev = records.back().qsl;
  }
  prev = root_qsl;
  for (int k = 1; k <= std::min(max_order.n1, max_order.n2); ++k) {
    records.push_back(sweep(gate, RobustnessOrder{k, k}, chained(prev)));
    prev = records.back().qsl;
  }
  return records;
}

}  // namespace qsl
