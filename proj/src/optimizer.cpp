#include "qsl/optimizer.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace qsl {

namespace {

using Eigen::VectorXd;

bool finite(double v) { return std::isfinite(v); }

struct LbfgsMemory {
  std::deque<VectorXd> s, y;
  std::deque<double> rho;
  static constexpr int kDepth = 15;

  void clear() {
    s.clear();
    y.clear();
    rho.clear();
  }

  void push(const VectorXd& sv, const VectorXd& yv) {
    const double sy = sv.dot(yv);
    if (sy <= 1e-12 * sv.norm() * yv.norm()) return;  // curvature guard
    s.push_back(sv);
    y.push_back(yv);
    rho.push_back(1.0 / sy);
    if (static_cast<int>(s.size()) > kDepth) {
      s.pop_front();
      y.pop_front();
      rho.pop_front();
    }
  }

  // Two-loop recursion; returns the quasi-Newton descent direction -H g.
  VectorXd direction(const VectorXd& g) const {
    VectorXd q = g;
    const int m = static_cast<int>(s.size());
    std::vector<double> alpha(m);
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s[i].dot(q);
      q -= alpha[i] * y[i];
    }
    if (m > 0) q *= s.back().dot(y.back()) / y.back().squaredNorm();
    for (int i = 0; i < m; ++i) {
      const double beta = rho[i] * y[i].dot(q);
      q += (alpha[i] - beta) * s[i];
    }
    return -q;
  }
};

struct EvalAdapter {
  const ObjectiveEvaluator& eval;
  mutable std::vector<double> phases, grad;

  double cost(const VectorXd& x) const {
    phases.assign(x.data(), x.data() + x.size());
    const double f = eval.cost(phases).total;
    if (!finite(f)) throw std::runtime_error("optimize: non-finite cost encountered");
    return f;
  }

  double cost_and_gradient(const VectorXd& x, VectorXd& g) const {
    phases.assign(x.data(), x.data() + x.size());
    const double f = eval.cost_and_gradient(phases, grad).total;
    g = Eigen::Map<const VectorXd>(grad.data(), static_cast<Eigen::Index>(grad.size()));
    if (!finite(f) || !g.allFinite())
      throw std::runtime_error("optimize: non-finite cost or gradient encountered");
    return f;
  }
};

}  // namespace

OptimizationResult optimize(const AugmentedGenerator& gen, const ControlPulse& initial,
                            const GateTarget& target, const OptimizerConfig& cfg) {
  if (initial.phases.empty()) throw std::invalid_argument("optimize: empty initial pulse");
  if (cfg.cost_tolerance <= 0.0) throw std::invalid_argument("optimize: cost_tolerance must be positive");
  if (std::abs(initial.omega - gen.omega) > 1e-12 * std::max(1.0, std::abs(gen.omega)))
    throw std::invalid_argument("optimize: pulse omega does not match generator");

  const ObjectiveEvaluator evaluator(gen, target, initial.segment_duration);
  const EvalAdapter f{evaluator, {}, {}};

  VectorXd x = Eigen::Map<const VectorXd>(initial.phases.data(),
                                          static_cast<Eigen::Index>(initial.phases.size()));
  VectorXd g;
  double fx = f.cost_and_gradient(x, g);

  OptimizationResult result;
  result.seed = cfg.seed;
  if (cfg.record_trace) result.trace.push_back(fx);

  LbfgsMemory memory;
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 50;

  double stall_ref = fx;
  int stall_count = 0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (fx <= cfg.cost_tolerance) break;
    if (g.norm() <= cfg.gradient_tolerance) break;

    VectorXd d;
    bool quasi = cfg.step_rule == StepRule::quasi_newton && !memory.s.empty();
    if (quasi) {
      d = memory.direction(g);
      if (d.dot(g) >= 0.0) {  // not a descent direction; restart curvature model
        memory.clear();
        quasi = false;
      }
    }
    if (!quasi) d = -g;

    VectorXd xn;
    VectorXd gn;
    double fn = fx;
    bool accepted = false;

    if (cfg.step_rule == StepRule::fixed) {
      xn = x + cfg.initial_step * d;
      fn = f.cost_and_gradient(xn, gn);
      accepted = true;
    } else {
      const double gd = g.dot(d);
      double t = quasi ? 1.0 : std::min(cfg.initial_step, cfg.initial_step / std::max(1.0, g.norm()));
      for (int k = 0; k < kMaxBacktracks; ++k) {
        xn = x + t * d;
        fn = f.cost(xn);
        if (fn <= fx + kArmijo * t * gd) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        if (!memory.s.empty()) {
          memory.clear();  // retry from steepest descent next iteration
          continue;
        }
        break;  // line search exhausted at machine precision
      }
      fn = f.cost_and_gradient(xn, gn);
    }

    if (cfg.step_rule == StepRule::quasi_newton) memory.push(xn - x, gn - g);
    x = xn;
    g = gn;
    fx = fn;
    if (cfg.record_trace) result.trace.push_back(std::min(fx, result.trace.back()));

    if (stall_ref - fx > cfg.stall_rtol * std::max(fx, cfg.cost_tolerance)) {
      stall_ref = fx;
      stall_count = 0;
    } else if (++stall_count >= cfg.stall_window) {
      ++it;
      break;
    }
  }

  result.pulse = initial;
  result.pulse.phases.assign(x.data(), x.data() + x.size());
  result.final_cost = evaluator.cost(result.pulse.phases);
  result.iterations = it;
  result.converged = result.final_cost.total <= cfg.cost_tolerance;
  return result;
}

ControlPulse random_pulse(int segments, double segment_duration, double omega,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
  ControlPulse pulse;
  pulse.segment_duration = segment_duration;
  pulse.omega = omega;
  pulse.phases.resize(segments);
  for (double& phi : pulse.phases) phi = dist(rng);
  return pulse;
}

OptimizationResult multi_start(const AugmentedGenerator& gen, const GateTarget& target,
                               double total_duration, double segment_target,
                               const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("multi_start: restarts must be >= 1");
  if (total_duration <= 0.0 || segment_target <= 0.0)
    throw std::invalid_argument("multi_start: duration and segment target must be positive");

  const int segments = static_cast<int>(std::ceil(total_duration / segment_target - 1e-12));
  const double dt = total_duration / segments;

  bool any = false;
  OptimizationResult best;
  std::exception_ptr last_fault;
  for (int r = 0; r < cfg.restarts; ++r) {
    OptimizerConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(r);
    std::mt19937_64 rng(run_cfg.seed);
    const ControlPulse start = random_pulse(segments, dt, gen.omega, rng);
    try {
      OptimizationResult res = optimize(gen, start, target, run_cfg);
      if (!any || res.final_cost.total < best.final_cost.total ||
          (res.final_cost.total == best.final_cost.total && res.seed < best.seed)) {
        best = std::move(res);
        any = true;
      }
    } catch (const std::runtime_error&) {
      last_fault = std::current_exception();  // numerical fault; other restarts continue
    }
  }
  if (!any) std::rethrow_exception(last_fault);
  return best;
}

}  // namespace qsl
