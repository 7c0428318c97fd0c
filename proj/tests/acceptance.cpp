// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Sweeps share a fixed seed so the run is reproducible; later
// criteria reuse pulses computed by earlier ones.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qsl/sweep.hpp"
#include "qsl/units.hpp"
#include "qsl/verifier.hpp"

using namespace qsl;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kZeroOrderTol = 0.02;       // criterion 1, absolute
constexpr double kFirstOrderTol = 0.05;      // criterion 2, absolute
constexpr double kSecondOrderRel = 0.05;     // criterion 3, relative
constexpr double kRegionLevel = 1e-6;        // criteria 4-5
constexpr double kFreqHalfWidth = 0.234;     // criterion 4 (90% of 0.26)
constexpr double kAmpHalfWidth = 0.09;       // criterion 4 (90% of 0.10)
constexpr double kSlopeTolLow = 0.3;         // criterion 6, n in {0,1}
constexpr double kSlopeTolHigh = 0.5;        // criterion 6, n = 2
constexpr double kUnitsSlack = 0.9;          // criterion 7, matches criterion 4

int g_failures = 0;

void report(int criterion, const std::string& label, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("criterion %d [%s]: %s — %s\n", criterion, label.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

SweepConfig base_config() {
  SweepConfig cfg;  // omega = pi, t_start = 0.3, step 0.005, threshold 1e-10
  return cfg;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Cache {
  std::map<std::string, QslRecord> records;

  const QslRecord& run(const std::string& key, const std::string& gate_name,
                       const RobustnessOrder& order, double t_start) {
    if (auto it = records.find(key); it != records.end()) return it->second;
    SweepConfig cfg = base_config();
    cfg.t_start = t_start;
    QslRecord rec = sweep(GateTarget::named(gate_name), order, cfg);
    std::printf("  [sweep] %s (%d,%d) from %.3f -> %.3f (cost %.2e)\n", gate_name.c_str(),
                order.n1, order.n2, t_start, rec.qsl, rec.final_cost);
    std::fflush(stdout);
    return records.emplace(key, std::move(rec)).first->second;
  }
};

// Largest grid offset k*delta (both signs) below which the exact-model gate
// error stays within the level along one uncertainty axis.
double axis_half_width(const ControlPulse& pulse, const GateTarget& target, bool frequency,
                       double level, double delta = 0.002, double max_eps = 0.45) {
  double width = 0.0;
  for (int k = 1; k * delta <= max_eps; ++k) {
    const double eps = k * delta;
    const double e1 = frequency ? eps : 0.0;
    const double e2 = frequency ? 0.0 : eps;
    if (gate_error(simulate_exact(pulse, e1, e2), target) > level ||
        gate_error(simulate_exact(pulse, -e1, -e2), target) > level)
      break;
    width = eps;
  }
  return width;
}

ControlPulse random_pulse_seeded(int segments, double dt, double omega, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-kPi, kPi);
  ControlPulse pulse;
  pulse.segment_duration = dt;
  pulse.omega = omega;
  pulse.phases.resize(segments);
  for (double& phi : pulse.phases) phi = dist(rng);
  return pulse;
}

void criterion1(Cache& cache) {
  const std::map<std::string, double> refs{{"X", 1.00}, {"Z", 1.74}, {"S", 1.32}, {"H", 1.25}};
  for (const auto& [gate, ref] : refs) {
    const QslRecord& rec = cache.run(gate + "00", gate, {0, 0}, base_config().t_start);
    report(1, gate + " (0,0)", std::abs(rec.qsl - ref) <= kZeroOrderTol,
           "computed " + fmt(rec.qsl) + ", reference " + fmt(ref));
  }
  // Independent fine-grid cross-check of the Z value against sqrt(3).
  SweepConfig fine = base_config();
  fine.t_start = 1.70;
  fine.t_step = 0.001;
  const QslRecord rec = sweep(GateTarget::named("Z"), {0, 0}, fine);
  const double root3 = std::sqrt(3.0);
  report(1, "Z fine grid", std::abs(rec.qsl - root3) <= kZeroOrderTol,
         "computed " + fmt(rec.qsl) + ", sqrt(3) = " + fmt(root3));
}

void criterion2(Cache& cache) {
  struct Cell {
    const char* gate;
    RobustnessOrder order;
    double ref;
    const char* parent;
  };
  const Cell cells[] = {{"X", {1, 0}, 2.33, "X00"},
                        {"X", {0, 1}, 2.58, "X00"},
                        {"Z", {1, 0}, 3.48, "Z00"},
                        {"Z", {0, 1}, 3.46, "Z00"}};
  for (const Cell& cell : cells) {
    const double start = cache.records.at(cell.parent).qsl;
    const std::string key = std::string(cell.gate) + std::to_string(cell.order.n1) +
                            std::to_string(cell.order.n2);
    const QslRecord& rec = cache.run(key, cell.gate, cell.order, start);
    report(2, key.substr(0, 1) + " (" + std::to_string(cell.order.n1) + "," +
                  std::to_string(cell.order.n2) + ")",
           std::abs(rec.qsl - cell.ref) <= kFirstOrderTol,
           "computed " + fmt(rec.qsl) + ", reference " + fmt(cell.ref));
  }
}

void criterion3(Cache& cache) {
  struct Cell {
    RobustnessOrder order;
    double ref;
    const char* parent;
  };
  const Cell cells[] = {{{2, 0}, 4.43, "Z10"}, {{0, 2}, 5.17, "Z01"}, {{1, 1}, 5.34, "Z01"}};
  for (const Cell& cell : cells) {
    const double start = cache.records.at(cell.parent).qsl;
    const std::string key = "Z" + std::to_string(cell.order.n1) + std::to_string(cell.order.n2);
    const QslRecord& rec = cache.run(key, "Z", cell.order, start);
    const bool pass = rec.qsl >= (1.0 - kSecondOrderRel) * cell.ref &&
                      rec.qsl <= (1.0 + kSecondOrderRel) * cell.ref;
    report(3, "Z (" + std::to_string(cell.order.n1) + "," + std::to_string(cell.order.n2) + ")",
           pass, "computed " + fmt(rec.qsl) + ", reference " + fmt(cell.ref));
  }
}

void criterion4(Cache& cache) {
  const GateTarget z = GateTarget::named("Z");
  // Third-order sweeps start near the reference durations instead of at the
  // previous order's QSL; the criterion gates the robust region, not the
  // duration, and the narrowed window keeps the single-core runtime sane.
  const double freq_start = std::max(cache.records.at("Z20").qsl, 5.90);
  const QslRecord& z30 = cache.run("Z30", "Z", {3, 0}, freq_start);
  const double hw1 = axis_half_width(z30.pulse, z, true, kRegionLevel);
  report(4, "Z (3,0) frequency width", hw1 >= kFreqHalfWidth,
         "|eps1| <= " + fmt(hw1) + " at level 1e-6, required " + fmt(kFreqHalfWidth));

  const double amp_start = std::max(cache.records.at("Z02").qsl, 5.17);
  const QslRecord& z03 = cache.run("Z03", "Z", {0, 3}, amp_start);
  const double hw2 = axis_half_width(z03.pulse, z, false, kRegionLevel);
  report(4, "Z (0,3) amplitude width", hw2 >= kAmpHalfWidth,
         "|eps2| <= " + fmt(hw2) + " at level 1e-6, required " + fmt(kAmpHalfWidth));
}

void criterion5(Cache& cache) {
  const GateTarget z = GateTarget::named("Z");
  // Fixed-duration optimization at the reference (2,2) QSL.
  const double t22 = 8.78;
  OptimizerConfig opt;
  const AugmentedGenerator gen = assemble_generator({2, 2}, kPi);
  const OptimizationResult r22 = multi_start(gen, z, t22, base_config().segment_target, opt);
  std::printf("  [optimize] Z (2,2) at T=%.2f -> cost %.2e\n", t22, r22.final_cost.total);
  std::fflush(stdout);

  const UncertaintyGrid grid = UncertaintyGrid::uniform(101, 0.5);
  const long c22 = level_set_region(error_surface(r22.pulse, z, grid), kRegionLevel).cell_count;
  const long c20 =
      level_set_region(error_surface(cache.records.at("Z20").pulse, z, grid), kRegionLevel)
          .cell_count;
  const long c02 =
      level_set_region(error_surface(cache.records.at("Z02").pulse, z, grid), kRegionLevel)
          .cell_count;
  report(5, "mixed dominance", c22 > c20 && c22 > c02,
         "cells: (2,2) " + std::to_string(c22) + ", (2,0) " + std::to_string(c20) + ", (0,2) " +
             std::to_string(c02));
}

void criterion6(Cache& cache) {
  // Step propagator vs reference exponential over randomized draws.
  {
    double worst = 0.0;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phi(-kPi, kPi);
    for (int n1 = 0; n1 <= 3; ++n1)
      for (int n2 = 0; n2 <= 3; ++n2) {
        const RobustnessOrder order{n1, n2};
        const AugmentedGenerator gen = assemble_generator(order, kPi);
        const StepKernel kernel = build_step_kernel(gen, 0.01);
        for (int trial = 0; trial < 5; ++trial) {
          const double p = phi(rng);
          const Matrix a = Complex(0.0, -1.0) * 0.01 *
                           (gen.h0 + kPi * (std::cos(p) * gen.h1 + std::sin(p) * gen.h2));
          worst = std::max(worst, (step(kernel, p) - reference_expm(a)).norm());
        }
      }
    report(6, "step vs exponential", worst <= 1e-12, "worst deviation " + fmt(worst));
  }

  // Exact gradient vs central finite differences over 100 draws.
  {
    double worst = 0.0;
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> which(0, 19);
    for (int trial = 0; trial < 100; ++trial) {
      const RobustnessOrder order{trial % 3, (trial / 3) % 3};
      const ControlPulse pulse = random_pulse_seeded(20, 0.07, kPi, 500 + trial);
      const GateTarget target = GateTarget::named(trial % 2 ? "H" : "Z");
      const ObjectiveEvaluator eval(assemble_generator(order, pulse.omega), target,
                                    pulse.segment_duration);
      std::vector<double> grad;
      eval.cost_and_gradient(pulse.phases, grad);
      const int j = which(rng);
      const double h = 1e-6;
      std::vector<double> bumped = pulse.phases;
      bumped[j] += h;
      const double fp = eval.cost(bumped).total;
      bumped[j] -= 2.0 * h;
      const double fm = eval.cost(bumped).total;
      const double fd = (fp - fm) / (2.0 * h);
      worst = std::max(worst, std::abs(grad[j] - fd) / std::max(1.0, std::abs(fd)));
    }
    report(6, "gradient vs finite differences", worst <= 1e-5, "worst relative " + fmt(worst));
  }

  // U00 unitarity after arbitrary pulses.
  {
    double worst = 0.0;
    for (unsigned seed = 0; seed < 10; ++seed) {
      const ControlPulse pulse = random_pulse_seeded(40, 0.05, kPi, 900 + seed);
      const Matrix x = propagate(assemble_generator({2, 2}, kPi), pulse);
      const Matrix2 u = x.block(0, 0, 2, 2);
      worst = std::max(worst, (u.adjoint() * u - Matrix2::Identity()).norm());
    }
    report(6, "U00 unitarity", worst <= 1e-10, "worst deviation " + fmt(worst));
  }

  // Augmented blocks vs the polynomial-fit oracle.
  {
    double worst = 0.0;
    const RobustnessOrder order{2, 2};
    for (unsigned seed = 0; seed < 20; ++seed) {
      const ControlPulse pulse = random_pulse_seeded(12, 0.11, 2.2, 300 + seed);
      const Matrix x = propagate(assemble_generator(order, pulse.omega), pulse);
      const CoefficientFit fit = fit_error_coefficients(pulse, UncertaintyAxis::frequency, 2);
      for (int m = 0; m <= 2; ++m) {
        const Matrix2 block = x.block(2 * order.block_index(m, 0), 0, 2, 2);
        worst = std::max(worst, (fit.coefficients[m] - block).norm() /
                                    std::max(1.0, block.norm()));
      }
    }
    report(6, "block vs fit oracle", worst <= 1e-5, "worst relative " + fmt(worst));
  }

  // Error-scaling slopes 2(n+1) on the computed robust pulses.
  {
    const GateTarget x_gate = GateTarget::named("X");
    const GateTarget z_gate = GateTarget::named("Z");
    ControlPulse bare;  // square pi pulse: order (0,0) robust
    bare.omega = kPi;
    bare.segment_duration = 0.01;
    bare.phases.assign(100, 0.0);
    // Windows sit where c*eps^(2n+2) dominates the 1e-10 convergence floor of
    // the optimized pulses; smaller offsets only probe that floor.
    const double s0 = scaling_slope(bare, x_gate, UncertaintyAxis::frequency, 1e-4, 1e-3);
    const double s1 =
        scaling_slope(cache.records.at("X10").pulse, x_gate, UncertaintyAxis::frequency, 3e-2, 1e-1);
    const double s1a =
        scaling_slope(cache.records.at("X01").pulse, x_gate, UncertaintyAxis::amplitude, 3e-2, 1e-1);
    const double s2 =
        scaling_slope(cache.records.at("Z20").pulse, z_gate, UncertaintyAxis::frequency, 5e-2, 1e-1);
    const bool pass = std::abs(s0 - 2.0) <= kSlopeTolLow && std::abs(s1 - 4.0) <= kSlopeTolLow &&
                      std::abs(s1a - 4.0) <= kSlopeTolLow && std::abs(s2 - 6.0) <= kSlopeTolHigh;
    report(6, "scaling slopes", pass,
           "n=0: " + fmt(s0) + ", n=1 freq: " + fmt(s1) + ", n=1 amp: " + fmt(s1a) +
               ", n=2 freq: " + fmt(s2));
  }

  // QSL scales inversely with the drive bound: doubling omega halves the QSL.
  {
    SweepConfig cfg = base_config();
    cfg.t_start = 0.9;
    const double q1 = sweep(GateTarget::named("X"), {0, 0}, cfg).qsl;
    cfg.omega = 2.0 * kPi;
    cfg.t_start = 0.45;
    const double q2 = sweep(GateTarget::named("X"), {0, 0}, cfg).qsl;
    report(6, "drive-bound proportionality", std::abs(q2 - 0.5 * q1) <= cfg.t_step,
           "qsl(pi) = " + fmt(q1) + ", qsl(2pi) = " + fmt(q2));
  }
}

void criterion7(Cache& cache) {
  // 10 MHz angular drive bound: omega_phys = 2*pi*1e7 rad/s, omega_bar = pi.
  const PhysicalScale scale = scale_for(2.0 * kPi * 1e7, kPi);
  const QslRecord& z30 = cache.records.at("Z30");
  const double hw1 = axis_half_width(z30.pulse, GateTarget::named("Z"), true, kRegionLevel);
  const double drift_rad_s = hw1 * scale.omega0;   // physical detuning bound
  const double reference_rad_s = 0.26 * scale.omega0;
  report(7, "physical drift bound", drift_rad_s >= kUnitsSlack * reference_rad_s,
         "tolerable drift " + fmt(drift_rad_s) + " rad/s (" + fmt(drift_rad_s / (2.0e6 * kPi)) +
             " MHz ordinary), reference " + fmt(reference_rad_s) + " rad/s");

  // Consistency of the waveform itself under the same tag.
  const auto segments = rescale_pulse(z30.pulse, scale);
  const double total = segments.back().t_start_s + segments.back().duration_s;
  const double expected = z30.qsl / scale.omega0;
  report(7, "physical duration", std::abs(total - expected) <= 1e-15 + 1e-12 * expected,
         "duration " + fmt(total) + " s for dimensionless " + fmt(z30.qsl));
}

}  // namespace

int main() {
  Cache cache;
  try {
    criterion1(cache);
    criterion2(cache);
    criterion3(cache);
    criterion4(cache);
    criterion5(cache);
    criterion6(cache);
    criterion7(cache);
  } catch (const std::exception& err) {
    std::printf("acceptance run aborted: %s\n", err.what());
    return 2;
  }
  std::printf("%s\n", g_failures == 0 ? "all criteria passed" : "criteria failed");
  return g_failures == 0 ? 0 : 1;
}
