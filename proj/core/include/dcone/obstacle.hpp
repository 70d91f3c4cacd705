#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcone/folds.hpp"
#include "dcone/grid.hpp"

namespace dcone {

struct SolverConfig {
  int n = 2048;
  double rho = 10.0;
  double rho_growth = 10.0;
  double rho_max = 1e8;
  double inner_tol = 1e-8;           // scaled stationarity target at the finest level
  double outer_tol = 1e-8 * kTwoPi;  // |constraint| target
  int max_outer = 30;
  double active_tol = 1e-7;
  std::uint64_t seed = 0;
  int coarse_n = 128;
  int max_inner = 20000;
  int max_newton = 60;

  void validate() const;
};

enum class Preset { Bump, Random };

Preset preset_from_string(std::string_view s);
std::string_view to_string(Preset p) noexcept;

/// Starting field for a preset: 1 + s * q with q >= 0 and s chosen so that the
/// constraint roughly vanishes.
PeriodicField initial_guess(Preset preset, const PeriodicGrid& grid, std::uint64_t seed);

struct Interval {
  double center = 0.0;
  double half_width = 0.0;
  double k = 0.0;
  int first_node = 0;  // first lift-off node
  int last_node = 0;   // last lift-off node (may wrap below first_node)
};

struct Residuals {
  double stationarity = 0.0;     // max |EL residual| / scale where w > 1
  double active_min = 0.0;       // min EL residual / scale where w = 1
  double feasibility = 0.0;      // |constraint|
  double complementarity = 0.0;  // sum (w - 1) max(0, 2 h r)
  double obstacle = 0.0;         // max(0, 1 - min w)
  double scale = 1.0;            // 1 + max |w''''|
};

struct MinimizerReport {
  PeriodicField w = PeriodicField::constant(PeriodicGrid::make(16), 1.0);
  double lambda = 0.0;
  double k = 0.0;
  std::vector<int> active;
  std::vector<Interval> intervals;
  double energy = 0.0;
  double constraint = 0.0;
  Residuals residuals;
  int outer_iterations = 0;
  int newton_iterations = 0;
  bool converged = false;
  bool degenerate_lambda = false;
  std::uint64_t seed = 0;

  double alpha() const noexcept { return alpha_for_lambda(lambda); }
  Branch branch() const noexcept { return branch_for_lambda(lambda); }
};

MinimizerReport minimize(const SolverConfig& cfg, const PeriodicField& init);
MinimizerReport minimize(const SolverConfig& cfg, Preset preset);

struct RestartResult {
  MinimizerReport best;
  std::vector<MinimizerReport> runs;
  std::vector<std::string> failures;
};

/// Runs `restarts` seeds (cfg.seed, cfg.seed + 1, ...) and keeps the lowest
/// energy; ties go to the lowest seed. `threads` <= 0 reads DCONE_THREADS.
RestartResult minimize_restarts(const SolverConfig& cfg, Preset preset, int restarts, int threads = 0);

int worker_count(int requested);

/// Builds the report fields (active set, lambda, residuals, structure) for a field.
MinimizerReport analyze(const PeriodicField& w, double active_tol = 1e-7);

std::vector<Interval> extract_structure(const MinimizerReport& report);

struct IntervalCheck {
  double z = 0.0;
  double nearest_root = 0.0;
  double root_distance = 0.0;
  double profile_gap = 0.0;
  double c2_jump = 0.0;
  bool root_ok = false;
  bool gap_ok = false;
  bool c2_ok = false;
};

struct ConditionReport {
  std::vector<IntervalCheck> intervals;
  Branch branch = Branch::Trig;
  bool passed = false;
};

struct ConditionTolerances {
  double root = 1e-3;
  double gap = 1e-3;
  double c2 = 1e-2;
};

ConditionReport check_necessary_conditions(const MinimizerReport& report, const ConditionTolerances& tol = {});

}  // namespace dcone
