#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcone/grid.hpp"

namespace dcone {

enum class Branch { Trig, Hyperbolic };

std::string_view to_string(Branch b) noexcept;
Branch branch_from_string(std::string_view s);

/// Branch selected by the sign of 1 + lambda, and alpha = sqrt|1 + lambda|.
Branch branch_for_lambda(double lambda) noexcept;
double alpha_for_lambda(double lambda) noexcept;
double lambda_for(double alpha, Branch b) noexcept;

/// Extended real: finite value, or a pole with the sign of the blow-up.
struct GValue {
  double value = 0.0;
  bool pole = false;
};

/// g_alpha(z) = -(a^2 sin z cos az - a sin az cos z) / (sin z cos az - a sin az cos z).
/// Removable 0/0 points (z = pi, integer alpha; z = pi/2, odd alpha) are
/// resolved by one-sided polynomial extrapolation.
GValue g_alpha(double alpha, double z);

/// Hyperbolic analogue, evaluated in tanh form so that large alpha*z cannot overflow.
GValue g_tilde_alpha(double alpha, double z);

GValue g_eval(Branch b, double alpha, double z);

/// Numerator and denominator of g in a form that is continuous in z; g = k iff
/// g_root_function(...) = 0 away from common zeros.
double g_root_function(Branch b, double alpha, double k, double z);
double g_denominator(Branch b, double alpha, double z);

/// All z in (0, pi] with g(z) = k, ascending.
std::vector<double> invert_g(double alpha, double k, Branch b, int samples = 100000);

struct Fold {
  double center = 0.0;
  double half_width = 0.0;
};

struct FoldSpec {
  double lambda = 0.0;
  std::vector<Fold> folds;
  double k = 0.0;

  double alpha() const noexcept { return alpha_for_lambda(lambda); }
  Branch branch() const noexcept { return branch_for_lambda(lambda); }
};

/// order-th derivative of the closed-form fold profile at offset s from the
/// fold center (valid for any s; the fold itself is |s| <= z).
double profile_eval(double lambda, double z, double s, int order = 0);

/// Nodes of `grid` lying in the closed fold interval and the profile there.
struct FoldProfile {
  std::vector<int> nodes;
  std::vector<double> offsets;
  std::vector<double> values;
};
FoldProfile fold_profile(double lambda, const Fold& fold, const PeriodicGrid& grid);

/// Min of the profile over the fold, sampled densely (1 on the boundary).
double profile_min(double lambda, double z, int samples = 2001);

/// Exact (quadrature) integrals of a fold configuration over the whole circle.
double exact_energy(const FoldSpec& spec);
double exact_constraint(const FoldSpec& spec);

struct FoldCandidate {
  FoldSpec spec;
  PeriodicField w = PeriodicField::constant(PeriodicGrid::make(16), 1.0);
  double energy = 0.0;               // exact integral
  double discrete_energy = 0.0;      // on the grid of w
  double constraint_residual = 0.0;  // exact integral
  double discrete_constraint = 0.0;
  std::vector<double> c2_jumps;      // |w''(endpoint) - k|, two per fold
  double min_w = 1.0;
  bool feasible = false;
};

void validate(const FoldSpec& spec);

FoldCandidate assemble_candidate(const FoldSpec& spec, const PeriodicGrid& grid);

struct SingleFoldSolution {
  double lambda = 0.0;
  double alpha = 0.0;
  double z = 0.0;
  Branch branch = Branch::Trig;
  FoldCandidate candidate;
  double opening_angle_deg() const noexcept { return 2.0 * z * 180.0 / kPi; }
};

// Single-fold minimizer, solved to ~1e-11.
inline constexpr double kSingleFoldLambda = 13.4742924462;
inline constexpr double kSingleFoldZ = 1.21287408012;
inline constexpr double kSingleFoldAngleDeg = 138.985131743;
inline constexpr double kSingleFoldEnergy = 133.229565784;

/// Finds (lambda, z) with g(z) = 0 and vanishing constraint for one fold, and
/// returns the lowest-energy such configuration.
SingleFoldSolution solve_single_fold(const PeriodicGrid& grid = PeriodicGrid::make(2048));

struct PlotRow {
  double z = 0.0;
  double g = 0.0;
  bool pole = false;
};

struct PlotTable {
  std::vector<PlotRow> rows;
  int poles = 0;
  int branches = 0;
};

/// Samples z_i = pi i / samples, i = 1..samples. A row is marked as a pole when
/// g is a pole there or a pole lies in (z_{i-1}, z_i].
PlotTable plot_g(double alpha, Branch b, int samples);

struct SweepRow {
  double alpha = 0.0;
  double k = 0.0;
  Branch branch = Branch::Trig;
  int root_index = -1;
  double z = 0.0;
  std::optional<double> energy;  // single-fold energy where the profile is admissible
  bool feasible = false;
  bool alpha_excluded = false;
};

std::vector<SweepRow> sweep(const std::vector<double>& alphas, const std::vector<double>& ks,
                            Branch b, int samples = 20000);

std::vector<double> linspace(double a, double b, int count);

}  // namespace dcone
