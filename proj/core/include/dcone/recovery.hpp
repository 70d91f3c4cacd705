#pragma once

#include <Eigen/Core>
#include <vector>

#include "dcone/grid.hpp"

namespace dcone {

struct AdmissibleTriple {
  PeriodicField u;
  PeriodicField v;
  PeriodicField w;
  double closure_defect = 0.0;  // v(0) - v(2 pi) before periodic wrap
};

/// u = -w^2/2, v = v0 - int_0^t (u + w'^2/2). Requires w >= 1 and a closing v.
AdmissibleTriple triple_from_w(const PeriodicField& w, double v0 = 0.0);

/// Same construction without the obstacle check (used for diagnostic inputs
/// such as w = A cos t). Still requires the v-closure.
AdmissibleTriple integrate_triple(const PeriodicField& w, double v0 = 0.0);

struct TripleDefects {
  double obstacle = 0.0;  // max(0, 1 - min w)
  double u_rule = 0.0;    // max |u + w^2/2|
  double v_rule = 0.0;    // max |u + v' + w'^2/2|, v' by finite differences
};
TripleDefects check_triple(const AdmissibleTriple& t);

struct MollifyResult {
  PeriodicField w = PeriodicField::constant(PeriodicGrid::make(16), 1.0);
  double lambda = 0.0;      // amplitude of the constraint-restoring bump
  double constraint = 0.0;  // constraint of the output
  double psi_center = 0.0;
  double psi_half_width = 0.0;
  int newton_iterations = 0;
};

/// Convolution with a compactly supported bump of half-width eps, plus
/// lambda * psi with psi a bump inside the lift-off region chosen so that the
/// constraint vanishes again.
MollifyResult mollify_admissible(const PeriodicField& w, double eps);

/// Sampled curve on [0, 2 pi] with both endpoints stored (n + 1 samples).
struct Curve3 {
  double h = 0.0;
  std::vector<Eigen::Vector3d> x;
  std::vector<Eigen::Vector3d> dx;  // derivative samples, empty when not produced

  int intervals() const noexcept { return static_cast<int>(x.size()) - 1; }
  double spacing() const noexcept { return kTwoPi / intervals(); }
  double param(int j) const noexcept { return kTwoPi * j / intervals(); }
  bool has_derivative() const noexcept { return dx.size() == x.size(); }
};

Eigen::Vector3d e_r(double t);
Eigen::Vector3d e_phi(double t);
Eigen::Vector3d e_z();

struct StageResult {
  Curve3 stage1, stage2, stage3, stage4;
  double min_gz = 0.0;             // min gamma4 . e_z
  double gz_bound = 0.0;           // h + h^{5/2} / 2
  double gap_position = 0.0;       // |gamma4(2 pi) - gamma4(0)|
  double gap_tangent = 0.0;        // |gamma4'(2 pi) - gamma4'(0)|
  double stage3_norm_defect = 0.0;
  double stage4_speed_defect = 0.0;
  double length = 0.0;             // length of the closed stage-3 curve
};

/// Scaling, lift, projection to the sphere and arclength parametrization.
/// The stage-4 curve is unit speed on [0, 2 pi]; since the length differs from
/// 2 pi at order h^4 it does not close exactly.
StageResult build_stages(const AdmissibleTriple& triple, double h);

/// Geodesic curvature gamma'' . (gamma' ^ gamma) by 4th-order differences,
/// one-sided near the ends. n + 1 samples.
std::vector<double> curvature(const Curve3& curve);

/// gamma'' by 4th-order differences (from derivative samples when present).
std::vector<Eigen::Vector3d> second_derivative(const Curve3& curve);
std::vector<Eigen::Vector3d> first_derivative(const Curve3& curve);

struct BendingReport {
  double energy = 0.0;
  double modulus_defect = 0.0;  // max | |gamma| - 1 |
  double speed_defect = 0.0;    // max | |gamma'| - 1 |
};
BendingReport bending_energy(const Curve3& curve);

struct UVW {
  std::vector<double> u, v, w;
};
UVW extract_uvw(const Curve3& curve);

/// The three squared terms of |gamma'' + gamma|^2 written in the moving frame:
/// (u'' - 2 v')^2, (2 u' + v'')^2, (w'' + w)^2, integrated.
struct EnergySplit {
  double e_r = 0.0;
  double e_phi = 0.0;
  double e_z = 0.0;
};
EnergySplit energy_split(const Curve3& curve);

namespace detail {
double lagrange6(const std::vector<double>& f, double x, bool periodic);
Eigen::Vector3d lagrange6(const std::vector<Eigen::Vector3d>& f, double x, bool periodic);
double trapezoid(const std::vector<double>& f, double dx);
}  // namespace detail

}  // namespace dcone
