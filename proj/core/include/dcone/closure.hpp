#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "dcone/recovery.hpp"

namespace dcone {

/// Rows T, N = T ^ U, U of an orthonormal frame along a unit-speed spherical curve.
using Frame = Eigen::Matrix3d;

struct FrameTrajectory {
  Curve3 curve;                 // x = U rows, dx = T rows
  std::vector<Frame> frames;
  double orthonormality_defect = 0.0;  // before re-orthonormalization, max over steps
};

/// RK4 for T' = k N - U, N' = -k T, U' = T with k = kappa + psi sampled at the
/// n + 1 nodes of [0, 2 pi]. Midpoint values use 6-point interpolation.
FrameTrajectory frame_integrate(const std::vector<double>& kappa_plus_psi, const Frame& f0);

/// Same, with psi evaluated exactly at every stage.
FrameTrajectory frame_integrate(const std::vector<double>& kappa, const std::function<double(double)>& psi,
                                const Frame& f0);

/// Frame at parameter 0 of a curve (from its samples).
Frame initial_frame(const Curve3& curve);

using BumpCenters = std::array<double, 3>;
inline constexpr BumpCenters kDefaultBumpCenters{kPi / 2, kPi, 3 * kPi / 2};

/// max(0, cos(t - c))^2, supported in (c - pi/2, c + pi/2).
double bump_at(double center, double t);

/// bump_at with the default centers pi/2, pi, 3 pi/2, i = 0..2.
double closing_bump(int i, double t);

/// Closing correction for a reference curve: curvature perturbations
/// a . psibar and the chart map f(a) of the endpoint mismatch.
class ClosureProblem {
 public:
  explicit ClosureProblem(const Curve3& reference, const BumpCenters& centers = kDefaultBumpCenters);

  double h() const noexcept { return h_; }
  const BumpCenters& centers() const noexcept { return centers_; }
  double bump(int i, double t) const { return bump_at(centers_[i], t); }
  const std::vector<double>& kappa() const noexcept { return kappa_; }
  const FrameTrajectory& base() const noexcept { return base_; }

  FrameTrajectory trajectory(const Eigen::Vector3d& a) const;
  Eigen::Vector3d map(const Eigen::Vector3d& a) const;
  Eigen::Vector3d map(const FrameTrajectory& traj) const;
  /// Derivative from the variation formula delta x = x(2 pi) ^ int psi_i gamma.
  Eigen::Matrix3d jacobian(const Eigen::Vector3d& a) const;
  Eigen::Matrix3d jacobian(const FrameTrajectory& traj) const;
  Eigen::Matrix3d jacobian_fd(const Eigen::Vector3d& a, double step = 1e-6) const;

  /// Chart coordinates of (x, T) around the unperturbed endpoint.
  Eigen::Vector3d chart(const Eigen::Vector3d& x, const Eigen::Vector3d& t) const;

 private:
  double h_;
  BumpCenters centers_;
  std::vector<double> kappa_;
  Frame f0_;
  FrameTrajectory base_;
  Eigen::Vector3d xb_, tb_, nb_;
  Eigen::Vector3d target_;
};

inline Eigen::Vector3d closure_map(const Curve3& reference, const Eigen::Vector3d& a) {
  return ClosureProblem(reference).map(a);
}

struct JacobianReport {
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Zero();
  double det = 0.0;
  double singular_min = 0.0;
  double singular_max = 0.0;
  double moment_det = 0.0;   // det of [int psi_i cos, int psi_i sin, int psi_i (gamma_z / h - h^{3/2})]
  bool near_singular = false;
};
JacobianReport closure_jacobian(const ClosureProblem& problem);

struct Certificate {
  double alpha = 0.0;      // |J0^{-1} f(0)|
  double beta = 0.0;       // |J0^{-1}|
  double lipschitz = 0.0;  // |J(a) - J0| / |a| at the solution
  double product = 0.0;    // 2 alpha beta lipschitz
  bool holds = false;
  double alpha_scaled = 0.0;  // alpha / h^3
  double beta_scaled = 0.0;   // beta h
};

struct NewtonOptions {
  double tol = 1e-11;
  int max_iter = 30;
  int center_retries = 8;  // random bump placements tried when the default Jacobian is singular
  std::uint64_t seed = 0;
};

struct CloseResult {
  Curve3 curve;
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  int iterations = 0;
  double residual = 0.0;
  double initial_residual = 0.0;
  double gap_position = 0.0;
  double gap_tangent = 0.0;
  JacobianReport jacobian0;
  Certificate certificate;
  std::vector<double> psi;  // sum a_i psibar_i at the nodes
  BumpCenters centers = kDefaultBumpCenters;
};

CloseResult newton_close(const Curve3& reference, const NewtonOptions& opts = {});

}  // namespace dcone
