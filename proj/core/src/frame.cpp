#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <random>

#include "dcone/closure.hpp"
#include "dcone/error.hpp"

namespace dcone {

namespace {

using Vec3 = Eigen::Vector3d;

Frame rhs(const Frame& f, double k) {
  Frame d;
  d.row(0) = k * f.row(1) - f.row(2);
  d.row(1) = -k * f.row(0);
  d.row(2) = f.row(0);
  return d;
}

double reorthonormalize(Frame& f) {
  const double defect = (f * f.transpose() - Frame::Identity()).cwiseAbs().maxCoeff();
  Vec3 u = f.row(2).transpose();
  u.normalize();
  Vec3 t = f.row(0).transpose();
  t -= t.dot(u) * u;
  t.normalize();
  f.row(0) = t.transpose();
  f.row(1) = t.cross(u).transpose();
  f.row(2) = u.transpose();
  return defect;
}

template <class K>
FrameTrajectory integrate(int n, K&& k_at, const Frame& f0) {
  if (n < 6) throw Error(ErrorCode::GridTooSmall, "frame integration needs at least 6 steps");
  if ((f0 * f0.transpose() - Frame::Identity()).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(f0.row(1).dot(f0.row(0).cross(f0.row(2))) - 1.0) > 1e-10)
    throw Error(ErrorCode::InvalidArgument, "initial frame is not a right-handed orthonormal T, T^U, U");
  const double ds = kTwoPi / n;
  FrameTrajectory out;
  out.frames.resize(n + 1);
  Frame f = f0;
  out.frames[0] = f;
  for (int j = 0; j < n; ++j) {
    const double k0 = k_at(j, 0.0), kh = k_at(j, 0.5), k1 = k_at(j, 1.0);
    const Frame a = rhs(f, k0);
    const Frame b = rhs(f + 0.5 * ds * a, kh);
    const Frame c = rhs(f + 0.5 * ds * b, kh);
    const Frame d = rhs(f + ds * c, k1);
    f += ds / 6.0 * (a + 2.0 * b + 2.0 * c + d);
    out.orthonormality_defect = std::max(out.orthonormality_defect, reorthonormalize(f));
    out.frames[j + 1] = f;
  }
  out.curve.x.resize(n + 1);
  out.curve.dx.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    out.curve.x[j] = out.frames[j].row(2).transpose();
    out.curve.dx[j] = out.frames[j].row(0).transpose();
  }
  return out;
}

}  // namespace

FrameTrajectory frame_integrate(const std::vector<double>& kp, const Frame& f0) {
  const int n = static_cast<int>(kp.size()) - 1;
  return integrate(
      n,
      [&](int j, double frac) {
        if (frac == 0.0) return kp[j];
        if (frac == 1.0) return kp[j + 1];
        return detail::lagrange6(kp, j + frac, false);
      },
      f0);
}

FrameTrajectory frame_integrate(const std::vector<double>& kappa, const std::function<double(double)>& psi,
                                const Frame& f0) {
  const int n = static_cast<int>(kappa.size()) - 1;
  const double ds = kTwoPi / std::max(n, 1);
  return integrate(
      n,
      [&](int j, double frac) {
        const double s = (j + frac) * ds;
        double k;
        if (frac == 0.0)
          k = kappa[j];
        else if (frac == 1.0)
          k = kappa[j + 1];
        else
          k = detail::lagrange6(kappa, j + frac, false);
        return k + psi(s);
      },
      f0);
}

Frame initial_frame(const Curve3& curve) {
  const auto d1 = first_derivative(curve);
  Vec3 u = curve.x[0].normalized();
  Vec3 t = d1[0] - d1[0].dot(u) * u;
  if (t.norm() < 1e-12) throw Error(ErrorCode::ChartDegenerate, "curve has zero tangential speed at 0");
  t.normalize();
  Frame f;
  f.row(0) = t.transpose();
  f.row(1) = t.cross(u).transpose();
  f.row(2) = u.transpose();
  return f;
}

double bump_at(double center, double t) {
  if (std::abs(t - center) >= 0.5 * kPi) return 0.0;
  const double c = std::cos(t - center);
  return c * c;
}

double closing_bump(int i, double t) { return bump_at(kDefaultBumpCenters[i], t); }

ClosureProblem::ClosureProblem(const Curve3& reference, const BumpCenters& centers)
    : h_(reference.h), centers_(centers), kappa_(curvature(reference)), f0_(initial_frame(reference)) {
  for (double c : centers_)
    if (!(c >= 0.5 * kPi && c <= 1.5 * kPi))
      throw Error(ErrorCode::InvalidArgument, "bump centers must lie in [pi/2, 3 pi/2]");
  base_ = frame_integrate(kappa_, f0_);
  base_.curve.h = h_;
  const int n = base_.curve.intervals();
  xb_ = base_.curve.x[n];
  tb_ = base_.curve.dx[n];
  nb_ = tb_.cross(xb_);
  target_ = chart(base_.curve.x[0], base_.curve.dx[0]);
}

Eigen::Vector3d ClosureProblem::chart(const Vec3& x, const Vec3& t) const {
  return {tb_.dot(x), nb_.dot(x), nb_.dot(t)};
}

FrameTrajectory ClosureProblem::trajectory(const Vec3& a) const {
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, "closing coefficients are not finite");
  if (a.isZero(0.0)) return base_;
  auto psi = [&](double s) { return a[0] * bump(0, s) + a[1] * bump(1, s) + a[2] * bump(2, s); };
  FrameTrajectory t = frame_integrate(kappa_, psi, f0_);
  t.curve.h = h_;
  return t;
}

Eigen::Vector3d ClosureProblem::map(const FrameTrajectory& traj) const {
  const int n = traj.curve.intervals();
  return chart(traj.curve.x[n], traj.curve.dx[n]) - target_;
}

Eigen::Vector3d ClosureProblem::map(const Vec3& a) const { return map(trajectory(a)); }

Eigen::Matrix3d ClosureProblem::jacobian(const FrameTrajectory& traj) const {
  const Curve3& c = traj.curve;
  const int n = c.intervals();
  const double ds = c.spacing();
  Eigen::Matrix3d j;
  for (int i = 0; i < 3; ++i) {
    Vec3 m = Vec3::Zero();
    for (int q = 0; q <= n; ++q) {
      const double w = (q == 0 || q == n) ? 0.5 : 1.0;
      m += w * bump(i, c.param(q)) * c.x[q];
    }
    m *= ds;
    const Vec3 dx = c.x[n].cross(m);
    const Vec3 dt = c.dx[n].cross(m);
    j.col(i) = Vec3(tb_.dot(dx), nb_.dot(dx), nb_.dot(dt));
  }
  return j;
}

Eigen::Matrix3d ClosureProblem::jacobian(const Vec3& a) const { return jacobian(trajectory(a)); }

Eigen::Matrix3d ClosureProblem::jacobian_fd(const Vec3& a, double step) const {
  Eigen::Matrix3d j;
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = step;
    j.col(i) = (map(Vec3(a + e)) - map(Vec3(a - e))) / (2.0 * step);
  }
  return j;
}

JacobianReport closure_jacobian(const ClosureProblem& p) {
  JacobianReport r;
  r.jacobian = p.jacobian(p.base());
  r.det = r.jacobian.determinant();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r.jacobian);
  r.singular_max = svd.singularValues()[0];
  r.singular_min = svd.singularValues()[2];

  const Curve3& c = p.base().curve;
  const int n = c.intervals();
  const double ds = c.spacing();
  const double shift = std::pow(p.h(), 1.5);
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (int q = 0; q <= n; ++q) {
    const double t = c.param(q);
    const double w = (q == 0 || q == n) ? 0.5 : 1.0;
    const Vec3 b(std::cos(t), std::sin(t), c.x[q].z() / p.h() - shift);
    for (int i = 0; i < 3; ++i) m.row(i) += w * p.bump(i, t) * b.transpose();
  }
  m *= ds;
  r.moment_det = m.determinant();
  const double scale = m.row(0).norm() * m.row(1).norm() * m.row(2).norm();
  r.near_singular = std::abs(r.moment_det) <= 1e-2 * scale;
  return r;
}

namespace {

bool singular(const JacobianReport& r) {
  return !std::isfinite(r.det) || r.singular_min <= 1e-14 * std::max(1.0, r.singular_max);
}

}  // namespace

CloseResult newton_close(const Curve3& reference, const NewtonOptions& opts) {
  ClosureProblem p(reference);
  CloseResult res;
  res.jacobian0 = closure_jacobian(p);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> pick(0.5 * kPi, 1.5 * kPi);
  for (int attempt = 0; singular(res.jacobian0) && attempt < opts.center_retries; ++attempt) {
    BumpCenters c{pick(rng), pick(rng), pick(rng)};
    std::sort(c.begin(), c.end());
    p = ClosureProblem(reference, c);
    res.jacobian0 = closure_jacobian(p);
  }
  res.centers = p.centers();

  Vec3 a = Vec3::Zero();
  FrameTrajectory traj = p.base();
  Vec3 f = p.map(traj);
  res.initial_residual = f.norm();
  const bool closed = f.norm() <= opts.tol;
  if (singular(res.jacobian0) && !closed)
    throw Error(ErrorCode::SingularJacobian, "closure Jacobian is singular");
  const Eigen::Matrix3d j0 = res.jacobian0.jacobian;
  if (!singular(res.jacobian0)) {
    const Eigen::Matrix3d j0inv = j0.inverse();
    res.certificate.alpha = (j0inv * f).norm();
    res.certificate.beta = Eigen::JacobiSVD<Eigen::Matrix3d>(j0inv).singularValues()[0];
  }

  int it = 0;
  while (f.norm() > opts.tol) {
    if (it >= opts.max_iter) throw Error(ErrorCode::NewtonDiverged, "closure Newton hit the iteration cap");
    const Eigen::Matrix3d j = p.jacobian(traj);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(j);
    if (!lu.isInvertible()) throw Error(ErrorCode::SingularJacobian, "closure Jacobian became singular");
    const Vec3 delta = -lu.solve(f);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const Vec3 trial = a + t * delta;
      FrameTrajectory tt = p.trajectory(trial);
      const Vec3 ft = p.map(tt);
      if (!ft.allFinite()) continue;
      if (ft.norm() < f.norm()) {
        a = trial;
        traj = std::move(tt);
        f = ft;
        accepted = true;
        break;
      }
    }
    ++it;
    if (!accepted) {
      if (f.norm() <= 1e3 * opts.tol) break;  // rounding floor
      throw Error(ErrorCode::NewtonStall, "no decrease along the Newton direction");
    }
    if (a.norm() > 1e6) throw Error(ErrorCode::NewtonDiverged, "closing coefficients blew up");
  }

  const int n = traj.curve.intervals();
  res.curve = traj.curve;
  res.a = a;
  res.iterations = it;
  res.residual = f.norm();
  res.gap_position = (res.curve.x[n] - res.curve.x[0]).norm();
  res.gap_tangent = (res.curve.dx[n] - res.curve.dx[0]).norm();
  res.psi.resize(n + 1);
  for (int q = 0; q <= n; ++q) {
    const double s = res.curve.param(q);
    res.psi[q] = a[0] * p.bump(0, s) + a[1] * p.bump(1, s) + a[2] * p.bump(2, s);
  }
  Certificate& c = res.certificate;
  if (a.norm() > 0.0) c.lipschitz = (p.jacobian(traj) - j0).norm() / a.norm();
  c.product = 2.0 * c.alpha * c.beta * c.lipschitz;
  c.holds = c.product < 1.0;
  const double h = reference.h;
  if (h > 0.0) {
    c.alpha_scaled = c.alpha / (h * h * h);
    c.beta_scaled = c.beta * h;
  }
  return res;
}

}  // namespace dcone
