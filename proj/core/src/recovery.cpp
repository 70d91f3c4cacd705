#include "dcone/recovery.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "dcone/energy.hpp"
#include "dcone/error.hpp"

namespace dcone {

namespace {

using Vec3 = Eigen::Vector3d;

template <class T>
T zero_like(const T& ref) {
  if constexpr (std::is_same_v<T, double>) {
    (void)ref;
    return 0.0;
  } else {
    return T::Zero();
  }
}

// 4th-order first derivative on n + 1 samples, one-sided at the ends.
template <class T>
std::vector<T> diff1(const std::vector<T>& f, double dx) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 5) throw Error(ErrorCode::GridTooSmall, "need at least 6 samples");
  std::vector<T> out(f.size(), zero_like(f[0]));
  const double s = 1.0 / (12.0 * dx);
  out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
  out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
  for (int j = 2; j <= n - 2; ++j) out[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * s;
  out[n] = -(-25.0 * f[n] + 48.0 * f[n - 1] - 36.0 * f[n - 2] + 16.0 * f[n - 3] - 3.0 * f[n - 4]) * s;
  out[n - 1] = -(-3.0 * f[n] - 10.0 * f[n - 1] + 18.0 * f[n - 2] - 6.0 * f[n - 3] + f[n - 4]) * s;
  return out;
}

template <class T>
std::vector<T> diff2(const std::vector<T>& f, double dx) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 6) throw Error(ErrorCode::GridTooSmall, "need at least 7 samples");
  std::vector<T> out(f.size(), zero_like(f[0]));
  const double s = 1.0 / (12.0 * dx * dx);
  out[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) * s;
  out[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) * s;
  for (int j = 2; j <= n - 2; ++j)
    out[j] = (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) * s;
  out[n] = (45.0 * f[n] - 154.0 * f[n - 1] + 214.0 * f[n - 2] - 156.0 * f[n - 3] + 61.0 * f[n - 4] -
            10.0 * f[n - 5]) *
           s;
  out[n - 1] =
      (10.0 * f[n] - 15.0 * f[n - 1] - 4.0 * f[n - 2] + 14.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]) * s;
  return out;
}

template <class T>
T lagrange6_impl(const std::vector<T>& f, double x, bool periodic) {
  const int m = static_cast<int>(f.size());
  int i0 = static_cast<int>(std::floor(x)) - 2;
  if (!periodic) i0 = std::clamp(i0, 0, m - 6);
  T acc = zero_like(f[0]);
  for (int k = 0; k < 6; ++k) {
    double wk = 1.0;
    const double xk = i0 + k;
    for (int q = 0; q < 6; ++q)
      if (q != k) wk *= (x - (i0 + q)) / (xk - (i0 + q));
    int idx = i0 + k;
    if (periodic) idx = ((idx % m) + m) % m;
    acc += wk * f[static_cast<std::size_t>(idx)];
  }
  return acc;
}

double periodic_distance(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d < -kPi) d += kTwoPi;
  return d;
}

}  // namespace

namespace detail {
double lagrange6(const std::vector<double>& f, double x, bool periodic) { return lagrange6_impl(f, x, periodic); }
Eigen::Vector3d lagrange6(const std::vector<Eigen::Vector3d>& f, double x, bool periodic) {
  return lagrange6_impl(f, x, periodic);
}
double trapezoid(const std::vector<double>& f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
  return s * dx;
}
}  // namespace detail

Eigen::Vector3d e_r(double t) { return {std::cos(t), std::sin(t), 0.0}; }
Eigen::Vector3d e_phi(double t) { return {-std::sin(t), std::cos(t), 0.0}; }
Eigen::Vector3d e_z() { return {0.0, 0.0, 1.0}; }

AdmissibleTriple integrate_triple(const PeriodicField& w, double v0) {
  if (!std::isfinite(v0)) throw Error(ErrorCode::NonFinite, "v0 is not finite");
  const PeriodicGrid& grid = w.grid();
  const int n = grid.size();
  const double dx = grid.spacing();
  const PeriodicField wp = deriv(w, 1);
  std::vector<double> u(n), g(n);
  for (int j = 0; j < n; ++j) {
    u[j] = -0.5 * w[j] * w[j];
    g[j] = 0.5 * (w[j] * w[j] - wp[j] * wp[j]);  // v' = -(u + w'^2 / 2)
  }
  const PeriodicField gf(grid, g);
  const PeriodicField gp = deriv(gf, 1);
  double total = 0.0;
  for (double x : g) total += x;
  total *= dx;
  const double c = 2.0 * total;
  if (std::abs(c) > 1e-8 * kTwoPi)
    throw Error(ErrorCode::NonPeriodicV, "v does not close: defect " + std::to_string(-total) + " (constraint " +
                                             std::to_string(c) + ")");

  // Cumulative trapezoid with the first Euler-Maclaurin end correction.
  std::vector<double> v(n);
  double acc = 0.0;
  v[0] = v0;
  for (int j = 1; j < n; ++j) {
    acc += 0.5 * dx * (g[j - 1] + g[j]);
    v[j] = v0 + acc - dx * dx / 12.0 * (gp[j] - gp[0]);
  }
  AdmissibleTriple t{PeriodicField(grid, std::move(u)), PeriodicField(grid, std::move(v)), w, -total};
  return t;
}

AdmissibleTriple triple_from_w(const PeriodicField& w, double v0) {
  if (w.min() < 1.0 - 1e-12)
    throw Error(ErrorCode::ObstacleViolated, "w dips below 1 (min " + std::to_string(w.min()) + ")");
  return integrate_triple(w, v0);
}

TripleDefects check_triple(const AdmissibleTriple& t) {
  TripleDefects d;
  d.obstacle = std::max(0.0, 1.0 - t.w.min());
  const PeriodicField wp = deriv(t.w, 1);
  const PeriodicField vp = deriv(t.v, 1);
  for (int j = 0; j < t.w.size(); ++j) {
    d.u_rule = std::max(d.u_rule, std::abs(t.u[j] + 0.5 * t.w[j] * t.w[j]));
    d.v_rule = std::max(d.v_rule, std::abs(t.u[j] + vp[j] + 0.5 * wp[j] * wp[j]));
  }
  return d;
}

MollifyResult mollify_admissible(const PeriodicField& w, double eps) {
  const PeriodicGrid& grid = w.grid();
  const int n = grid.size();
  const double dx = grid.spacing();
  if (!(eps >= 2.0 * dx) || !(eps <= 0.5))
    throw Error(ErrorCode::InvalidArgument, "eps must lie in [2 h_grid, 0.5]");
  if (w.min() < 1.0 - 1e-12) throw Error(ErrorCode::ObstacleViolated, "input dips below the obstacle");

  const int m = static_cast<int>(std::ceil(eps / dx));
  std::vector<double> kernel(2 * m + 1, 0.0);
  double mass = 0.0;
  for (int q = -m; q <= m; ++q) {
    const double r = q * dx / eps;
    if (std::abs(r) < 1.0) kernel[q + m] = std::exp(-1.0 / (1.0 - r * r));
    mass += kernel[q + m];
  }
  for (double& k : kernel) k /= mass;
  std::vector<double> wb(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int q = -m; q <= m; ++q) s += kernel[q + m] * std::max(0.0, w[((j - q) % n + n) % n] - 1.0);
    wb[j] = 1.0 + s;
  }
  const PeriodicField wbar(grid, wb);

  // Bump inside the widest high part of the lift-off region.
  const double lift = wbar.max() - 1.0;
  if (lift <= 1e-8) throw Error(ErrorCode::NoInteriorSupport, "no lift-off region to place the correction in");
  int jmax = 0;
  for (int j = 1; j < n; ++j)
    if (wb[j] > wb[jmax]) jmax = j;
  auto high = [&](int j) { return wb[((j % n) + n) % n] - 1.0 > 0.5 * lift; };
  int lo = jmax, hi = jmax;
  while (hi - lo < n - 1 && high(lo - 1)) --lo;
  while (hi - lo < n - 1 && high(hi + 1)) ++hi;
  const double center = std::fmod(0.5 * (lo + hi) * dx + kTwoPi, kTwoPi);
  const double half = 0.5 * 0.5 * (hi - lo) * dx;
  if (half < 3.0 * dx) throw Error(ErrorCode::NoInteriorSupport, "lift-off region too narrow");
  const PeriodicField psi = PeriodicField::sample(grid, [&](double t) {
    const double d = periodic_distance(t, center);
    if (std::abs(d) >= half) return 0.0;
    const double c = std::cos(0.5 * kPi * d / half);
    return c * c;
  });

  const double c0 = constraint(wbar);
  const PeriodicField wbp = deriv(wbar, 1);
  const PeriodicField pp = deriv(psi, 1);
  double b = 0.0;
  for (int j = 0; j < n; ++j) b += wbar[j] * psi[j] - wbp[j] * pp[j];
  b *= dx;
  const double q = constraint(psi);

  MollifyResult res;
  double lam = 0.0;
  int it = 0;
  for (; it < 50; ++it) {
    const double g = c0 + 2.0 * lam * b + lam * lam * q;
    if (std::abs(g) <= 1e-13) break;
    const double gp = 2.0 * b + 2.0 * lam * q;
    if (std::abs(gp) < 1e-300) throw Error(ErrorCode::NewtonStall, "constraint is stationary in the bump amplitude");
    lam -= g / gp;
  }
  if (it == 50) throw Error(ErrorCode::NewtonStall, "amplitude Newton did not converge");
  res.w = wbar + lam * psi;
  if (res.w.min() < 1.0 - 1e-12)
    throw Error(ErrorCode::ObstacleViolated, "constraint correction pushes w below the obstacle");
  res.lambda = lam;
  res.constraint = constraint(res.w);
  res.psi_center = center;
  res.psi_half_width = half;
  res.newton_iterations = it;
  return res;
}

StageResult build_stages(const AdmissibleTriple& triple, double h) {
  if (!(h > 0.0) || !(h <= 0.5)) throw Error(ErrorCode::InvalidArgument, "h must lie in (0, 0.5]");
  require_same_grid(triple.u, triple.w);
  require_same_grid(triple.v, triple.w);
  const int n = triple.w.size();
  const double dx = triple.w.grid().spacing();
  const PeriodicField wp = deriv(triple.w, 1);
  const double lift = std::pow(h, 2.5);
  const double h2 = h * h;

  StageResult r;
  for (Curve3* c : {&r.stage1, &r.stage2, &r.stage3, &r.stage4}) {
    c->h = h;
    c->x.resize(n + 1);
    c->dx.resize(n + 1);
  }
  std::vector<Vec3> g3(n), g3p(n);
  std::vector<double> sigma(n);
  for (int j = 0; j <= n; ++j) {
    const int k = j % n;
    const double t = kTwoPi * j / n;
    const double u = triple.u[k], v = triple.v[k], w = triple.w[k];
    const double up = -w * wp[k];
    const double vp = -(u + 0.5 * wp[k] * wp[k]);
    const Vec3 er = e_r(t), ep = e_phi(t);
    const Vec3 base = (1.0 + h2 * u) * er + h2 * v * ep + h * w * e_z();
    const Vec3 dbase = h2 * (up - v) * er + (1.0 + h2 * (u + vp)) * ep + h * wp[k] * e_z();
    r.stage1.x[j] = base;
    r.stage1.dx[j] = dbase;
    const Vec3 x2 = base + lift * e_z();
    r.stage2.x[j] = x2;
    r.stage2.dx[j] = dbase;
    const double nrm = x2.norm();
    const Vec3 x3 = x2 / nrm;
    const Vec3 d3 = (dbase - x3.dot(dbase) * x3) / nrm;
    r.stage3.x[j] = x3;
    r.stage3.dx[j] = d3;
    r.stage3_norm_defect = std::max(r.stage3_norm_defect, std::abs(x3.norm() - 1.0));
    if (j < n) {
      g3[k] = x3;
      g3p[k] = d3;
      sigma[k] = d3.norm();
    }
  }
  double len = 0.0;
  for (double s : sigma) len += s;
  r.length = len * dx;

  // tau(s) with d tau / ds = 1 / |gamma3'(tau)|, classical RK4 on the grid step.
  auto rate = [&](double tau) { return 1.0 / detail::lagrange6(sigma, tau / dx, true); };
  double tau = 0.0;
  r.min_gz = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n; ++j) {
    const double xi = tau / dx;
    Vec3 x = detail::lagrange6(g3, xi, true);
    x.normalize();
    Vec3 d = detail::lagrange6(g3p, xi, true) * rate(tau);
    d -= d.dot(x) * x;
    r.stage4.x[j] = x;
    r.stage4.dx[j] = d;
    r.stage4_speed_defect = std::max(r.stage4_speed_defect, std::abs(d.norm() - 1.0));
    r.min_gz = std::min(r.min_gz, x.z());
    if (j == n) break;
    const double k1 = rate(tau);
    const double k2 = rate(tau + 0.5 * dx * k1);
    const double k3 = rate(tau + 0.5 * dx * k2);
    const double k4 = rate(tau + dx * k3);
    tau += dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  r.gz_bound = h + 0.5 * lift;
  r.gap_position = (r.stage4.x[n] - r.stage4.x[0]).norm();
  r.gap_tangent = (r.stage4.dx[n] - r.stage4.dx[0]).norm();
  return r;
}

std::vector<Eigen::Vector3d> first_derivative(const Curve3& curve) {
  if (curve.has_derivative()) return curve.dx;
  return diff1(curve.x, curve.spacing());
}

std::vector<Eigen::Vector3d> second_derivative(const Curve3& curve) {
  if (curve.has_derivative()) return diff1(curve.dx, curve.spacing());
  return diff2(curve.x, curve.spacing());
}

std::vector<double> curvature(const Curve3& curve) {
  const auto d1 = first_derivative(curve);
  const auto d2 = second_derivative(curve);
  std::vector<double> k(curve.x.size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = d2[j].dot(d1[j].cross(curve.x[j]));
  return k;
}

BendingReport bending_energy(const Curve3& curve) {
  const auto d1 = first_derivative(curve);
  const auto d2 = second_derivative(curve);
  BendingReport b;
  std::vector<double> f(curve.x.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] = (d2[j] + curve.x[j]).squaredNorm();
    b.modulus_defect = std::max(b.modulus_defect, std::abs(curve.x[j].norm() - 1.0));
    b.speed_defect = std::max(b.speed_defect, std::abs(d1[j].norm() - 1.0));
  }
  b.energy = detail::trapezoid(f, curve.spacing());
  return b;
}

UVW extract_uvw(const Curve3& curve) {
  UVW r;
  const std::size_t m = curve.x.size();
  r.u.resize(m);
  r.v.resize(m);
  r.w.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = curve.param(static_cast<int>(j));
    r.u[j] = curve.x[j].dot(e_r(t)) - 1.0;
    r.v[j] = curve.x[j].dot(e_phi(t));
    r.w[j] = curve.x[j].z();
  }
  return r;
}

EnergySplit energy_split(const Curve3& curve) {
  const UVW c = extract_uvw(curve);
  const double dx = curve.spacing();
  const auto up = diff1(c.u, dx), upp = diff2(c.u, dx);
  const auto vp = diff1(c.v, dx), vpp = diff2(c.v, dx);
  const auto wpp = diff2(c.w, dx);
  std::vector<double> a(c.u.size()), b(c.u.size()), z(c.u.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] = std::pow(upp[j] - 2.0 * vp[j], 2);
    b[j] = std::pow(2.0 * up[j] + vpp[j], 2);
    z[j] = std::pow(wpp[j] + c.w[j], 2);
  }
  return {detail::trapezoid(a, dx), detail::trapezoid(b, dx), detail::trapezoid(z, dx)};
}

}  // namespace dcone
