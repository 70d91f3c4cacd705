#include "dcone/obstacle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include "dcone/energy.hpp"
#include "dcone/error.hpp"

namespace dcone {

void SolverConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  PeriodicGrid::make(n);
  if (!(rho > 0.0) || !(rho_growth > 1.0) || !(rho_max >= rho)) bad("penalty parameters must satisfy 0 < rho <= rho_max, growth > 1");
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0) || !(active_tol > 0.0)) bad("tolerances must be positive");
  if (max_outer < 1 || max_inner < 1 || max_newton < 1) bad("iteration limits must be positive");
  if (coarse_n < 16 || coarse_n % 2 != 0) bad("coarse_n must be even and >= 16");
}

Preset preset_from_string(std::string_view s) {
  if (s == "bump") return Preset::Bump;
  if (s == "random") return Preset::Random;
  throw Error(ErrorCode::InvalidConfig, "unknown preset '" + std::string(s) + "'");
}

std::string_view to_string(Preset p) noexcept { return p == Preset::Bump ? "bump" : "random"; }

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

SpMat periodic_stencil(int n, std::initializer_list<std::pair<int, double>> taps, double scale) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * taps.size());
  for (int j = 0; j < n; ++j)
    for (auto [off, c] : taps) t.emplace_back(j, ((j + off) % n + n) % n, c * scale);
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Discrete operators on one grid level: M w is half the energy gradient,
// K w half the constraint gradient, C(w) = h w^T K w.
struct Level {
  int n;
  double h;
  SpMat M, K;

  explicit Level(int n_) : n(n_), h(kTwoPi / n_) {
    SpMat I(n, n);
    I.setIdentity();
    const SpMat d1 = periodic_stencil(n, {{-2, 1.0}, {-1, -8.0}, {1, 8.0}, {2, -1.0}}, 1.0 / (12.0 * h));
    const SpMat d2 = periodic_stencil(n, {{-2, -1.0}, {-1, 16.0}, {0, -30.0}, {1, 16.0}, {2, -1.0}},
                                      1.0 / (12.0 * h * h));
    const SpMat a = d2 + I;
    M = (a * a).pruned();
    K = (I + d1 * d1).pruned();
  }
};

double fourth_norm(const std::vector<double>& w, double h) {
  std::vector<double> a(w.size()), b(w.size());
  stencil::d2(w, h, a);
  stencil::d2(a, h, b);
  double m = 0.0;
  for (double x : b) m = std::max(m, std::abs(x));
  return m;
}

// Least-squares multiplier on nodes with w - 1 > tol.
double lsq_lambda(const std::vector<double>& w, double h, double tol) {
  const std::size_t n = w.size();
  std::vector<double> me(n), kc(n), s(n);
  kernel::half_energy_grad(w, h, me, s);
  kernel::half_constraint_grad(w, h, kc, s);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (w[j] - 1.0 <= tol) continue;
    num += me[j] * kc[j];
    den += kc[j] * kc[j];
  }
  return den > 0.0 ? -num / den : 0.0;
}

struct PdasOutcome {
  bool converged = false;
  int iterations = 0;
};

// Semismooth Newton / primal-dual active set on the KKT system
//   (M + lambda K) w = mu,  mu >= 0,  w >= 1,  mu (w - 1) = 0,  w^T K w = 0.
// The residual of M w is only accurate to about eps / h^4, so once the active
// set is settled and stationarity is below `tol`, the remaining steps correct
// the constraint alone.
PdasOutcome pdas(const Level& L, std::vector<double>& wv, double& lambda, double tol, double ctol, int max_iter,
                 double release_tol) {
  const int n = L.n;
  Eigen::Map<Vec> w(wv.data(), n);
  std::vector<char> active(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) active[j] = wv[j] <= 1.0;
  PdasOutcome out;
  std::vector<int> pos(static_cast<std::size_t>(n));
  bool changed = true;
  for (int it = 0; it < max_iter; ++it) {
    for (int j = 0; j < n; ++j)
      if (active[j]) w[j] = 1.0;
    const SpMat A = L.M + lambda * L.K;
    const Vec kw = L.K * w;
    const Vec f = A * w;
    const double c = L.h * w.dot(kw);
    double rmax = 0.0;
    for (int j = 0; j < n; ++j)
      if (!active[j]) rmax = std::max(rmax, std::abs(f[j]));
    const double scale = 1.0 + fourth_norm(wv, L.h);
    const bool settled = !changed && rmax <= tol * scale;
    if (settled && std::abs(c) <= ctol) {
      out.converged = true;
      return out;
    }
    out.iterations = it + 1;

    int m = 0;
    for (int j = 0; j < n; ++j) pos[j] = active[j] ? -1 : m++;
    if (m == 0) return out;
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(A.nonZeros()) + 2 * m);
    for (int col = 0; col < A.outerSize(); ++col) {
      if (pos[col] < 0) continue;
      for (SpMat::InnerIterator e(A, col); e; ++e)
        if (pos[e.row()] >= 0) t.emplace_back(pos[e.row()], pos[col], e.value());
    }
    Vec rhs(m + 1);
    for (int j = 0; j < n; ++j) {
      if (pos[j] < 0) continue;
      t.emplace_back(pos[j], m, kw[j]);
      t.emplace_back(m, pos[j], kw[j]);
      rhs[pos[j]] = settled ? 0.0 : -f[j];
    }
    rhs[m] = -c / (2.0 * L.h);
    SpMat S(m + 1, m + 1);
    S.setFromTriplets(t.begin(), t.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(S);
    if (lu.info() != Eigen::Success) return out;
    const Vec dx = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !dx.allFinite()) return out;
    for (int j = 0; j < n; ++j)
      if (pos[j] >= 0) w[j] += dx[pos[j]];
    lambda += dx[m];

    const Vec f1 = (L.M + lambda * L.K) * w;
    const double slack = release_tol * (1.0 + fourth_norm(wv, L.h));
    changed = false;
    for (int j = 0; j < n; ++j) {
      const bool next = active[j] ? f1[j] >= -slack : w[j] < 1.0;
      changed = changed || next != static_cast<bool>(active[j]);
      active[j] = next;
    }
  }
  return out;
}

struct AlOutcome {
  int outer = 0;
  double rho = 0.0;
};

// Augmented Lagrangian E + lambda C + rho/2 C^2 with projected Barzilai-Borwein
// inner iterations. Only used on the coarse level, to a loose tolerance.
AlOutcome augmented_lagrangian(int n, std::vector<double>& w, double& lambda, const SolverConfig& cfg,
                               double ctol, double gtol) {
  const double h = kTwoPi / n;
  const std::size_t N = w.size();
  std::vector<double> s(N), ge(N), gc(N), g(N), gn(N), wt(N);
  double rho = cfg.rho;
  double prev_c = std::numeric_limits<double>::infinity();
  AlOutcome out;

  auto value = [&](const std::vector<double>& x, double& c) {
    c = kernel::constraint(x, h, s);
    return kernel::energy(x, h, s) + lambda * c + 0.5 * rho * c * c;
  };
  auto gradient = [&](const std::vector<double>& x, double c, std::vector<double>& out_g) {
    kernel::half_energy_grad(x, h, ge, s);
    kernel::half_constraint_grad(x, h, gc, s);
    const double mult = lambda + rho * c;
    for (std::size_t j = 0; j < N; ++j) out_g[j] = 2.0 * (ge[j] + mult * gc[j]);
  };

  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    out.outer = outer + 1;
    double c = 0.0;
    double L = value(w, c);
    gradient(w, c, g);
    double step = 0.0;
    {
      double gm = 0.0;
      for (double x : g) gm = std::max(gm, std::abs(x));
      step = 1e-2 / (1.0 + gm);
    }
    for (int it = 0; it < cfg.max_inner; ++it) {
      double pg = 0.0, gm = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        gm = std::max(gm, std::abs(g[j]));
        if (w[j] > 1.0 || g[j] < 0.0) pg = std::max(pg, std::abs(g[j]));
      }
      if (pg <= gtol * (1.0 + fourth_norm(w, h))) break;
      bool accepted = false;
      double ct = 0.0, Lt = 0.0;
      for (int bt = 0; bt < 40; ++bt) {
        double dec = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          wt[j] = std::max(1.0, w[j] - step * g[j]);
          dec += g[j] * (w[j] - wt[j]);
        }
        Lt = value(wt, ct);
        if (Lt <= L - 1e-4 * h * dec) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      gradient(wt, ct, gn);
      double sy = 0.0, ss = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        const double sj = wt[j] - w[j];
        sy += sj * (gn[j] - g[j]);
        ss += sj * sj;
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-14, 1e6) : std::min(step * 4.0, 1e6);
      w.swap(wt);
      g.swap(gn);
      L = Lt;
      c = ct;
    }
    c = kernel::constraint(w, h, s);
    if (std::abs(c) <= ctol) break;
    lambda += rho * c;
    if (std::abs(c) > 0.25 * std::abs(prev_c)) rho = std::min(rho * cfg.rho_growth, cfg.rho_max);
    prev_c = c;
  }
  out.rho = rho;
  return out;
}

// 4-point cubic interpolation to the midpoints, then clipped at the obstacle.
std::vector<double> prolongate(const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<double> out(2 * w.size());
  for (int j = 0; j < n; ++j) {
    const double a = w[(j - 1 + n) % n], b = w[j], c = w[(j + 1) % n], d = w[(j + 2) % n];
    out[2 * j] = b;
    out[2 * j + 1] = std::max(1.0, (-a + 9.0 * b + 9.0 * c - d) / 16.0);
  }
  return out;
}

bool is_flat(const std::vector<double>& w) {
  return *std::max_element(w.begin(), w.end()) - 1.0 <= 1e-8;
}

// Random lift used to leave the w = 1 trap, where the projected gradient vanishes.
std::vector<double> perturbation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  const PeriodicGrid g = PeriodicGrid::make(n);
  const double c = u(rng);
  PeriodicField q = PeriodicField::sample(g, [&](double t) {
    const double s = std::remainder(t - c, kTwoPi);
    return std::abs(s) < 1.2 ? std::pow(std::cos(kPi * s / 2.4), 2) : 0.0;
  });
  std::vector<double> v(q.values().begin(), q.values().end());
  for (double& x : v) x = 1.0 + 2.0 * x;
  return v;
}

void require_feasible_input(const PeriodicField& init) {
  for (double v : init.values())
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "initial guess is not finite");
}

}  // namespace

PeriodicField initial_guess(Preset preset, const PeriodicGrid& grid, std::uint64_t seed) {
  PeriodicField q = PeriodicField::constant(grid, 0.0);
  if (preset == Preset::Bump) {
    constexpr double z0 = 1.2;
    q = PeriodicField::sample(grid, [](double t) {
      const double s = t - kPi;
      return std::abs(s) < z0 ? std::pow(std::cos(kPi * s / (2.0 * z0)), 2) : 0.0;
    });
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    double a[5] = {}, b[5] = {};
    for (int m = 1; m <= 4; ++m) {
      a[m] = nd(rng) / m;
      b[m] = nd(rng) / m;
    }
    q = PeriodicField::sample(grid, [&](double t) {
      double p = 0.0;
      for (int m = 1; m <= 4; ++m) p += a[m] * std::cos(m * t) + b[m] * std::sin(m * t);
      return std::max(0.0, p);
    });
  }
  // constraint(1 + s q) = 2 pi + 2 s int q + s^2 (int q^2 - int q'^2)
  const double c1 = integrate(q);
  const double qq = inner(q, q);
  const PeriodicField dq = deriv(q, 1);
  const double dd = inner(dq, dq);
  double s = 1.0;
  if (dd > qq) s = (c1 + std::sqrt(c1 * c1 + kTwoPi * (dd - qq))) / (dd - qq);
  return s * q + 1.0;
}

MinimizerReport analyze(const PeriodicField& wf, double active_tol) {
  MinimizerReport r;
  r.w = wf;
  const std::vector<double> w(wf.values().begin(), wf.values().end());
  const double h = wf.grid().spacing();
  const int n = wf.size();
  r.lambda = lsq_lambda(w, h, active_tol);
  r.energy = energy(wf);
  r.constraint = constraint(wf);
  const PeriodicField res = el_residual(wf, r.lambda);
  r.residuals.scale = 1.0 + fourth_norm(w, h);
  r.residuals.feasibility = std::abs(r.constraint);
  r.residuals.obstacle = std::max(0.0, 1.0 - wf.min());
  r.residuals.active_min = std::numeric_limits<double>::infinity();
  constexpr double contact = 64.0 * std::numeric_limits<double>::epsilon();
  bool bound = false;
  for (int j = 0; j < n; ++j) {
    const double rj = res[j] / r.residuals.scale;
    if (w[j] - 1.0 <= active_tol) r.active.push_back(j);
    // lift-off nodes within active_tol are free, so they count toward stationarity
    if (w[j] - 1.0 <= contact) {
      bound = true;
      r.residuals.active_min = std::min(r.residuals.active_min, rj);
    } else {
      r.residuals.stationarity = std::max(r.residuals.stationarity, std::abs(rj));
    }
    r.residuals.complementarity += (w[j] - 1.0) * std::max(0.0, 2.0 * h * res[j]);
  }
  if (!bound) r.residuals.active_min = 0.0;
  r.degenerate_lambda = std::abs(r.lambda) < 1e-6 || std::abs(r.lambda + 1.0) < 1e-6;
  if (!r.active.empty()) {
    const PeriodicField d2 = deriv(wf, 2);
    double sum = 0.0;
    for (int j : r.active) sum += d2[j];
    r.k = sum / static_cast<double>(r.active.size());
  }
  if (!r.active.empty()) r.intervals = extract_structure(r);
  return r;
}

namespace {

int wrap(int j, int n) { return ((j % n) + n) % n; }

// Sub-grid contact point between the lift-off node `in` and its neighbour
// `in + step`, from w - 1 ~ a |t - t0|^p. Returns the distance from `in`.
double contact_fit(const PeriodicField& w, int in, int step, double p) {
  const int n = w.size();
  const double h = w.grid().spacing();
  const double e1 = w[in] - 1.0;
  const double e2 = w[wrap(in - step, n)] - 1.0;
  if (e1 > 0.0 && e2 > e1) {
    const double r = std::pow(e1 / e2, 1.0 / p);
    if (r < 1.0) return std::clamp(r * h / (1.0 - r), 0.0, h);
  }
  return 0.5 * h;
}

// Endpoint of a lift-off run located as the centroid of the concentrated
// contact force, i.e. of the EL residual in excess of its bulk value (1 + lambda)
// on contact nodes. `edge` is the lift-off node at the end, `step` points out.
// Returns the signed offset from `edge` in units of t.
double contact_offset(const PeriodicField& w, const PeriodicField& res, const std::vector<char>& act, double lambda,
                      double scale, int edge, int step, double p) {
  const int n = w.size();
  const double h = w.grid().spacing();
  double m0 = 0.0, m1 = 0.0;
  for (int d = -4; d <= 5; ++d) {
    const int j = wrap(edge + step * d, n);
    const double r = res[j] - (act[j] ? 1.0 + lambda : 0.0);
    m0 += r;
    m1 += r * d * h;
  }
  if (m0 > 1e-3 * scale) {
    const double off = m1 / m0;
    if (off > -h && off < 3.0 * h) return off;
  }
  return contact_fit(w, edge, step, p);
}

}  // namespace

std::vector<Interval> extract_structure(const MinimizerReport& report) {
  const PeriodicField& w = report.w;
  const int n = w.size();
  const double h = w.grid().spacing();
  std::vector<char> act(static_cast<std::size_t>(n), 0);
  for (int j : report.active) act[j] = 1;
  std::vector<Interval> out;
  if (report.active.empty()) throw Error(ErrorCode::EmptyActiveSet, "no contact nodes: the lift-off set is the whole circle");

  // Lift-off runs whose height is negligible against the tallest fold are
  // stencil ripples next to a contact point, not folds.
  const double top = w.max() - 1.0;
  const int start = report.active.front();
  for (int off = 1; off <= n; ++off) {
    const int j = (start + off) % n;
    if (act[j] || !act[wrap(j - 1, n)]) continue;
    int len = 0;
    double peak = 0.0;
    while (!act[(j + len) % n]) peak = std::max(peak, w[(j + len++) % n] - 1.0);
    if (peak <= 1e-4 * top)
      for (int i = 0; i < len; ++i) act[(j + i) % n] = 1;
  }

  const PeriodicField d2 = deriv(w, 2);
  const PeriodicField res = el_residual(w, report.lambda);
  for (int off = 1; off <= n; ++off) {
    const int j = (start + off) % n;
    const int prev = wrap(j - 1, n);
    if (act[j] || !act[prev]) continue;
    int len = 0;
    while (!act[(j + len) % n]) ++len;
    const int first = j, last = (j + len - 1) % n;
    const double k = 0.5 * (d2[prev] + d2[(last + 1) % n]);
    const double p = std::abs(report.k) <= 1e-2 ? 3.0 : 2.0;
    const double dl = contact_offset(w, res, act, report.lambda, report.residuals.scale, first, -1, p);
    const double dr = contact_offset(w, res, act, report.lambda, report.residuals.scale, last, 1, p);
    const double width = (len - 1) * h + dl + dr;
    double center = w.grid().node(first) - dl + 0.5 * width;
    center -= kTwoPi * std::floor(center / kTwoPi);
    out.push_back({center, 0.5 * width, k, first, last});
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.center < b.center; });
  return out;
}

namespace {

// w'' at a fold endpoint from the lift-off side: least-squares quadratic in t
// through D2 w at 4..8 nodes inside, evaluated at the endpoint. The nodes next
// to the endpoint are skipped because the stencil straddles the contact kink.
double inside_second_derivative(const PeriodicField& w, const PeriodicField& d2, const Interval& iv, int side) {
  const int n = w.size();
  const double te = iv.center + side * iv.half_width;
  const int edge = side < 0 ? iv.first_node : iv.last_node;
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (int d = 4; d <= 8; ++d) {
    const int j = wrap(edge - side * d, n);
    const double x = std::remainder(w.grid().node(j) - te, kTwoPi);
    const Eigen::Vector3d row(1.0, x, x * x);
    ata += row * row.transpose();
    atb += row * d2[j];
  }
  return ata.ldlt().solve(atb)[0];
}

}  // namespace

ConditionReport check_necessary_conditions(const MinimizerReport& report, const ConditionTolerances& tol) {
  if (report.residuals.obstacle > 1e-10 || std::abs(report.constraint) > 1e-8 * kTwoPi)
    throw Error(ErrorCode::Infeasible, "report is not feasible");
  if (report.degenerate_lambda)
    throw Error(ErrorCode::DegenerateLambda, "lambda is too close to 0 or -1");
  ConditionReport cr;
  cr.branch = report.branch();
  const double a = report.alpha();
  const double k = std::max(0.0, report.k);
  if (cr.branch == Branch::Trig && std::abs(a - 1.0) < 1e-12)
    throw Error(ErrorCode::AlphaExcluded, "alpha = 1 on trig branch");
  const auto roots = invert_g(a, k, cr.branch);
  const PeriodicField& w = report.w;
  const PeriodicField d2 = deriv(w, 2);
  const int n = w.size();
  cr.passed = true;
  for (const Interval& iv : report.intervals) {
    IntervalCheck c;
    c.z = iv.half_width;
    c.root_distance = std::numeric_limits<double>::infinity();
    for (double r : roots)
      if (std::abs(r - c.z) < c.root_distance) {
        c.root_distance = std::abs(r - c.z);
        c.nearest_root = r;
      }
    c.root_ok = c.root_distance <= tol.root;
    if (c.root_ok) {
      try {
        for (int off = 0;; ++off) {
          const int j = (iv.first_node + off) % n;
          const double s = std::remainder(w.grid().node(j) - iv.center, kTwoPi);
          if (std::abs(s) <= c.nearest_root)
            c.profile_gap = std::max(c.profile_gap, std::abs(w[j] - profile_eval(report.lambda, c.nearest_root, s)));
          if (j == iv.last_node) break;
        }
        c.gap_ok = c.profile_gap <= tol.gap;
      } catch (const Error&) {
        c.gap_ok = false;
      }
    }
    c.c2_jump = std::max(std::abs(inside_second_derivative(w, d2, iv, -1) - k),
                         std::abs(inside_second_derivative(w, d2, iv, 1) - k));
    c.c2_ok = c.c2_jump <= tol.c2;
    cr.passed = cr.passed && c.root_ok && c.gap_ok && c.c2_ok;
    cr.intervals.push_back(c);
  }
  return cr;
}

MinimizerReport minimize(const SolverConfig& cfg, const PeriodicField& init) {
  cfg.validate();
  require_feasible_input(init);
  if (init.size() != cfg.n) throw Error(ErrorCode::IncompatibleGrids, "initial guess grid does not match n");
  const int n = cfg.n;
  const double ctol = 1e-3 * cfg.outer_tol;
  const double stat_tol = 100.0 * cfg.inner_tol;
  const double release_tol = 100.0 * cfg.inner_tol;
  std::vector<double> w0(init.values().begin(), init.values().end());
  for (double& x : w0) x = std::max(1.0, x);

  // outer counts multiplier updates: one per augmented-Lagrangian round and one
  // per bordered Newton solve of a grid level (which solves for lambda jointly).
  int outer = 0, newton = 0;
  std::vector<double> w;
  double lambda = 0.0;
  bool done = false;

  // Warm start: polish directly on the target grid.
  if (!is_flat(w0)) {
    w = w0;
    lambda = lsq_lambda(w, kTwoPi / n, cfg.active_tol);
    const Level L(n);
    const PdasOutcome p = pdas(L, w, lambda, stat_tol, ctol, std::min(20, cfg.max_newton), release_tol);
    newton += p.iterations;
    if (p.converged) {
      outer = 1;
      done = true;
    }
  }

  if (!done) {
    int nc = n;
    while (nc / 2 >= cfg.coarse_n && nc % 2 == 0) nc /= 2;
    const int r = n / nc;
    auto restrict_init = [&] {
      w.assign(static_cast<std::size_t>(nc), 1.0);
      for (int j = 0; j < nc; ++j) w[j] = w0[static_cast<std::size_t>(j) * r];
    };
    restrict_init();
    bool level_ok = false;
    for (int attempt = 0; attempt < 4 && !level_ok; ++attempt) {
      lambda = 0.0;
      if (is_flat(w)) w = perturbation(nc, cfg.seed + static_cast<std::uint64_t>(attempt));
      const AlOutcome al = augmented_lagrangian(nc, w, lambda, cfg, 1e-6, 1e-5);
      outer += al.outer;
      if (is_flat(w)) continue;
      const Level L(nc);
      const PdasOutcome p = pdas(L, w, lambda, stat_tol, ctol, cfg.max_newton, release_tol);
      newton += p.iterations;
      ++outer;
      level_ok = p.converged;
      if (!level_ok) w = perturbation(nc, cfg.seed + 101 + static_cast<std::uint64_t>(attempt));
    }
    if (!level_ok) throw Error(ErrorCode::NoConvergence, "coarse level did not converge");
    for (int m = nc * 2; m <= n; m *= 2) {
      w = prolongate(w);
      const Level L(m);
      const PdasOutcome p = pdas(L, w, lambda, stat_tol, ctol, cfg.max_newton, release_tol);
      newton += p.iterations;
      ++outer;
      if (!p.converged) throw Error(ErrorCode::NoConvergence, "active-set iteration failed at n = " + std::to_string(m));
    }
  }

  MinimizerReport rep = analyze(PeriodicField(PeriodicGrid::make(n), std::move(w)), cfg.active_tol);
  rep.outer_iterations = outer;
  rep.newton_iterations = newton;
  rep.seed = cfg.seed;
  rep.converged = rep.residuals.feasibility <= cfg.outer_tol && rep.residuals.obstacle <= 1e-10;
  if (!rep.converged) throw Error(ErrorCode::NoConvergence, "final iterate is not feasible");
  return rep;
}

MinimizerReport minimize(const SolverConfig& cfg, Preset preset) {
  cfg.validate();
  return minimize(cfg, initial_guess(preset, PeriodicGrid::make(cfg.n), cfg.seed));
}

int worker_count(int requested) {
  int cap = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("DCONE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) cap = v;
  }
  return requested > 0 ? std::min(requested, cap) : cap;
}

RestartResult minimize_restarts(const SolverConfig& cfg, Preset preset, int restarts, int threads) {
  cfg.validate();
  if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be >= 1");
  std::vector<std::optional<MinimizerReport>> slots(static_cast<std::size_t>(restarts));
  std::vector<std::string> errors(static_cast<std::size_t>(restarts));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < restarts; i = next++) {
      SolverConfig c = cfg;
      c.seed = cfg.seed + static_cast<std::uint64_t>(i);
      try {
        slots[i] = minimize(c, preset);
      } catch (const Error& e) {
        errors[i] = "seed " + std::to_string(c.seed) + ": " + e.what();
      }
    }
  };
  const int nt = std::min(worker_count(threads), restarts);
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  RestartResult out;
  for (int i = 0; i < restarts; ++i) {
    if (slots[i]) out.runs.push_back(std::move(*slots[i]));
    else out.failures.push_back(errors[i]);
  }
  if (out.runs.empty()) throw Error(ErrorCode::NoConvergence, "all restarts failed: " + out.failures.front());
  out.best = *std::min_element(out.runs.begin(), out.runs.end(), [](const auto& a, const auto& b) {
    return a.energy < b.energy || (a.energy == b.energy && a.seed < b.seed);
  });
  return out;
}

}  // namespace dcone
