// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dcone/closure.hpp"
#include "dcone/energy.hpp"
#include "dcone/error.hpp"
#include "dcone/folds.hpp"
#include "dcone/gamma_check.hpp"
#include "dcone/obstacle.hpp"
#include "dcone/recovery.hpp"

using namespace dcone;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Guards a criterion body so one exception does not hide the others.
void guarded(std::vector<int> ids, const std::string& what, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    for (int id : ids) report(id, false, what, std::string("threw: ") + e.what());
  }
}

PeriodicField random_trig(const PeriodicGrid& g, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> a(degree + 1), b(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    a[m] = nd(rng);
    b[m] = nd(rng);
  }
  return PeriodicField::sample(g, [&](double t) {
    double s = 0.0;
    for (int m = 0; m <= degree; ++m) s += a[m] * std::cos(m * t) + b[m] * std::sin(m * t);
    return s;
  });
}

void closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  const PeriodicField w = PeriodicField::sample(make_grid(2048), [](double t) { return 1.0 + std::cos(2 * t); });
  const double e = rel(energy(w), 11.0 * kPi);
  const double c = rel(constraint(PeriodicField::constant(make_grid(256), 1.0)), kTwoPi);
  const double g = rel(g_alpha(2.5, kPi).value, -1.0);
  const double gt = rel(g_tilde_alpha(2.5, kPi).value, -1.0);
  const int n = 4096;
  Curve3 eq;
  eq.h = 0.1;
  for (int j = 0; j <= n; ++j) {
    const double s = kTwoPi * j / n;
    eq.x.emplace_back(std::cos(s), std::sin(s), 0.0);
    eq.dx.emplace_back(-std::sin(s), std::cos(s), 0.0);
  }
  const double b = bending_energy(eq).energy;
  const double secs = seconds_since(t0);
  const double worst = std::max({e, c, g, gt});
  report(1, worst <= 1e-8 && std::abs(b) <= 1e-8 && secs < 1.0, "closed-form evaluation suite",
         fmt("energy %.1e, constraint %.1e, g %.1e, g~ %.1e rel; equator bending %.1e; %.3f s", e, c, g, gt, b, secs));
}

void gradient_consistency() {
  double worst = 0.0;
  for (int n : {512, 2048}) {
    std::mt19937_64 rng(42 + n);
    const PeriodicGrid grid = make_grid(n);
    const PeriodicField w = random_trig(grid, 5, rng);
    const Gradients g = gradients(w);
    const double eps = 1e-5;
    for (int dir = 0; dir < 20; ++dir) {
      const PeriodicField d = random_trig(grid, 12, rng);
      const PeriodicField wp = w + eps * d, wm = w + (-eps) * d;
      const double fd_e = (energy(wp) - energy(wm)) / (2 * eps);
      const double fd_c = (constraint(wp) - constraint(wm)) / (2 * eps);
      worst = std::max(worst, std::abs(inner(g.energy, d) - fd_e) / std::abs(fd_e));
      worst = std::max(worst, std::abs(inner(g.constraint, d) - fd_c) / std::abs(fd_c));
    }
  }
  report(2, worst <= 1e-6, "gradients match central differences", fmt("worst rel err %.2e over 2x20 directions", worst));
}

void solver_feasibility() {
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg;
  cfg.n = 1024;
  const RestartResult rr = minimize_restarts(cfg, Preset::Random, 8, 0);
  double min_w = 1e300, feas = 0.0, stat = 0.0, active = 1e300;
  for (const MinimizerReport& r : rr.runs) {
    min_w = std::min(min_w, r.w.min());
    feas = std::max(feas, std::abs(constraint(r.w)));
    stat = std::max(stat, r.residuals.stationarity);
    active = std::min(active, r.residuals.active_min);
  }
  const double secs = seconds_since(t0);
  const bool ok = rr.failures.empty() && rr.runs.size() == 8 && min_w >= 1.0 - 1e-10 && feas <= 1e-8 * kTwoPi &&
                  stat <= 1e-4 && active >= 0.0 && secs <= 300.0;
  report(3, ok, "8 random restarts feasible and stationary",
         fmt("%zu runs, %zu failures, min w %.12f, |C| %.1e, EL %.1e, active min %.1e, %.1f s", rr.runs.size(),
             rr.failures.size(), min_w, feas, stat, active, secs));
}

void cross_validation() {
  const int n = 2048;
  SolverConfig cfg;
  cfg.n = n;
  MinimizerReport best = minimize(cfg, Preset::Bump);
  const RestartResult rr = minimize_restarts(cfg, Preset::Random, 8, 0);
  if (rr.best.energy < best.energy) best = rr.best;
  const SingleFoldSolution s = solve_single_fold(make_grid(n));
  const double e = rel(best.energy, s.candidate.energy);
  const double h = kTwoPi / n;
  double endpoint = 1e300, root = 1e300;
  if (best.intervals.size() == 1) {
    const Interval& iv = best.intervals[0];
    // fold position is free
    endpoint = std::abs(iv.half_width - s.z) / h;
    const std::vector<double> roots = invert_g(alpha_for_lambda(best.lambda), best.k, branch_for_lambda(best.lambda));
    for (double z : roots) root = std::min(root, std::abs(z - iv.half_width));
  }
  report(4, best.intervals.size() == 1 && e <= 1e-3 && endpoint <= 2.0 && root <= 1e-3,
         "numeric minimizer matches the single-fold solution",
         fmt("%zu fold(s), energy rel %.2e, endpoint offset %.2f cells, dist to g^-1(k) %.2e", best.intervals.size(), e,
             endpoint, root));
}

void fold_angle() {
  const SingleFoldSolution s = solve_single_fold(make_grid(2048));
  const double a = s.opening_angle_deg();
  report(5, a >= 130.0 && a <= 150.0 && std::abs(a - kSingleFoldAngleDeg) <= 1e-8, "single-fold opening angle",
         fmt("2z = %.9f deg (reference %.9f)", a, kSingleFoldAngleDeg));
}

void recovery_checks() {
  const auto t0 = std::chrono::steady_clock::now();
  const PeriodicField w = solve_single_fold(make_grid(4096)).candidate.w;
  const GammaTable t = gamma_check(w, default_h_list(), worker_count(0));
  const double secs = seconds_since(t0);

  bool decreasing = true;
  std::string errs;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i > 0 && !(t.rows[i].rel_err < t.rows[i - 1].rel_err)) decreasing = false;
    errs += fmt("%s%.4f", i ? " " : "", t.rows[i].rel_err);
  }
  const double last = t.rows.back().rel_err;
  report(6, decreasing && last <= 0.10 && secs <= 600.0, "Gamma-limit error decreases, <= 10% at h = 0.025",
         fmt("rel err %s; %.1f s", errs.c_str(), secs));

  const bool gap = std::abs(t.slopes.gap - 4.0) <= 0.5;
  const bool a = std::abs(t.slopes.a_norm - 3.0) <= 0.5;
  const bool det = std::abs(t.slopes.det - 1.0) <= 0.3;
  report(7, gap && a && det, "scaling exponents",
         fmt("gap %.3f (%s, 4+-0.5), |a| %.3f (%s, 3+-0.5), det %.3f (%s, 1+-0.3)", t.slopes.gap, gap ? "ok" : "out",
             t.slopes.a_norm, a ? "ok" : "out", t.slopes.det, det ? "ok" : "out"));

  double ortho = 0.0, modulus = 0.0, speed = 0.0, jac = 0.0, gz_margin = 1e300;
  for (const GammaRow& r : t.rows) {
    ortho = std::max(ortho, r.orthonormality_defect);
    modulus = std::max(modulus, r.modulus_defect);
    speed = std::max(speed, r.speed_defect);
    jac = std::max(jac, r.jacobian_fd_error);
    gz_margin = std::min(gz_margin, r.min_gz - r.h);
  }
  report(8, ortho <= 1e-9 && modulus <= 1e-9 && speed <= 1e-6 && gz_margin >= 0.0 && jac <= 1e-5,
         "structural integrity of recovery curves",
         fmt("frame drift %.1e, ||g|-1| %.1e, ||g'|-1| %.1e, min(g.ez - h) %.2e, Jacobian FD rel %.1e", ortho, modulus,
             speed, gz_margin, jac));
}

void mollification() {
  const PeriodicField w = solve_single_fold(make_grid(2048)).candidate.w;
  bool ok = true;
  double prev = 1e300;
  std::string detail;
  for (double eps : {0.1, 0.05, 0.025}) {
    const MollifyResult m = mollify_admissible(w, eps);
    const double c = std::abs(constraint(m.w));
    const double lam = std::abs(m.lambda);
    ok = ok && m.w.min() >= 1.0 && c <= 1e-10 && lam < prev;
    prev = lam;
    detail += fmt("%seps %.3f: min %.3e above 1, |C| %.1e, |lambda| %.3e", detail.empty() ? "" : "; ", eps,
                  m.w.min() - 1.0, c, lam);
  }
  report(9, ok, "mollified profiles admissible, |lambda_eps| decreasing", detail);
}

void plot_stability() {
  bool ok = true;
  std::string detail;
  for (Branch b : {Branch::Trig, Branch::Hyperbolic}) {
    const PlotTable coarse = plot_g(7.0, b, 2000);
    const PlotTable fine = plot_g(7.0, b, 4000);
    ok = ok && coarse.poles == fine.poles && coarse.branches == fine.branches;
    detail += fmt("%s%s poles %d/%d branches %d/%d", detail.empty() ? "" : "; ", std::string(to_string(b)).c_str(),
                  coarse.poles, fine.poles, coarse.branches, fine.branches);
  }
  report(10, ok, "plot-g tables for alpha = 7 stable under 2x sampling", detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  guarded({1}, "closed-form evaluation suite", closed_forms);
  guarded({2}, "gradients match central differences", gradient_consistency);
  guarded({3}, "8 random restarts feasible and stationary", solver_feasibility);
  guarded({4}, "numeric minimizer matches the single-fold solution", cross_validation);
  guarded({5}, "single-fold opening angle", fold_angle);
  guarded({6, 7, 8}, "recovery checks", recovery_checks);
  guarded({9}, "mollification", mollification);
  guarded({10}, "plot-g stability", plot_stability);
  std::printf("%d criteria failed, %.1f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
