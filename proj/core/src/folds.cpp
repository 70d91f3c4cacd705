#include "dcone/folds.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

#include "dcone/energy.hpp"
#include "dcone/error.hpp"

namespace dcone {

std::string_view to_string(Branch b) noexcept {
  return b == Branch::Trig ? "trig" : "hyperbolic";
}

Branch branch_from_string(std::string_view s) {
  if (s == "trig") return Branch::Trig;
  if (s == "hyperbolic" || s == "hyp") return Branch::Hyperbolic;
  throw Error(ErrorCode::InvalidArgument, "unknown branch '" + std::string(s) + "'");
}

Branch branch_for_lambda(double lambda) noexcept {
  return lambda >= -1.0 ? Branch::Trig : Branch::Hyperbolic;
}

double alpha_for_lambda(double lambda) noexcept { return std::sqrt(std::abs(1.0 + lambda)); }

double lambda_for(double alpha, Branch b) noexcept {
  return b == Branch::Trig ? alpha * alpha - 1.0 : -1.0 - alpha * alpha;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_domain(double alpha, double z) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::OutOfDomain, "alpha must be positive");
  if (!(z > 0.0) || z > kPi * (1.0 + 1e-15))
    throw Error(ErrorCode::OutOfDomain, "z must lie in (0, pi], got " + std::to_string(z));
}

GValue g_trig_direct(double a, double z) {
  const double s = std::sin(z), c = std::cos(z);
  const double sa = std::sin(a * z), ca = std::cos(a * z);
  const double num = a * a * s * ca - a * sa * c;
  const double den = s * ca - a * sa * c;
  if (std::abs(den) <= 1e-14 * (a * a + a)) {
    const double sign = (num >= 0.0) == (den >= 0.0) ? -1.0 : 1.0;
    return {sign * kInf, true};
  }
  return {-num / den, false};
}

// Point where numerator and denominator of g_alpha vanish together, if z is
// within 1e-8 of one.
std::optional<double> removable_point(double a, double z, double window = 1e-8) {
  const double r = std::round(a);
  if (std::abs(a - r) > 1e-8 || r < 1.0) return std::nullopt;
  if (std::abs(z - kPi) <= window) return kPi;
  const bool odd = std::fmod(r, 2.0) != 0.0;
  if (odd && std::abs(z - kPi / 2) <= window) return kPi / 2;
  return std::nullopt;
}

// One-sided limit at z0 from the left by Neville extrapolation in the offset.
GValue left_limit(double a, double z0) {
  constexpr int m = 7;
  double e[m], v[m];
  for (int j = 0; j < m; ++j) {
    e[j] = 0.1 * std::ldexp(1.0, -j);
    const GValue g = g_trig_direct(a, z0 - e[j]);
    if (g.pole) return g;
    v[j] = g.value;
  }
  if (std::abs(v[m - 1]) > 2.5 * std::abs(v[m - 2]) && std::abs(v[m - 2]) > 2.5 * std::abs(v[m - 3]) &&
      std::abs(v[m - 1]) > 1e3)
    return {std::copysign(kInf, v[m - 1]), true};
  double p[m];
  std::copy(v, v + m, p);
  for (int lvl = 1; lvl < m; ++lvl)
    for (int i = 0; i + lvl < m; ++i)
      p[i] = (e[i + lvl] * p[i] - e[i] * p[i + 1]) / (e[i + lvl] - e[i]);
  return {p[0], false};
}

}  // namespace

GValue g_alpha(double alpha, double z) {
  check_domain(alpha, z);
  if (auto z0 = removable_point(alpha, z)) return left_limit(alpha, *z0);
  return g_trig_direct(alpha, z);
}

GValue g_tilde_alpha(double alpha, double z) {
  check_domain(alpha, z);
  const double s = std::sin(z), c = std::cos(z), t = std::tanh(alpha * z);
  const double num = alpha * alpha * s - alpha * t * c;
  const double den = s + alpha * t * c;
  if (std::abs(den) <= 1e-14 * (alpha * alpha + alpha)) {
    const double sign = (num >= 0.0) == (den >= 0.0) ? 1.0 : -1.0;
    return {sign * kInf, true};
  }
  return {num / den, false};
}

GValue g_eval(Branch b, double alpha, double z) {
  return b == Branch::Trig ? g_alpha(alpha, z) : g_tilde_alpha(alpha, z);
}

double g_denominator(Branch b, double a, double z) {
  if (b == Branch::Trig) return std::sin(z) * std::cos(a * z) - a * std::sin(a * z) * std::cos(z);
  return std::sin(z) + a * std::tanh(a * z) * std::cos(z);
}

double g_root_function(Branch b, double a, double k, double z) {
  const double s = std::sin(z), c = std::cos(z);
  if (b == Branch::Trig) {
    const double sa = std::sin(a * z), ca = std::cos(a * z);
    return (a * a * s * ca - a * sa * c) + k * (s * ca - a * sa * c);
  }
  const double t = std::tanh(a * z);
  return (a * a * s - a * t * c) - k * (s + a * t * c);
}

std::vector<double> invert_g(double alpha, double k, Branch b, int samples) {
  if (b == Branch::Trig && (alpha == 1.0 || alpha <= 0.0))
    throw Error(ErrorCode::AlphaExcluded, "trig branch requires alpha in (0, inf) \\ {1}");
  if (!(alpha > 0.0)) throw Error(ErrorCode::AlphaExcluded, "alpha must be positive");
  if (samples < 8) throw Error(ErrorCode::InvalidArgument, "too few bracketing samples");

  const double tol = 1e-10 * std::max(1.0, std::abs(k));
  // Sign changes of H right next to a removable 0/0 point are rounding noise;
  // the point itself is decided by its limit below.
  auto accept = [&](double z) {
    if (b == Branch::Trig && removable_point(alpha, z, 1e-5)) return false;
    const GValue g = g_eval(b, alpha, z);
    return !g.pole && std::abs(g.value - k) <= tol;
  };
  auto H = [&](double z) { return g_root_function(b, alpha, k, z); };

  std::vector<double> roots;
  double za = kPi / samples, ha = H(za);
  if (ha == 0.0 && accept(za)) roots.push_back(za);
  for (int i = 2; i <= samples; ++i) {
    const double zb = kPi * i / samples;
    const double hb = H(zb);
    if (hb == 0.0) {
      if (accept(zb)) roots.push_back(zb);
    } else if (ha != 0.0 && (ha < 0.0) != (hb < 0.0)) {
      double lo = za, hi = zb, hlo = ha;
      for (int it = 0; it < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double hm = H(mid);
        if (hm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((hm < 0.0) == (hlo < 0.0)) {
          lo = mid;
          hlo = hm;
        } else {
          hi = mid;
        }
      }
      const double z = std::abs(H(lo)) <= std::abs(H(hi)) ? lo : hi;
      if (accept(z)) roots.push_back(z);
    }
    za = zb;
    ha = hb;
  }
  // z = pi (and pi / 2 for odd integer alpha) can be a root that H only
  // touches, e.g. the collapse g(pi) = -1.
  for (double z0 : {kPi / 2, kPi}) {
    if (z0 != kPi && !(b == Branch::Trig && removable_point(alpha, z0))) continue;
    const GValue g0 = g_eval(b, alpha, z0);
    if (!g0.pole && std::abs(g0.value - k) <= tol) roots.push_back(z0);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12; }),
              roots.end());
  return roots;
}

namespace {

// cos(x + m pi / 2) without rounding in the shift.
double cos_shift(double x, int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return std::cos(x);
    case 1: return -std::sin(x);
    case 2: return -std::cos(x);
    default: return std::sin(x);
  }
}

void check_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda == 0.0 || lambda == -1.0)
    throw Error(ErrorCode::InvalidArgument, "lambda must be finite and not in {0, -1}");
}

}  // namespace

double profile_eval(double lambda, double z, double s, int order) {
  check_lambda(lambda);
  const double a = alpha_for_lambda(lambda);
  const double am = std::pow(a, order);
  if (branch_for_lambda(lambda) == Branch::Trig) {
    const double den = std::sin(z) * std::cos(a * z) - a * std::sin(a * z) * std::cos(z);
    if (std::abs(den) <= 1e-12 * (1.0 + a))
      throw Error(ErrorCode::DegenerateDenominator, "fold profile denominator vanishes");
    const double num = std::sin(z) * am * cos_shift(a * s, order) - a * std::sin(a * z) * cos_shift(s, order);
    return num / den;
  }
  const double t = std::tanh(a * z);
  const double den = std::sin(z) + a * t * std::cos(z);
  if (std::abs(den) <= 1e-12 * (1.0 + a))
    throw Error(ErrorCode::DegenerateDenominator, "fold profile denominator vanishes");
  // cosh(a s) / cosh(a z) and sinh(a s) / cosh(a z) in scaled form.
  const double as = std::abs(s);
  const double scale = std::exp(a * (as - z)) / (1.0 + std::exp(-2.0 * a * z));
  const double ratio = (order % 2 == 0) ? scale * (1.0 + std::exp(-2.0 * a * as))
                                        : std::copysign(scale * (1.0 - std::exp(-2.0 * a * as)), s);
  const double num = std::sin(z) * am * ratio + a * t * cos_shift(s, order);
  return num / den;
}

FoldProfile fold_profile(double lambda, const Fold& fold, const PeriodicGrid& grid) {
  FoldProfile out;
  for (int j = 0; j < grid.size(); ++j) {
    const double s = std::remainder(grid.node(j) - fold.center, kTwoPi);
    if (std::abs(s) <= fold.half_width) {
      out.nodes.push_back(j);
      out.offsets.push_back(s);
      out.values.push_back(profile_eval(lambda, fold.half_width, s));
    }
  }
  return out;
}

double profile_min(double lambda, double z, int samples) {
  double m = 1.0;
  for (int i = 0; i < samples; ++i) {
    const double s = -z + 2.0 * z * i / (samples - 1);
    m = std::min(m, profile_eval(lambda, z, s));
  }
  return m;
}

namespace {

template <class F>
double fold_integral(double lambda, double z, F&& integrand) {
  using boost::math::quadrature::gauss;
  const double a = alpha_for_lambda(lambda);
  const int panels = std::max(4, static_cast<int>(std::ceil(4.0 * (1.0 + a) * z)));
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = -z + 2.0 * z * p / panels;
    const double hi = -z + 2.0 * z * (p + 1) / panels;
    sum += gauss<double, 30>::integrate([&](double s) { return integrand(s); }, lo, hi);
  }
  return sum;
}

double covered_length(const FoldSpec& spec) {
  double len = 0.0;
  for (const auto& f : spec.folds) len += 2.0 * f.half_width;
  return len;
}

}  // namespace

double exact_energy(const FoldSpec& spec) {
  double total = kTwoPi - covered_length(spec);
  for (const auto& f : spec.folds) {
    total += fold_integral(spec.lambda, f.half_width, [&](double s) {
      const double r = profile_eval(spec.lambda, f.half_width, s, 2) + profile_eval(spec.lambda, f.half_width, s);
      return r * r;
    });
  }
  return total;
}

double exact_constraint(const FoldSpec& spec) {
  double total = kTwoPi - covered_length(spec);
  for (const auto& f : spec.folds) {
    total += fold_integral(spec.lambda, f.half_width, [&](double s) {
      const double w = profile_eval(spec.lambda, f.half_width, s);
      const double d = profile_eval(spec.lambda, f.half_width, s, 1);
      return w * w - d * d;
    });
  }
  return total;
}

void validate(const FoldSpec& spec) {
  if (!std::isfinite(spec.k)) throw Error(ErrorCode::InvalidArgument, "k must be finite");
  if (spec.folds.empty()) return;
  check_lambda(spec.lambda);
  for (const auto& f : spec.folds) {
    if (!(f.half_width > 0.0) || f.half_width > kPi)
      throw Error(ErrorCode::OutOfDomain, "fold half-width must lie in (0, pi]");
    if (!std::isfinite(f.center)) throw Error(ErrorCode::InvalidArgument, "fold center must be finite");
  }
  std::vector<Fold> sorted = spec.folds;
  for (auto& f : sorted) f.center = f.center - kTwoPi * std::floor(f.center / kTwoPi);
  std::sort(sorted.begin(), sorted.end(), [](const Fold& a, const Fold& b) { return a.center < b.center; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Fold& a = sorted[i];
    const Fold& b = sorted[(i + 1) % sorted.size()];
    double gap = b.center - a.center;
    if (gap <= 0.0) gap += kTwoPi;
    if (sorted.size() == 1) gap = kTwoPi;
    if (gap < a.half_width + b.half_width - 1e-12)
      throw Error(ErrorCode::Overlap, "fold intervals overlap");
  }
}

FoldCandidate assemble_candidate(const FoldSpec& spec, const PeriodicGrid& grid) {
  validate(spec);
  std::vector<double> w(static_cast<std::size_t>(grid.size()), 1.0);
  FoldCandidate out;
  out.spec = spec;
  double min_w = 1.0;
  for (const auto& f : spec.folds) {
    const FoldProfile p = fold_profile(spec.lambda, f, grid);
    for (std::size_t i = 0; i < p.nodes.size(); ++i) w[p.nodes[i]] = p.values[i];
    min_w = std::min(min_w, profile_min(spec.lambda, f.half_width));
    for (double v : p.values) min_w = std::min(min_w, v);
    for (double side : {-1.0, 1.0})
      out.c2_jumps.push_back(std::abs(profile_eval(spec.lambda, f.half_width, side * f.half_width, 2) - spec.k));
  }
  if (min_w < 1.0 - 1e-12)
    throw Error(ErrorCode::ObstacleViolated, "fold profile dips below the obstacle (min " + std::to_string(min_w) + ")");
  out.w = PeriodicField(grid, std::move(w));
  out.min_w = min_w;
  out.energy = exact_energy(spec);
  out.constraint_residual = exact_constraint(spec);
  out.discrete_energy = energy(out.w);
  out.discrete_constraint = constraint(out.w);
  out.feasible = !spec.folds.empty() && std::abs(out.constraint_residual) <= 1e-8;
  return out;
}

namespace {

struct BranchPoint {
  double alpha = 0.0;
  std::optional<double> z;
  double c = 0.0;
};

std::optional<double> smallest_admissible_root(double alpha, Branch b) {
  const double lambda = lambda_for(alpha, b);
  for (double z : invert_g(alpha, 0.0, b, 4000)) {
    try {
      if (profile_min(lambda, z, 401) >= 1.0 - 1e-12) return z;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

BranchPoint branch_point(double alpha, Branch b) {
  BranchPoint p{alpha, smallest_admissible_root(alpha, b)};
  if (p.z) p.c = exact_constraint({lambda_for(alpha, b), {{kPi, *p.z}}, 0.0});
  return p;
}

std::vector<SingleFoldSolution> solve_on_branch(Branch b, const PeriodicGrid& grid) {
  std::vector<SingleFoldSolution> found;
  std::vector<double> alphas;
  for (double a = 0.05; a <= 10.0 + 1e-12; a += 0.01)
    if (b == Branch::Hyperbolic || std::abs(a - 1.0) > 5e-3) alphas.push_back(a);
  BranchPoint prev = branch_point(alphas.front(), b);
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    BranchPoint cur = branch_point(alphas[i], b);
    if (prev.z && cur.z && std::abs(*prev.z - *cur.z) < 0.1 && (prev.c < 0.0) != (cur.c < 0.0)) {
      BranchPoint lo = prev, hi = cur;
      bool ok = true;
      for (int it = 0; it < 80 && hi.alpha - lo.alpha > 1e-15 * hi.alpha; ++it) {
        BranchPoint mid = branch_point(0.5 * (lo.alpha + hi.alpha), b);
        if (!mid.z) {
          ok = false;
          break;
        }
        if ((mid.c < 0.0) == (lo.c < 0.0)) lo = mid; else hi = mid;
      }
      const BranchPoint& best = std::abs(lo.c) <= std::abs(hi.c) ? lo : hi;
      if (ok && best.z && std::abs(best.c) <= 1e-10) {
        const double lambda = lambda_for(best.alpha, b);
        try {
          FoldCandidate cand = assemble_candidate({lambda, {{kPi, *best.z}}, 0.0}, grid);
          found.push_back({lambda, best.alpha, *best.z, b, std::move(cand)});
        } catch (const Error&) {
        }
      }
    }
    prev = cur;
  }
  return found;
}

}  // namespace

SingleFoldSolution solve_single_fold(const PeriodicGrid& grid) {
  auto found = solve_on_branch(Branch::Trig, grid);
  if (found.empty()) found = solve_on_branch(Branch::Hyperbolic, grid);
  if (found.empty()) throw Error(ErrorCode::NoRoot, "no single-fold configuration satisfies the constraint");
  return *std::min_element(found.begin(), found.end(), [](const auto& x, const auto& y) {
    return x.candidate.energy < y.candidate.energy;
  });
}

PlotTable plot_g(double alpha, Branch b, int samples) {
  if (b == Branch::Trig && alpha == 1.0)
    throw Error(ErrorCode::AlphaExcluded, "trig branch requires alpha != 1");
  PlotTable t;
  t.rows.reserve(static_cast<std::size_t>(samples));
  double prev_den = g_denominator(b, alpha, kPi / samples);
  for (int i = 1; i <= samples; ++i) {
    const double z = kPi * i / samples;
    const GValue g = g_eval(b, alpha, z);
    const double den = g_denominator(b, alpha, z);
    bool pole = g.pole;
    const bool removable = b == Branch::Trig && removable_point(alpha, z).has_value();
    if (!pole && !removable && i > 1 && den != 0.0 && prev_den != 0.0 && (den < 0.0) != (prev_den < 0.0))
      pole = true;
    if (den != 0.0 && !removable) prev_den = den;
    t.rows.push_back({z, g.value, pole});
    if (pole) ++t.poles;
  }
  t.branches = t.poles + 1 - (t.rows.back().pole && std::isinf(t.rows.back().g) ? 1 : 0);
  return t;
}

std::vector<SweepRow> sweep(const std::vector<double>& alphas, const std::vector<double>& ks, Branch b,
                            int samples) {
  std::vector<SweepRow> rows;
  for (double a : alphas) {
    for (double k : ks) {
      if (b == Branch::Trig && a == 1.0) {
        rows.push_back({a, k, b, -1, std::nan(""), std::nullopt, false, true});
        continue;
      }
      const auto roots = invert_g(a, k, b, samples);
      if (roots.empty()) {
        rows.push_back({a, k, b, -1, std::nan(""), std::nullopt, false, false});
        continue;
      }
      const double lambda = lambda_for(a, b);
      for (std::size_t i = 0; i < roots.size(); ++i) {
        SweepRow r{a, k, b, static_cast<int>(i), roots[i], std::nullopt, false, false};
        try {
          if (profile_min(lambda, roots[i], 401) >= 1.0 - 1e-12) {
            const FoldSpec spec{lambda, {{kPi, roots[i]}}, k};
            r.energy = exact_energy(spec);
            r.feasible = std::abs(exact_constraint(spec)) <= 1e-8;
          }
        } catch (const Error&) {
        }
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v;
  if (count <= 1) {
    v.push_back(a);
    return v;
  }
  for (int i = 0; i < count; ++i) v.push_back(a + (b - a) * i / (count - 1));
  return v;
}

}  // namespace dcone
