#include "dcone/grid.hpp"

#include <algorithm>
#include <string>

#include "dcone/error.hpp"

namespace dcone {

PeriodicGrid PeriodicGrid::make(int n) {
  if (n % 2 != 0) throw Error(ErrorCode::OddN, "grid size must be even, got " + std::to_string(n));
  if (n < 16) throw Error(ErrorCode::GridTooSmall, "grid size must be >= 16, got " + std::to_string(n));
  return PeriodicGrid(n);
}

PeriodicField::PeriodicField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw Error(ErrorCode::IncompatibleGrids, "value count does not match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "field sample is not finite");
}

PeriodicField PeriodicField::constant(PeriodicGrid grid, double value) {
  return PeriodicField(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), value));
}

double PeriodicField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PeriodicField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double PeriodicField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

PeriodicField PeriodicField::shifted(int m) const {
  const int n = size();
  std::vector<double> out(values_.size());
  const int r = ((m % n) + n) % n;
  for (int j = 0; j < n; ++j) out[(j + r) % n] = values_[j];
  return PeriodicField(grid_, std::move(out));
}

void require_same_grid(const PeriodicField& a, const PeriodicField& b) {
  if (!(a.grid() == b.grid()))
    throw Error(ErrorCode::IncompatibleGrids, "fields live on different grids");
}

PeriodicField operator+(const PeriodicField& a, const PeriodicField& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.values_);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] += b.values_[j];
  return PeriodicField(a.grid_, std::move(v));
}

PeriodicField operator-(const PeriodicField& a, const PeriodicField& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.values_);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= b.values_[j];
  return PeriodicField(a.grid_, std::move(v));
}

PeriodicField operator*(double s, const PeriodicField& a) {
  std::vector<double> v(a.values_);
  for (double& x : v) x *= s;
  return PeriodicField(a.grid_, std::move(v));
}

PeriodicField operator+(const PeriodicField& a, double c) {
  std::vector<double> v(a.values_);
  for (double& x : v) x += c;
  return PeriodicField(a.grid_, std::move(v));
}

PeriodicField shift(const PeriodicField& f, int m) { return f.shifted(m); }

namespace stencil {
namespace {

// Applies a symmetric-width stencil sum_k c[k] f[j + k - R] with periodic wrap.
template <int R>
void apply(std::span<const double> f, const double (&c)[2 * R + 1], double scale,
           std::span<double> out) {
  const int n = static_cast<int>(f.size());
  auto at = [&](int j) { return f[static_cast<std::size_t>(((j % n) + n) % n)]; };
  for (int j = 0; j < R; ++j) {
    double s = 0.0;
    for (int k = -R; k <= R; ++k) s += c[k + R] * at(j + k);
    out[j] = s * scale;
  }
  for (int j = R; j < n - R; ++j) {
    double s = 0.0;
    const double* p = f.data() + j - R;
    for (int k = 0; k <= 2 * R; ++k) s += c[k] * p[k];
    out[j] = s * scale;
  }
  for (int j = std::max(R, n - R); j < n; ++j) {
    double s = 0.0;
    for (int k = -R; k <= R; ++k) s += c[k + R] * at(j + k);
    out[j] = s * scale;
  }
}

constexpr double kD1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
constexpr double kD2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
constexpr double kD3[7] = {1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0};
constexpr double kD4[7] = {-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0};

}  // namespace

void d1(std::span<const double> f, double h, std::span<double> out) {
  apply<2>(f, kD1, 1.0 / (12.0 * h), out);
}
void d2(std::span<const double> f, double h, std::span<double> out) {
  apply<2>(f, kD2, 1.0 / (12.0 * h * h), out);
}
void d3(std::span<const double> f, double h, std::span<double> out) {
  apply<3>(f, kD3, 1.0 / (8.0 * h * h * h), out);
}
void d4(std::span<const double> f, double h, std::span<double> out) {
  apply<3>(f, kD4, 1.0 / (6.0 * h * h * h * h), out);
}

}  // namespace stencil

PeriodicField deriv(const PeriodicField& f, int order) {
  std::vector<double> out(static_cast<std::size_t>(f.size()));
  const double h = f.grid().spacing();
  switch (order) {
    case 1: stencil::d1(f.values(), h, out); break;
    case 2: stencil::d2(f.values(), h, out); break;
    case 3: stencil::d3(f.values(), h, out); break;
    case 4: stencil::d4(f.values(), h, out); break;
    default:
      throw Error(ErrorCode::InvalidOrder, "derivative order must be 1..4, got " + std::to_string(order));
  }
  return PeriodicField(f.grid(), std::move(out));
}

double integrate(const PeriodicField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().spacing();
}

double inner(const PeriodicField& a, const PeriodicField& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s * a.grid().spacing();
}

}  // namespace dcone
