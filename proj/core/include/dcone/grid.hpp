#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace dcone {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform grid on [0, 2pi) with nodes t_j = 2 pi j / n.
///
/// n must be even and at least 16 so that the widest (7-point) stencil fits
/// comfortably and Nyquist modes are well defined.
class PeriodicGrid {
 public:
  static PeriodicGrid make(int n);

  int size() const noexcept { return n_; }
  double spacing() const noexcept { return kTwoPi / n_; }
  double node(int j) const noexcept { return kTwoPi * j / n_; }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  explicit PeriodicGrid(int n) : n_(n) {}
  int n_;
};

inline PeriodicGrid make_grid(int n) { return PeriodicGrid::make(n); }

/// Samples of a scalar function on a PeriodicGrid. Immutable once built.
class PeriodicField {
 public:
  PeriodicField(PeriodicGrid grid, std::vector<double> values);

  static PeriodicField constant(PeriodicGrid grid, double value);

  template <class F>
  static PeriodicField sample(PeriodicGrid grid, F&& f) {
    std::vector<double> v(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) v[j] = f(grid.node(j));
    return PeriodicField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](int j) const noexcept { return values_[static_cast<std::size_t>(j)]; }

  double min() const;
  double max() const;
  double max_abs() const;

  /// result[j] = this[j - m] (indices mod n), i.e. the profile moves forward by m nodes.
  PeriodicField shifted(int m) const;

  friend PeriodicField operator+(const PeriodicField& a, const PeriodicField& b);
  friend PeriodicField operator-(const PeriodicField& a, const PeriodicField& b);
  friend PeriodicField operator*(double s, const PeriodicField& a);
  friend PeriodicField operator+(const PeriodicField& a, double c);

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

PeriodicField shift(const PeriodicField& f, int m);

/// Centered 4th-order finite difference derivative (order 1..4).
PeriodicField deriv(const PeriodicField& f, int order);

/// Rectangle (= periodic trapezoid) rule over one period.
double integrate(const PeriodicField& f);

/// Quadrature-weighted inner product, spacing * sum(a_j b_j).
double inner(const PeriodicField& a, const PeriodicField& b);

void require_same_grid(const PeriodicField& a, const PeriodicField& b);

/// Raw periodic stencils on contiguous buffers. `out` must not alias `f`.
namespace stencil {
void d1(std::span<const double> f, double h, std::span<double> out);
void d2(std::span<const double> f, double h, std::span<double> out);
void d3(std::span<const double> f, double h, std::span<double> out);
void d4(std::span<const double> f, double h, std::span<double> out);
}  // namespace stencil

}  // namespace dcone
