#include "dcone/energy.hpp"

#include <algorithm>
#include <vector>

namespace dcone {

namespace kernel {

void half_energy_grad(std::span<const double> w, double h, std::span<double> out,
                      std::span<double> scratch) {
  const std::size_t n = w.size();
  stencil::d2(w, h, scratch);
  for (std::size_t j = 0; j < n; ++j) scratch[j] += w[j];
  stencil::d2(scratch, h, out);
  for (std::size_t j = 0; j < n; ++j) out[j] += scratch[j];
}

void half_constraint_grad(std::span<const double> w, double h, std::span<double> out,
                          std::span<double> scratch) {
  const std::size_t n = w.size();
  stencil::d1(w, h, scratch);
  stencil::d1(scratch, h, out);
  for (std::size_t j = 0; j < n; ++j) out[j] += w[j];
}

double energy(std::span<const double> w, double h, std::span<double> scratch) {
  stencil::d2(w, h, scratch);
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double r = scratch[j] + w[j];
    s += r * r;
  }
  return s * h;
}

double constraint(std::span<const double> w, double h, std::span<double> scratch) {
  stencil::d1(w, h, scratch);
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * w[j] - scratch[j] * scratch[j];
  return s * h;
}

}  // namespace kernel

double energy(const PeriodicField& w) {
  std::vector<double> s(static_cast<std::size_t>(w.size()));
  return kernel::energy(w.values(), w.grid().spacing(), s);
}

double constraint(const PeriodicField& w) {
  std::vector<double> s(static_cast<std::size_t>(w.size()));
  return kernel::constraint(w.values(), w.grid().spacing(), s);
}

EnergyReport evaluate(const PeriodicField& w) {
  return {energy(w), constraint(w), std::max(0.0, 1.0 - w.min())};
}

Gradients gradients(const PeriodicField& w) {
  const auto n = static_cast<std::size_t>(w.size());
  const double h = w.grid().spacing();
  std::vector<double> ge(n), gc(n), s(n);
  kernel::half_energy_grad(w.values(), h, ge, s);
  kernel::half_constraint_grad(w.values(), h, gc, s);
  for (std::size_t j = 0; j < n; ++j) {
    ge[j] *= 2.0;
    gc[j] *= 2.0;
  }
  return {PeriodicField(w.grid(), std::move(ge)), PeriodicField(w.grid(), std::move(gc))};
}

PeriodicField el_residual(const PeriodicField& w, double lambda) {
  const auto n = static_cast<std::size_t>(w.size());
  const double h = w.grid().spacing();
  std::vector<double> ge(n), gc(n), s(n);
  kernel::half_energy_grad(w.values(), h, ge, s);
  kernel::half_constraint_grad(w.values(), h, gc, s);
  for (std::size_t j = 0; j < n; ++j) ge[j] += lambda * gc[j];
  return PeriodicField(w.grid(), std::move(ge));
}

PeriodicField fourth_derivative(const PeriodicField& w) {
  const auto n = static_cast<std::size_t>(w.size());
  const double h = w.grid().spacing();
  std::vector<double> a(n), b(n);
  stencil::d2(w.values(), h, a);
  stencil::d2(a, h, b);
  return PeriodicField(w.grid(), std::move(b));
}

}  // namespace dcone
