#pragma once

#include "dcone/grid.hpp"

namespace dcone {

struct EnergyReport {
  double energy = 0.0;
  double constraint = 0.0;
  double obstacle_violation = 0.0;
};

/// Discrete integral of (w'' + w)^2.
double energy(const PeriodicField& w);

/// Discrete integral of w^2 - w'^2.
double constraint(const PeriodicField& w);

EnergyReport evaluate(const PeriodicField& w);

struct Gradients {
  PeriodicField energy;
  PeriodicField constraint;
};

/// Exact gradients of the discrete energy and constraint with respect to the
/// quadrature inner product. w'''' is realized as D2(D2 w) and the w'' inside
/// the constraint gradient as D1(D1 w), which are the adjoints of the stencils
/// used by energy() and constraint().
Gradients gradients(const PeriodicField& w);

/// w'''' + (2 + lambda) w'' + (1 + lambda) w, i.e. half of grad E + lambda grad C.
PeriodicField el_residual(const PeriodicField& w, double lambda);

/// D2(D2 w), the fourth derivative consistent with the discrete gradients.
PeriodicField fourth_derivative(const PeriodicField& w);

namespace kernel {
// out = (D2 + I)^2 w, i.e. half the energy gradient.
void half_energy_grad(std::span<const double> w, double h, std::span<double> out,
                      std::span<double> scratch);
// out = w + D1 D1 w, i.e. half the constraint gradient.
void half_constraint_grad(std::span<const double> w, double h, std::span<double> out,
                          std::span<double> scratch);
double energy(std::span<const double> w, double h, std::span<double> scratch);
double constraint(std::span<const double> w, double h, std::span<double> scratch);
}  // namespace kernel

}  // namespace dcone
