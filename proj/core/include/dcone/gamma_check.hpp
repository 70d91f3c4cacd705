#pragma once

#include <vector>

#include "dcone/closure.hpp"
#include "dcone/grid.hpp"

namespace dcone {

struct GammaRow {
  double h = 0.0;
  int n = 0;
  double e_scaled = 0.0;        // h^-2 * bending energy of the closed curve
  double e0 = 0.0;              // limit energy of w
  double rel_err = 0.0;
  double gap_pre_close = 0.0;   // stage-4 position gap
  double tangent_gap_pre_close = 0.0;
  double a_norm = 0.0;
  double det_jac = 0.0;
  double min_gz = 0.0;          // closed curve
  double speed_defect = 0.0;    // closed curve
  double modulus_defect = 0.0;  // closed curve
  double split_r = 0.0;         // h^-2 int (u'' - 2 v')^2
  double split_phi = 0.0;       // h^-2 int (2 u' + v'')^2
  double split_z = 0.0;         // h^-2 int (w'' + w)^2
  double lift_error = 0.0;      // max |w_h / h - w - h^{3/2}|
  double jacobian_fd_error = 0.0;
  double orthonormality_defect = 0.0;
  double certificate_product = 0.0;
  bool certificate_holds = false;
  bool near_singular = false;
  int newton_iterations = 0;
  double closed_gap = 0.0;      // position gap after closing
  double closed_tangent_gap = 0.0;
  bool constraint_ok = false;   // min_gz >= h
};

struct GammaSlopes {
  double gap = 0.0;
  double a_norm = 0.0;
  double det = 0.0;
  double split = 0.0;  // (split_r + split_phi) / split_z against h
  double rel_err = 0.0;
};

struct GammaTable {
  std::vector<GammaRow> rows;  // in h_list order
  GammaSlopes slopes;
};

std::vector<double> default_h_list();

/// Least-squares slope of log|y| against log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

GammaRow gamma_row(const AdmissibleTriple& triple, double h);

/// One row per h (independent; spread over `threads` workers).
GammaTable gamma_check(const PeriodicField& w, const std::vector<double>& h_list = default_h_list(),
                       int threads = 1);

}  // namespace dcone
