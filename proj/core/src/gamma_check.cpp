#include "dcone/gamma_check.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "dcone/energy.hpp"
#include "dcone/error.hpp"

namespace dcone {

std::vector<double> default_h_list() { return {0.2, 0.1, 0.05, 0.025}; }

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "slope fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(std::abs(x[i])) / m;
    my += std::log(std::abs(y[i])) / m;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(std::abs(x[i])) - mx;
    sxy += dx * (std::log(std::abs(y[i])) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

GammaRow gamma_row(const AdmissibleTriple& triple, double h) {
  GammaRow r;
  r.h = h;
  r.n = triple.w.size();
  r.e0 = energy(triple.w);

  const StageResult st = build_stages(triple, h);
  r.gap_pre_close = st.gap_position;
  r.tangent_gap_pre_close = st.gap_tangent;

  const ClosureProblem problem(st.stage4);
  const CloseResult cr = newton_close(st.stage4);
  const Eigen::Matrix3d jfd = problem.jacobian_fd(Eigen::Vector3d::Zero());
  r.jacobian_fd_error = (jfd - cr.jacobian0.jacobian).norm() / jfd.norm();
  r.det_jac = cr.jacobian0.det;
  r.near_singular = cr.jacobian0.near_singular;
  r.a_norm = cr.a.norm();
  r.newton_iterations = cr.iterations;
  r.certificate_product = cr.certificate.product;
  r.certificate_holds = cr.certificate.holds;
  r.closed_gap = cr.gap_position;
  r.closed_tangent_gap = cr.gap_tangent;
  r.orthonormality_defect = problem.trajectory(cr.a).orthonormality_defect;

  const BendingReport be = bending_energy(cr.curve);
  r.e_scaled = be.energy / (h * h);
  r.rel_err = std::abs(r.e_scaled - r.e0) / r.e0;
  r.speed_defect = be.speed_defect;
  r.modulus_defect = be.modulus_defect;

  const EnergySplit sp = energy_split(cr.curve);
  r.split_r = sp.e_r / (h * h);
  r.split_phi = sp.e_phi / (h * h);
  r.split_z = sp.e_z / (h * h);

  const UVW c = extract_uvw(cr.curve);
  const double shift = std::pow(h, 1.5);
  r.min_gz = *std::min_element(c.w.begin(), c.w.end());
  for (std::size_t j = 0; j < c.w.size(); ++j) {
    const double wj = triple.w[static_cast<int>(j % static_cast<std::size_t>(r.n))];
    r.lift_error = std::max(r.lift_error, std::abs(c.w[j] / h - wj - shift));
  }
  r.constraint_ok = r.min_gz >= h;
  return r;
}

GammaTable gamma_check(const PeriodicField& w, const std::vector<double>& h_list, int threads) {
  if (h_list.empty()) throw Error(ErrorCode::InvalidArgument, "empty h list");
  for (double h : h_list)
    if (!(h > 0.0) || h > 0.5) throw Error(ErrorCode::InvalidArgument, "h must lie in (0, 0.5]");
  const AdmissibleTriple triple = triple_from_w(w);

  GammaTable table;
  table.rows.resize(h_list.size());
  std::vector<std::exception_ptr> errors(h_list.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < h_list.size();) {
      try {
        table.rows[i] = gamma_row(triple, h_list[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nt = std::clamp(threads, 1, static_cast<int>(h_list.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (table.rows.size() >= 2) {
    std::vector<double> hs, gap, a, det, split, rel;
    for (const GammaRow& r : table.rows) {
      hs.push_back(r.h);
      gap.push_back(r.gap_pre_close);
      a.push_back(r.a_norm);
      det.push_back(r.det_jac);
      split.push_back((r.split_r + r.split_phi) / r.split_z);
      rel.push_back(r.rel_err);
    }
    table.slopes = {fit_loglog_slope(hs, gap), fit_loglog_slope(hs, a), fit_loglog_slope(hs, det),
                    fit_loglog_slope(hs, split), fit_loglog_slope(hs, rel)};
  }
  return table;
}

}  // namespace dcone
