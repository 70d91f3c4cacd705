#include "dcone/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dcone/folds.hpp"
#include "dcone/gamma_check.hpp"
#include "dcone/obstacle.hpp"
#include "dcone/recovery.hpp"

namespace dcone::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MinimizeOpts {
  int n = 2048;
  int restarts = 1;
  std::string preset = "auto";
  std::uint64_t seed = 0;
  double rho = 10.0;
  double inner_tol = 1e-8;
  double outer_tol = 1e-8 * kTwoPi;
  double active_tol = 1e-7;
  int max_outer = 30;
  int coarse_n = 128;
  int max_newton = 60;
  int threads = 0;
  std::string out = "report.json";
  std::string w_out;
};

struct FoldsOpts {
  int n = 2048;
  bool check = false;
  std::string out = "folds.json";
  std::string w_out;
};

struct SweepOpts {
  std::string alpha = "0.5:10:20";
  std::string k = "0";
  std::string branch = "trig";
  int samples = 20000;
  std::string out = "sweep.csv";
};

struct RecoverOpts {
  std::string profile = "single-fold";
  std::string w_csv;
  int n = 4096;
  std::string h = "0.2,0.1,0.05,0.025";
  double mollify = 0.0;
  int threads = 0;
  std::string out = "gamma.csv";
  std::string summary;
};

struct PlotOpts {
  double alpha = 7.0;
  std::string branch = "trig";
  int samples = 2000;
  std::string out = "g.csv";
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  static constexpr char digits[] = "0123456789abcdef";
  for (int i = 15; i >= 0; --i, v >>= 4) buf[i] = digits[v & 0xf];
  buf[16] = '\0';
  return buf;
}

struct Meta {
  std::string command;
  json config;
  std::string hash;

  json to_json() const { return {{"tool", "dcone"}, {"version", version()}, {"command", command}, {"config", config}, {"config_hash", hash}}; }
  std::string csv_header() const { return "# dcone " + version() + " config=" + hash + "\n"; }
};

Meta make_meta(std::string command, json config) {
  Meta m{std::move(command), std::move(config), {}};
  m.hash = hex64(fnv1a(json{{"command", m.command}, {"config", m.config}}.dump()));
  return m;
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path() && !fs::is_directory(p.parent_path()))
    throw IoError("output directory does not exist: " + p.parent_path().string());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw IoError("write to " + path + " failed");
}

std::string sibling(const std::string& path, const std::string& name) {
  const fs::path p(path);
  return (p.has_parent_path() ? p.parent_path() / name : fs::path(name)).string();
}

std::string with_extension(const std::string& path, const std::string& ext) {
  fs::path p(path);
  p.replace_extension(ext);
  return p.string();
}

std::string w_csv(const PeriodicField& w, const Meta& meta) {
  std::string s = meta.csv_header() + "t,w\n";
  for (int j = 0; j < w.size(); ++j) s += format_double(w.grid().node(j)) + "," + format_double(w[j]) + "\n";
  return s;
}

PeriodicField read_w_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::InvalidArgument, "malformed row in " + path);
    double v = 0.0;
    const char* b = line.data() + comma + 1;
    const char* e = line.data() + line.size();
    if (std::from_chars(b, e, v).ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "bad number in " + path);
    vals.push_back(v);
  }
  const int n = static_cast<int>(vals.size());
  return PeriodicField(PeriodicGrid::make(n), std::move(vals));
}

json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json residuals_json(const Residuals& r) {
  return {{"stationarity", num(r.stationarity)}, {"active_min", num(r.active_min)},
          {"feasibility", num(r.feasibility)},   {"complementarity", num(r.complementarity)},
          {"obstacle", num(r.obstacle)},         {"scale", num(r.scale)}};
}

json intervals_json(const std::vector<Interval>& iv) {
  json a = json::array();
  for (const Interval& i : iv)
    a.push_back({{"center", i.center}, {"half_width", i.half_width}, {"k", i.k}, {"first_node", i.first_node},
                 {"last_node", i.last_node}});
  return a;
}

json report_json(const MinimizerReport& r) {
  json w = json::array();
  for (double x : r.w.values()) w.push_back(x);
  return {{"w", std::move(w)},
          {"n", r.w.size()},
          {"lambda", num(r.lambda)},
          {"alpha", num(r.alpha())},
          {"branch", std::string(to_string(r.branch()))},
          {"k", num(r.k)},
          {"intervals", intervals_json(r.intervals)},
          {"energy", num(r.energy)},
          {"constraint", num(r.constraint)},
          {"residuals", residuals_json(r.residuals)},
          {"outer_iterations", r.outer_iterations},
          {"newton_iterations", r.newton_iterations},
          {"converged", r.converged},
          {"degenerate_lambda", r.degenerate_lambda},
          {"seed", r.seed}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Preset resolve_preset(const MinimizeOpts& o) {
  if (o.preset == "auto") return o.restarts > 1 ? Preset::Random : Preset::Bump;
  return preset_from_string(o.preset);
}

SolverConfig solver_config(const MinimizeOpts& o) {
  SolverConfig c;
  c.n = o.n;
  c.rho = o.rho;
  c.inner_tol = o.inner_tol;
  c.outer_tol = o.outer_tol;
  c.active_tol = o.active_tol;
  c.max_outer = o.max_outer;
  c.coarse_n = o.coarse_n;
  c.max_newton = o.max_newton;
  c.seed = o.seed;
  c.validate();
  return c;
}

int cmd_minimize(const MinimizeOpts& o, std::ostream& out, std::ostream& err) {
  const SolverConfig cfg = solver_config(o);
  if (o.restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be >= 1");
  const Preset preset = resolve_preset(o);
  const Meta meta = make_meta("minimize", {{"n", o.n},
                                           {"restarts", o.restarts},
                                           {"preset", std::string(to_string(preset))},
                                           {"seed", o.seed},
                                           {"rho", o.rho},
                                           {"inner_tol", o.inner_tol},
                                           {"outer_tol", o.outer_tol},
                                           {"active_tol", o.active_tol},
                                           {"max_outer", o.max_outer},
                                           {"coarse_n", o.coarse_n},
                                           {"max_newton", o.max_newton}});
  MinimizerReport best;
  json runs = json::array();
  json failures = json::array();
  if (o.restarts == 1) {
    best = minimize(cfg, preset);
  } else {
    RestartResult rr = minimize_restarts(cfg, preset, o.restarts, o.threads);
    for (const MinimizerReport& r : rr.runs)
      runs.push_back({{"seed", r.seed}, {"energy", num(r.energy)}, {"converged", r.converged}});
    for (const std::string& f : rr.failures) failures.push_back(f);
    best = std::move(rr.best);
  }
  json j = report_json(best);
  j["meta"] = meta.to_json();
  if (o.restarts > 1) j["restarts"] = {{"runs", runs}, {"failures", failures}};
  write_file(o.out, dump(j));
  write_file(o.w_out.empty() ? sibling(o.out, "w.csv") : o.w_out, w_csv(best.w, meta));
  out << "energy " << format_double(best.energy) << " lambda " << format_double(best.lambda) << " intervals "
      << best.intervals.size() << "\n";
  if (!best.converged) {
    err << "dcone: minimizer did not meet the residual targets\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_folds(const FoldsOpts& o, std::ostream& out, std::ostream&) {
  const Meta meta = make_meta("folds", {{"n", o.n}, {"check", o.check}});
  const PeriodicGrid grid = PeriodicGrid::make(o.n);
  const SingleFoldSolution s = solve_single_fold(grid);
  const FoldCandidate& c = s.candidate;
  json j = {{"meta", meta.to_json()},
            {"lambda", s.lambda},
            {"alpha", s.alpha},
            {"z", s.z},
            {"branch", std::string(to_string(s.branch))},
            {"opening_angle_deg", s.opening_angle_deg()},
            {"energy", c.energy},
            {"discrete_energy", c.discrete_energy},
            {"constraint", c.constraint_residual},
            {"discrete_constraint", c.discrete_constraint},
            {"c2_jumps", c.c2_jumps},
            {"min_w", c.min_w},
            {"feasible", c.feasible}};
  if (o.check) {
    SolverConfig cfg;
    cfg.n = o.n;
    const MinimizerReport r = minimize(cfg, Preset::Bump);
    const ConditionReport cr = check_necessary_conditions(r);
    json iv = json::array();
    for (const IntervalCheck& c2 : cr.intervals)
      iv.push_back({{"z", c2.z},
                    {"nearest_root", c2.nearest_root},
                    {"root_distance", c2.root_distance},
                    {"profile_gap", c2.profile_gap},
                    {"c2_jump", c2.c2_jump},
                    {"root_ok", c2.root_ok},
                    {"gap_ok", c2.gap_ok},
                    {"c2_ok", c2.c2_ok}});
    j["minimizer"] = {{"energy", r.energy},
                      {"lambda", r.lambda},
                      {"k", r.k},
                      {"intervals", intervals_json(r.intervals)},
                      {"relative_energy_gap", std::abs(r.energy - c.energy) / c.energy}};
    j["conditions"] = {{"branch", std::string(to_string(cr.branch))}, {"passed", cr.passed}, {"intervals", iv}};
  }
  write_file(o.out, dump(j));
  if (!o.w_out.empty()) write_file(o.w_out, w_csv(c.w, meta));
  out << "lambda " << format_double(s.lambda) << " z " << format_double(s.z) << " angle "
      << format_double(s.opening_angle_deg()) << " deg\n";
  return kExitOk;
}

int cmd_sweep(const SweepOpts& o, std::ostream& out, std::ostream&) {
  const Branch b = branch_from_string(o.branch);
  const std::vector<double> alphas = parse_list(o.alpha);
  const std::vector<double> ks = parse_list(o.k);
  const Meta meta = make_meta("sweep", {{"alpha", alphas}, {"k", ks}, {"branch", std::string(to_string(b))}, {"samples", o.samples}});
  const std::vector<SweepRow> rows = sweep(alphas, ks, b, o.samples);
  std::string s = meta.csv_header() + "alpha,k,branch,root_index,z,energy,feasible\n";
  for (const SweepRow& r : rows) {
    s += format_double(r.alpha) + "," + format_double(r.k) + "," + std::string(to_string(r.branch)) + ",";
    if (r.alpha_excluded) {
      s += ",,,alpha_excluded\n";
      continue;
    }
    s += std::to_string(r.root_index) + ",";
    s += (r.root_index >= 0 ? format_double(r.z) : "") + ",";
    s += (r.energy ? format_double(*r.energy) : "") + ",";
    s += r.feasible ? "true\n" : "false\n";
  }
  write_file(o.out, s);
  out << rows.size() << " rows\n";
  return kExitOk;
}

int cmd_recover(const RecoverOpts& o, std::ostream& out, std::ostream&) {
  const std::vector<double> hs = parse_list(o.h);
  json cfg = {{"h", hs}, {"mollify", o.mollify}};
  PeriodicField w = PeriodicField::constant(PeriodicGrid::make(16), 1.0);
  if (!o.w_csv.empty()) {
    w = read_w_csv(o.w_csv);
    cfg["w_csv"] = o.w_csv;
    cfg["n"] = w.size();
  } else if (o.profile == "single-fold") {
    w = solve_single_fold(PeriodicGrid::make(o.n)).candidate.w;
    cfg["profile"] = o.profile;
    cfg["n"] = o.n;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown profile '" + o.profile + "'");
  }
  double lambda_eps = 0.0;
  if (o.mollify > 0.0) {
    const MollifyResult m = mollify_admissible(w, o.mollify);
    w = m.w;
    lambda_eps = m.lambda;
  }
  const Meta meta = make_meta("recover", cfg);
  const GammaTable t = gamma_check(w, hs, worker_count(o.threads));

  std::string s = meta.csv_header() + "h,n,E_scaled,E0,rel_err,gap_pre_close,a_norm,det_jac,min_gz,speed_defect\n";
  json rows = json::array();
  for (const GammaRow& r : t.rows) {
    s += format_double(r.h) + "," + std::to_string(r.n) + "," + format_double(r.e_scaled) + "," + format_double(r.e0) +
         "," + format_double(r.rel_err) + "," + format_double(r.gap_pre_close) + "," + format_double(r.a_norm) + "," +
         format_double(r.det_jac) + "," + format_double(r.min_gz) + "," + format_double(r.speed_defect) + "\n";
    rows.push_back({{"h", r.h},
                    {"n", r.n},
                    {"E_scaled", r.e_scaled},
                    {"E0", r.e0},
                    {"rel_err", r.rel_err},
                    {"gap_pre_close", r.gap_pre_close},
                    {"tangent_gap_pre_close", r.tangent_gap_pre_close},
                    {"a_norm", r.a_norm},
                    {"det_jac", r.det_jac},
                    {"min_gz", r.min_gz},
                    {"speed_defect", r.speed_defect},
                    {"modulus_defect", r.modulus_defect},
                    {"split", {r.split_r, r.split_phi, r.split_z}},
                    {"lift_error", r.lift_error},
                    {"jacobian_fd_error", r.jacobian_fd_error},
                    {"newton_iterations", r.newton_iterations},
                    {"certificate_product", num(r.certificate_product)},
                    {"certificate_holds", r.certificate_holds},
                    {"closed_gap", r.closed_gap},
                    {"constraint_ok", r.constraint_ok}});
  }
  json summary = {{"meta", meta.to_json()}, {"rows", rows}};
  if (o.mollify > 0.0) summary["mollify_lambda"] = lambda_eps;
  if (t.rows.size() >= 2)
    summary["slopes"] = {{"gap_pre_close", t.slopes.gap},
                         {"a_norm", t.slopes.a_norm},
                         {"det_jac", t.slopes.det},
                         {"split_ratio", t.slopes.split},
                         {"rel_err", t.slopes.rel_err}};
  write_file(o.out, s);
  write_file(o.summary.empty() ? with_extension(o.out, ".json") : o.summary, dump(summary));
  out << t.rows.size() << " rows, final rel_err " << format_double(t.rows.back().rel_err) << "\n";
  return kExitOk;
}

int cmd_plot(const PlotOpts& o, std::ostream& out, std::ostream&) {
  const Branch b = branch_from_string(o.branch);
  const Meta meta = make_meta("plot-g", {{"alpha", o.alpha}, {"branch", std::string(to_string(b))}, {"samples", o.samples}});
  const PlotTable t = plot_g(o.alpha, b, o.samples);
  std::string s = meta.csv_header() + "z,g_value,is_pole\n";
  for (const PlotRow& r : t.rows) s += format_double(r.z) + "," + format_double(r.g) + "," + (r.pole ? "1\n" : "0\n");
  write_file(o.out, s);
  out << "poles " << t.poles << " branches " << t.branches << "\n";
  return kExitOk;
}

std::string to_flag_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const json& e : v) s += (s.empty() ? "" : ",") + to_flag_value(e);
    return s;
  }
  throw Error(ErrorCode::InvalidConfig, "unsupported config value " + v.dump());
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || (a.size() > flag.size() && a.compare(0, flag.size() + 1, flag + "=") == 0);
  });
}

// Splices values from --config into the argument list; explicit flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config " + path);
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");

  static const std::vector<std::string> commands = {"minimize", "folds", "sweep", "recover", "plot-g"};
  const bool has_command = std::any_of(args.begin() + 1, args.end(), [](const std::string& a) {
    return std::find(commands.begin(), commands.end(), a) != commands.end();
  });
  if (!has_command) {
    if (!cfg.contains("command")) throw Error(ErrorCode::InvalidConfig, "no subcommand given");
    args.insert(args.begin() + 1, cfg["command"].get<std::string>());
  }
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (given(args, flag)) continue;
    args.push_back(flag + "=" + to_flag_value(value));
  }
  return args;
}

}  // namespace

std::string version() { return DCONE_VERSION; }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_list(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(s) + "'");
    return v;
  };
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto a = text.find(':'), b = text.rfind(':');
    const double lo = number(text.substr(0, a));
    const double hi = number(text.substr(a + 1, b - a - 1));
    const double cnt = number(text.substr(b + 1));
    if (cnt < 1 || cnt != std::floor(cnt)) throw Error(ErrorCode::InvalidArgument, "range count must be a positive integer");
    return linspace(lo, hi, static_cast<int>(cnt));
  }
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(number(text.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::NoRoot:
    case ErrorCode::NewtonStall:
    case ErrorCode::NewtonDiverged:
    case ErrorCode::SingularJacobian:
    case ErrorCode::DegenerateLambda:
    case ErrorCode::Infeasible:
      return kExitNoConvergence;
    default:
      return kExitInvalid;
  }
}

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  MinimizeOpts mo;
  FoldsOpts fo;
  SweepOpts so;
  RecoverOpts ro;
  PlotOpts po;

  CLI::App app{"Developable cone small-deflection solver", "dcone"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.add_option("--config", "JSON file with option values (flags override it)");

  auto* m = app.add_subcommand("minimize", "Solve the obstacle-constrained minimization");
  m->add_option("--n", mo.n, "grid size");
  m->add_option("--restarts", mo.restarts, "number of independent starts");
  m->add_option("--preset", mo.preset, "initial guess: auto, bump or random");
  m->add_option("--seed", mo.seed, "base seed");
  m->add_option("--rho", mo.rho);
  m->add_option("--inner-tol", mo.inner_tol);
  m->add_option("--outer-tol", mo.outer_tol);
  m->add_option("--active-tol", mo.active_tol);
  m->add_option("--max-outer", mo.max_outer);
  m->add_option("--coarse-n", mo.coarse_n);
  m->add_option("--max-newton", mo.max_newton);
  m->add_option("--threads", mo.threads, "worker threads (0 = hardware)");
  m->add_option("--out", mo.out, "report JSON path");
  m->add_option("--w-out", mo.w_out, "w samples CSV path (default: w.csv next to --out)");

  auto* f = app.add_subcommand("folds", "Single-fold solution and condition checks");
  f->add_option("--n", fo.n);
  f->add_flag("--check", fo.check, "also minimize from the bump preset and check the fold conditions");
  f->add_option("--out", fo.out);
  f->add_option("--w-out", fo.w_out);

  auto* s = app.add_subcommand("sweep", "Roots of g(z) = k over alpha and k grids");
  s->add_option("--alpha", so.alpha, "list a,b,c or range start:stop:count");
  s->add_option("--k", so.k, "list or range");
  s->add_option("--branch", so.branch, "trig or hyperbolic");
  s->add_option("--samples", so.samples);
  s->add_option("--out", so.out);

  auto* r = app.add_subcommand("recover", "Build recovery curves and tabulate the energy limit");
  r->set_help_flag("--help", "Print this help message and exit");
  r->add_option("--profile", ro.profile, "single-fold");
  r->add_option("--w-csv", ro.w_csv, "read w from a t,w CSV instead of a built-in profile");
  r->add_option("--n", ro.n);
  r->add_option("--h", ro.h, "list or range of h values");
  r->add_option("--mollify", ro.mollify, "mollify w with this eps first");
  r->add_option("--threads", ro.threads);
  r->add_option("--out", ro.out);
  r->add_option("--summary", ro.summary, "JSON summary path (default: --out with .json)");

  auto* p = app.add_subcommand("plot-g", "Tabulate g or g-tilde over (0, pi]");
  p->add_option("--alpha", po.alpha);
  p->add_option("--branch", po.branch);
  p->add_option("--samples", po.samples);
  p->add_option("--out", po.out);

  try {
    const std::vector<std::string> args = merge_config(raw);
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << version() << "\n";
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << app.help();
        return kExitOk;
      }
      err << "dcone: " << e.what() << "\n";
      return kExitInvalid;
    }
    if (*m) return cmd_minimize(mo, out, err);
    if (*f) return cmd_folds(fo, out, err);
    if (*s) return cmd_sweep(so, out, err);
    if (*r) return cmd_recover(ro, out, err);
    return cmd_plot(po, out, err);
  } catch (const Error& e) {
    err << "dcone: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const IoError& e) {
    err << "dcone: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "dcone: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace dcone::cli
