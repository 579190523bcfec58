#include "lbsr/harness.hpp"

#include "lbsr/errors.hpp"
#include "lbsr/parallel.hpp"
#include "lbsr/spectral_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

namespace lbsr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto piece = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!piece.empty()) out.push_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw Error(ErrorKind::config, "bad value '" + std::string(text) + "' for key '" + std::string(key) + "'");
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view key) {
  std::vector<T> out;
  for (auto item : split(text, ' ')) out.push_back(parse_number<T>(item, key));
  return out;
}

bool parse_bool(std::string_view text, std::string_view key) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw Error(ErrorKind::config, "key '" + std::string(key) + "' expects true or false");
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

SolverKind parse_solver_kind(std::string_view s) {
  if (s == "gmres") return SolverKind::gmres;
  if (s == "dense") return SolverKind::dense;
  throw Error(ErrorKind::config, "unknown solver '" + std::string(s) + "'");
}

std::string_view to_string(SolverKind k) { return k == SolverKind::gmres ? "gmres" : "dense"; }

double relative_l2(const Eigen::VectorXd& w, const Eigen::VectorXd& u, const Eigen::VectorXd& ref) {
  const double den = w.dot(ref.cwiseAbs2());
  if (!(den > 0.0)) throw Error(ErrorKind::degenerate_reference, "reference vanishes");
  return std::sqrt(w.dot((u - ref).cwiseAbs2()) / den);
}

std::string alpha_label(double alpha) { return "alpha=" + format_double(alpha); }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Config

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  cfg.geometry = CurveSpec{};
  std::string section;
  std::size_t lineno = 0;
  for (auto raw : split(text, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::config, "malformed section header '" + std::string(line) + "'");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "geometry" && section != "discretization" && section != "rhs" && section != "solver" &&
          section != "output")
        throw Error(ErrorKind::config, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::config, "expected key = value: '" + std::string(line) + "'");
    if (section.empty()) throw Error(ErrorKind::config, "key outside a section: '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto unknown = [&] { return Error(ErrorKind::config, "unknown key '" + key + "' in [" + section + "]"); };

    if (section == "geometry") {
      if (key == "curve")
        cfg.geometry.name = std::string(value);
      else if (key == "inner" || key == "outer")
        cfg.geometry.params[key] = parse_number<double>(value, key);
      else if (key == "vertices") {
        cfg.geometry.vertices.clear();
        for (auto pair : split(value, ',')) {
          const auto xy = parse_list<double>(pair, key);
          if (xy.size() != 2) throw Error(ErrorKind::config, "vertices need 'r z' pairs");
          cfg.geometry.vertices.emplace_back(xy[0], xy[1]);
        }
      } else
        throw unknown();
    } else if (section == "discretization") {
      auto& d = cfg.discretization;
      if (key == "order") d.order = parse_number<int>(value, key);
      else if (key == "panels") d.panels = parse_number<int>(value, key);
      else if (key == "panel_ladder") d.panel_ladder = parse_list<int>(value, key);
      else if (key == "ntheta") d.ntheta = parse_number<int>(value, key);
      else if (key == "ntheta_ladder") d.ntheta_ladder = parse_list<int>(value, key);
      else if (key == "refine_targets") d.refine_targets = parse_list<double>(value, key);
      else if (key == "refine_depth") d.refine_depth = parse_number<int>(value, key);
      else if (key == "depth_ladder") d.depth_ladder = parse_list<int>(value, key);
      else if (key == "reference_depth_offset") d.reference_depth_offset = parse_number<int>(value, key);
      else if (key == "reference_factor") d.reference_factor = parse_number<int>(value, key);
      else throw unknown();
    } else if (section == "rhs") {
      auto& r = cfg.rhs;
      if (key == "kind") r.kind = std::string(value);
      else if (key == "center") {
        const auto c = parse_list<double>(value, key);
        if (c.size() != 3) throw Error(ErrorKind::config, "center needs three coordinates");
        r.center = Eigen::Vector3d(c[0], c[1], c[2]);
      } else if (key == "alpha") r.alpha = parse_number<double>(value, key);
      else if (key == "alphas") r.alphas = parse_list<double>(value, key);
      else if (key == "s0") r.s0 = parse_number<double>(value, key);
      else if (key == "m") r.m = parse_number<int>(value, key);
      else throw unknown();
    } else if (section == "solver") {
      auto& s = cfg.solver;
      if (key == "kernel") {
        try {
          s.kernel = parse_kernel(value);
        } catch (const Error& e) {
          throw Error(ErrorKind::config, e.what());
        }
      } else if (key == "solver") s.solver = parse_solver_kind(value);
      else if (key == "gmres_tol") s.gmres_tol = parse_number<double>(value, key);
      else if (key == "gmres_maxit") s.gmres_maxit = parse_number<int>(value, key);
      else if (key == "jobs") s.jobs = parse_number<int>(value, key);
      else if (key == "project_mean") s.project_mean = parse_bool(value, key);
      else throw unknown();
    } else {
      if (key == "path") cfg.output = std::string(value);
      else throw unknown();
    }
  }
  return cfg;
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[geometry]\ncurve = " << cfg.geometry.name << '\n';
  for (const auto& [k, v] : cfg.geometry.params) out << k << " = " << format_double(v) << '\n';
  if (!cfg.geometry.vertices.empty()) {
    out << "vertices = ";
    for (std::size_t i = 0; i < cfg.geometry.vertices.size(); ++i)
      out << (i ? ", " : "") << format_double(cfg.geometry.vertices[i].x()) << ' '
          << format_double(cfg.geometry.vertices[i].y());
    out << '\n';
  }
  const auto& d = cfg.discretization;
  out << "\n[discretization]\n"
      << "order = " << d.order << '\n'
      << "panels = " << d.panels << '\n'
      << "panel_ladder = " << join(d.panel_ladder) << '\n'
      << "ntheta = " << d.ntheta << '\n'
      << "ntheta_ladder = " << join(d.ntheta_ladder) << '\n'
      << "refine_targets = " << join(d.refine_targets) << '\n'
      << "refine_depth = " << d.refine_depth << '\n'
      << "depth_ladder = " << join(d.depth_ladder) << '\n'
      << "reference_depth_offset = " << d.reference_depth_offset << '\n'
      << "reference_factor = " << d.reference_factor << '\n';
  const auto& r = cfg.rhs;
  out << "\n[rhs]\n"
      << "kind = " << r.kind << '\n'
      << "center = " << format_double(r.center.x()) << ' ' << format_double(r.center.y()) << ' '
      << format_double(r.center.z()) << '\n'
      << "alpha = " << format_double(r.alpha) << '\n'
      << "alphas = " << join(r.alphas) << '\n'
      << "s0 = " << format_double(r.s0) << '\n'
      << "m = " << r.m << '\n';
  const auto& s = cfg.solver;
  out << "\n[solver]\n"
      << "kernel = " << to_string(s.kernel) << '\n'
      << "solver = " << to_string(s.solver) << '\n'
      << "gmres_tol = " << format_double(s.gmres_tol) << '\n'
      << "gmres_maxit = " << s.gmres_maxit << '\n'
      << "jobs = " << s.jobs << '\n'
      << "project_mean = " << (s.project_mean ? "true" : "false") << '\n';
  out << "\n[output]\npath = " << cfg.output << '\n';
  return out.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ExperimentConfig default_config(std::string_view experiment) {
  ExperimentConfig cfg;
  if (experiment == "ode-compare") {
    cfg.geometry = CurveSpec{};
    cfg.rhs.kind = "ode-smooth";
    cfg.discretization.panel_ladder = {2, 4, 8, 16, 32};
  } else if (experiment == "torus") {
    cfg.geometry = CurveSpec{"circular-torus", {{"inner", 1.0}, {"outer", 2.0}}, {}};
    cfg.rhs.kind = "newtonian";
    cfg.solver.project_mean = true;
  } else if (experiment == "square-toroid") {
    cfg.rhs.kind = "power-singular";
    cfg.discretization.panels = 2;
    cfg.discretization.ntheta = 8;
    cfg.discretization.refine_targets = {2.0};
  } else if (experiment == "hodge") {
    cfg.rhs.kind = "hodge-test";
    cfg.discretization.panels = 2;
    cfg.discretization.ntheta = 16;
  } else {
    throw Error(ErrorKind::config, "unknown experiment '" + std::string(experiment) + "'");
  }
  return cfg;
}

SolverOptions solver_options(const SolverConfig& c) {
  SolverOptions o;
  o.kind = c.solver;
  o.gmres.tol = c.gmres_tol;
  o.gmres.max_iter = c.gmres_maxit;
  return o;
}

LBOptions lb_options(const SolverConfig& c) {
  LBOptions o;
  o.kernel = c.kernel;
  o.solver = solver_options(c);
  o.project_mean = c.project_mean;
  o.jobs = 1;
  return o;
}

DiscretizationPtr discretization_from(const ExperimentConfig& config, int panels, int ntheta, int depth) {
  auto curve = std::make_shared<const GeneratingCurve>(curve_from_catalog(config.geometry));
  PanelMesh mesh = build_mesh(*curve, panels, config.discretization.order);
  if (depth > 0 && !config.discretization.refine_targets.empty())
    mesh = dyadic_refine(mesh, config.discretization.refine_targets, depth);
  return make_discretization(std::move(curve), std::move(mesh), ntheta);
}

// ---------------------------------------------------------------------------
// Records

std::vector<ConvergenceRow> ConvergenceRecord::series(std::string_view name, int ntheta) const {
  std::vector<ConvergenceRow> out;
  for (const auto& r : rows)
    if (r.series == name && (ntheta < 0 || r.ntheta == ntheta)) out.push_back(r);
  return out;
}

void ConvergenceRecord::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
    if (a.series != b.series) return a.series < b.series;
    if (a.ntheta != b.ntheta) return a.ntheta < b.ntheta;
    return a.sweep < b.sweep;
  });
}

void write_csv(std::ostream& out, const ConvergenceRecord& record) {
  out << "series," << record.sweep_name << ",ntheta,rel_l2_error,gmres_iterations,wall_seconds\n";
  for (const auto& r : record.rows)
    out << r.series << ',' << format_double(r.sweep) << ',' << r.ntheta << ',' << format_double(r.error) << ','
        << r.iterations << ',' << format_double(r.seconds) << '\n';
}

ConvergenceRecord read_csv(std::istream& in) {
  ConvergenceRecord record;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::config, "empty CSV");
  const auto head = split(line, ',');
  if (head.size() != 6 || head[0] != "series") throw Error(ErrorKind::config, "unexpected CSV header");
  record.sweep_name = std::string(head[1]);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw Error(ErrorKind::config, "CSV row needs 6 fields");
    record.rows.push_back({std::string(f[0]), parse_number<double>(f[1], "sweep"), parse_number<int>(f[2], "ntheta"),
                           parse_number<double>(f[3], "error"), parse_number<int>(f[4], "iterations"),
                           parse_number<double>(f[5], "seconds")});
  }
  return record;
}

nlohmann::json to_json(const ConvergenceRecord& record) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : record.rows)
    rows.push_back({{"series", r.series},
                    {record.sweep_name, r.sweep},
                    {"ntheta", r.ntheta},
                    {"rel_l2_error", r.error},
                    {"gmres_iterations", r.iterations},
                    {"wall_seconds", r.seconds}});
  return {{"sweep", record.sweep_name}, {"rows", rows}};
}

OrderFit estimate_order(const std::vector<double>& h, const std::vector<double>& error, double plateau) {
  if (h.size() != error.size()) throw Error(ErrorKind::parameter, "h and error differ in length");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (error[i] > plateau && h[i] > 0.0) {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(error[i]));
    }
  }
  const int n = static_cast<int>(x.size());
  if (n < 2) throw Error(ErrorKind::parameter, "need two rows above the plateau to fit an order");
  const Eigen::Map<const Eigen::VectorXd> X(x.data(), n);
  const Eigen::Map<const Eigen::VectorXd> Y(y.data(), n);
  const double xm = X.mean();
  const double ym = Y.mean();
  const double sxx = (X.array() - xm).square().sum();
  const double sxy = ((X.array() - xm) * (Y.array() - ym)).sum();
  if (!(sxx > 0.0)) throw Error(ErrorKind::parameter, "all h values coincide");
  OrderFit fit;
  fit.slope = sxy / sxx;
  fit.used = n;
  if (n > 2) {
    const double ss = ((Y.array() - ym) - fit.slope * (X.array() - xm)).square().sum();
    fit.stderr_ = std::sqrt(ss / (n - 2) / sxx);
  }
  return fit;
}

OrderFit estimate_order(const std::vector<ConvergenceRow>& rows, double plateau) {
  std::vector<double> h;
  std::vector<double> e;
  for (const auto& r : rows) {
    h.push_back(r.sweep);
    e.push_back(r.error);
  }
  return estimate_order(h, e, plateau);
}

// ---------------------------------------------------------------------------
// Smooth periodic ODE

PeriodicODEProblem smooth_ode_problem(KernelKind kernel) {
  PeriodicODEProblem prob;
  prob.period = 2.0 * std::numbers::pi;
  prob.p = [](double x) { return std::sin(3.0 * x) - 2.0; };
  prob.q = [](double x) { return 2.0 * std::sin(5.0 * x) - 3.0; };
  prob.f = [](double x) {
    const double c = std::cos(2.0 * x);
    const double s = std::sin(2.0 * x);
    return std::exp(s) * (4.0 * c * c - 4.0 * s);
  };
  prob.kernel = kernel;
  return prob;
}

OdeComparison run_ode_comparison(const ExperimentConfig& config) {
  const auto& d = config.discretization;
  if (d.panel_ladder.empty()) throw Error(ErrorKind::config, "empty panel ladder");
  const int finest = *std::max_element(d.panel_ladder.begin(), d.panel_ladder.end());
  const SolverOptions sopts = solver_options(config.solver);
  OdeComparison out;
  out.record.sweep_name = "n_s";

  std::mutex rows_mutex;
  for (KernelKind kind : {KernelKind::poisson, KernelKind::yukawa}) {
    const PeriodicODEProblem prob = smooth_ode_problem(kind);
    const double L = prob.period;

    const PanelMesh ref_mesh = build_mesh(L, d.reference_factor * finest, {}, d.order);
    AssemblyOptions ref_assembly;
    ref_assembly.dense_limit = std::max<Eigen::Index>(ref_assembly.dense_limit, ref_mesh.size());
    const auto ref = solve_ode(prob, ref_mesh, sopts, ref_assembly);

    const auto oracle = oracle::solve_periodic_collocation(L, prob.p, prob.q, prob.f, 256);
    double diff = 0.0;
    double scale = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = L * (i + 0.37) / 200.0;
      const double o = oracle.eval(x);
      diff = std::max(diff, std::abs(ref.eval_u(x) - o));
      scale = std::max(scale, std::abs(o));
    }
    const double discrepancy = diff / scale;
    (kind == KernelKind::poisson ? out.oracle_discrepancy_poisson : out.oracle_discrepancy_yukawa) = discrepancy;
    if (discrepancy > 1e-10)
      throw Error(ErrorKind::harness, "reference and collocation oracle disagree by " + format_double(discrepancy));

    parallel_for(d.panel_ladder.size(), config.solver.jobs, [&](std::size_t i) {
      const auto t0 = Clock::now();
      const PanelMesh mesh = build_mesh(L, d.panel_ladder[i], {}, d.order);
      const auto sol = solve_ode(prob, mesh, sopts);
      const Eigen::VectorXd u = sol.nodal_u();
      Eigen::VectorXd uref(mesh.size());
      for (Eigen::Index j = 0; j < mesh.size(); ++j) uref(j) = ref.eval_u(mesh.nodes()(j));
      ConvergenceRow row{std::string(to_string(kind)), static_cast<double>(mesh.size()), 0,
                         relative_l2(mesh.weights(), u, uref), sol.report().iterations, seconds_since(t0)};
      std::lock_guard lock(rows_mutex);
      out.record.rows.push_back(std::move(row));
    });

    const PanelMesh mesh = build_mesh(L, finest, {}, d.order);
    const NystromSystem system = assemble(prob, mesh);
    SolverOptions g = sopts;
    g.kind = SolverKind::gmres;
    SolverOptions dn = sopts;
    dn.kind = SolverKind::dense;
    const auto a = solve(system, prob, g);
    const auto b = solve(system, prob, dn);
    out.dense_gmres_gap = std::max(out.dense_gmres_gap, (a.nodal_u() - b.nodal_u()).norm() / b.nodal_u().norm());
  }
  out.record.sort();
  return out;
}

// ---------------------------------------------------------------------------
// Torus

ConvergenceRecord run_torus(const ExperimentConfig& config) {
  const auto& d = config.discretization;
  struct Point {
    int ntheta;
    int panels;
  };
  std::vector<Point> points;
  for (int nt : d.ntheta_ladder)
    for (int p : d.panel_ladder) points.push_back({nt, p});

  ConvergenceRecord record;
  record.sweep_name = "n_s";
  std::mutex rows_mutex;
  LBOptions opts = lb_options(config.solver);
  parallel_for(points.size(), config.solver.jobs, [&](std::size_t i) {
    const auto t0 = Clock::now();
    const auto disc = discretization_from(config, points[i].panels, points[i].ntheta, d.refine_depth);
    const auto mp = restrict_newtonian(disc, config.rhs.center);
    const auto sol = solve_lb(mp.f, opts);
    ConvergenceRow row{"torus", static_cast<double>(disc->npoints()), points[i].ntheta,
                       relative_l2_error(sol.field, mp.u_exact), sol.max_iterations(), seconds_since(t0)};
    std::lock_guard lock(rows_mutex);
    record.rows.push_back(std::move(row));
  });
  record.sort();
  return record;
}

// ---------------------------------------------------------------------------
// Square toroid

ManufacturedProblem smooth_cosine_problem(const DiscretizationPtr& disc) {
  const double pi = std::numbers::pi;
  const double k = pi / 2.0;
  const Eigen::Index ns = disc->npoints();
  Eigen::MatrixXd u(disc->ntheta, ns);
  Eigen::MatrixXd f(disc->ntheta, ns);
  for (Eigen::Index c = 0; c < ns; ++c) {
    const double s = disc->mesh.nodes()(c);
    const double r = disc->r(c);
    const double us = -std::cos(k * s) / (k * k);
    const double dus = std::sin(k * s) / k;
    const double d2us = std::cos(k * s);
    for (int j = 0; j < disc->ntheta; ++j) {
      const double t = std::sin(3.0 * disc->theta(j));
      u(j, c) = t * us;
      f(j, c) = t * (d2us + disc->dr(c) / r * dus - 9.0 / (r * r) * us);
    }
  }
  return {SurfaceScalarField::from_grid(disc, std::move(u)), SurfaceScalarField::from_grid(disc, std::move(f))};
}

std::vector<InterfaceJump> interface_jumps(const LBSolution& sol, const std::string& label,
                                           const std::vector<double>& singular_edges) {
  std::vector<InterfaceJump> out;
  const auto& curve = *sol.discretization()->curve;
  for (const auto& [n, mode] : sol.modes) {
    const double un = mode.nodal_u().cwiseAbs().maxCoeff();
    const double dun = mode.nodal_du().cwiseAbs().maxCoeff();
    if (!(un > 0.0) || !(dun > 0.0)) continue;
    for (double e : curve.breakpoints()) {
      const bool singular = std::any_of(singular_edges.begin(), singular_edges.end(),
                                        [&](double x) { return std::abs(x - e) <= 1e-13 * curve.length(); });
      const auto lim = singular ? mode.representation_limits(e) : mode.one_sided_limits(e);
      out.push_back({label, n, e, std::abs(lim.u_left - lim.u_right) / un, std::abs(lim.du_left - lim.du_right) / dun});
    }
  }
  return out;
}

SquareToroidReport run_square_toroid(const ExperimentConfig& config) {
  const auto t_start = Clock::now();
  const auto& d = config.discretization;
  const auto& rhs = config.rhs;
  const int nt = d.ntheta;
  LBOptions opts = lb_options(config.solver);
  SquareToroidReport report;
  report.record.sweep_name = "h_final";

  struct Point {
    double alpha;
    int depth;
  };
  std::vector<Point> points;
  for (double a : rhs.alphas)
    for (int depth : d.depth_ladder) points.push_back({a, depth});

  std::mutex mutex;
  parallel_for(points.size(), config.solver.jobs, [&](std::size_t i) {
    const auto t0 = Clock::now();
    const auto [alpha, depth] = points[i];
    const auto disc = discretization_from(config, d.panels, nt, depth);
    const auto fine = discretization_from(config, d.panels, nt, depth + d.reference_depth_offset);
    const auto src = power_singular_field(alpha, rhs.s0, rhs.m, disc->curve.get());
    const auto sol = solve_lb(SurfaceScalarField::sample(disc, src), opts);
    const auto ref = solve_lb(SurfaceScalarField::sample(fine, src), opts);
    ConvergenceRow row{alpha_label(alpha), disc->mesh.min_width(), nt, relative_l2_error(sol.field, resample(ref, disc)),
                       sol.max_iterations(), seconds_since(t0)};
    // |s - s0|^alpha is square integrable only for alpha > -1/2.
    std::vector<InterfaceJump> jumps;
    if (2.0 * alpha > -1.0)
      jumps = interface_jumps(sol, alpha_label(alpha) + ",depth=" + std::to_string(depth), {rhs.s0});
    std::lock_guard lock(mutex);
    report.record.rows.push_back(std::move(row));
    report.interfaces.insert(report.interfaces.end(), jumps.begin(), jumps.end());
  });
  report.record.sort();
  for (double a : rhs.alphas) report.fits.emplace_back(a, estimate_order(report.record.series(alpha_label(a))));

  {
    const auto disc = discretization_from(config, 1, nt, 0);
    const auto mp = smooth_cosine_problem(disc);
    const auto sol = solve_lb(mp.f, opts);
    report.smooth_exact_error = relative_l2_error(sol.field, mp.u_exact);
    const auto jumps = interface_jumps(sol, "smooth-exact", {});
    report.interfaces.insert(report.interfaces.end(), jumps.begin(), jumps.end());
  }
  {
    const auto direct = [](double theta, double s) { return std::sin(3.0 * theta) * std::cos(std::numbers::pi * s / 2.0); };
    const auto fine = discretization_from(config, 4 * std::max(d.panels, 1), nt, 0);
    const auto ref = solve_lb(SurfaceScalarField::sample(fine, direct), opts);
    for (int panels : {d.panels, 1}) {
      const auto disc = discretization_from(config, panels, nt, 0);
      const auto sol = solve_lb(SurfaceScalarField::sample(disc, direct), opts);
      const double err = relative_l2_error(sol.field, resample(ref, disc));
      (panels == 1 ? report.smooth_direct_one_panel : report.smooth_direct_error) = err;
      const auto jumps = interface_jumps(sol, "smooth-direct,panels=" + std::to_string(panels), {});
      report.interfaces.insert(report.interfaces.end(), jumps.begin(), jumps.end());
    }
  }
  report.seconds = seconds_since(t_start);
  return report;
}

nlohmann::json to_json(const SquareToroidReport& report) {
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& [a, f] : report.fits)
    fits.push_back({{"alpha", a}, {"order", f.slope}, {"stderr", f.stderr_}, {"rows", f.used}});
  double u_jump = 0.0;
  double du_jump = 0.0;
  for (const auto& j : report.interfaces) {
    u_jump = std::max(u_jump, j.u_jump);
    du_jump = std::max(du_jump, j.du_jump);
  }
  return {{"convergence", to_json(report.record)},
          {"fits", fits},
          {"smooth_exact_error", report.smooth_exact_error},
          {"smooth_direct_error", report.smooth_direct_error},
          {"smooth_direct_one_panel_error", report.smooth_direct_one_panel},
          {"max_interface_u_jump", u_jump},
          {"max_interface_du_jump", du_jump},
          {"wall_seconds", report.seconds}};
}

// ---------------------------------------------------------------------------
// Hodge

TangentVectorField hodge_test_field(const DiscretizationPtr& disc) {
  const Eigen::RowVectorXd r = disc->r.transpose();
  const Eigen::MatrixXd fs = Eigen::VectorXd::Ones(disc->ntheta) * r;
  const Eigen::MatrixXd ft = Eigen::VectorXd::Ones(disc->ntheta) * r.cwiseAbs2().cwiseInverse();
  return {SurfaceScalarField::from_grid(disc, fs), SurfaceScalarField::from_grid(disc, ft)};
}

HodgeReport run_hodge(const ExperimentConfig& config) {
  const auto& d = config.discretization;
  const auto disc = discretization_from(config, d.panels, d.ntheta, d.refine_depth);
  HodgeOptions opts;
  opts.lb = lb_options(config.solver);
  opts.lb.jobs = config.solver.jobs;
  const auto basis = harmonic_basis(disc);

  HodgeReport report;
  report.ntheta = d.ntheta;
  report.panels = d.panels;

  const TangentVectorField F = hodge_test_field(disc);
  const double fnorm = l2_norm(F);
  const auto h = hodge_decompose(F, opts);
  const auto proj = project_harmonic(h.harmonic, basis, fnorm);
  report.test_field_residual = proj.residual;
  report.coefficients = proj.coefficients;
  report.iterations = std::max(h.alpha.max_iterations(), h.beta.max_iterations());
  report.orthogonality = (std::abs(inner_product(h.curl_free, h.divergence_free)) +
                          std::abs(inner_product(h.curl_free, h.harmonic)) +
                          std::abs(inner_product(h.divergence_free, h.harmonic))) /
                         (fnorm * fnorm);

  for (int i = 0; i < 2; ++i) {
    const auto hb = hodge_decompose(basis[i], opts);
    report.basis_residuals[i] = l2_norm(hb.harmonic - basis[i]) / l2_norm(basis[i]);
  }

  // grad phi for phi = sin 2 theta cos(pi s / 2), which is continuous across edges.
  const double k = std::numbers::pi / 2.0;
  const auto& curve = *disc->curve;
  const auto grad_s = SurfaceScalarField::sample(disc, [&](double t, double s) { return -k * std::sin(2 * t) * std::sin(k * s); });
  const auto grad_t = SurfaceScalarField::sample(
      disc, [&](double t, double s) { return 2.0 * std::cos(2 * t) * std::cos(k * s) / curve.eval(s).r; });
  const TangentVectorField G{grad_s, grad_t};
  const auto hg = hodge_decompose(G, opts);
  report.gradient_residual = l2_norm(hg.harmonic) / l2_norm(G);
  return report;
}

nlohmann::json to_json(const HodgeReport& r) {
  return {{"ntheta", r.ntheta},
          {"panels_per_face", r.panels},
          {"test_field_residual", r.test_field_residual},
          {"basis_residuals", r.basis_residuals},
          {"gradient_residual", r.gradient_residual},
          {"orthogonality", r.orthogonality},
          {"harmonic_coefficients", r.coefficients},
          {"gmres_iterations", r.iterations}};
}

}  // namespace lbsr
