#include "lbsr/errors.hpp"
#include "lbsr/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

using namespace lbsr;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> kernel;
  std::optional<int> order;
  std::optional<int> panels;
  std::optional<int> refine_depth;
  std::optional<double> alpha;
  std::optional<int> ntheta;
  std::optional<double> gmres_tol;
  std::optional<int> gmres_maxit;
  std::optional<std::string> solver;
  std::optional<int> jobs;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Experiment config file (sectioned key = value)");
  cmd->add_option("--kernel", o.kernel, "Green's function: poisson | yukawa");
  cmd->add_option("--order", o.order, "Gauss-Legendre nodes per panel");
  cmd->add_option("--panels", o.panels, "Panels per smooth segment (finest ladder entry for sweeps)");
  cmd->add_option("--refine-depth", o.refine_depth, "Dyadic refinement depth (deepest ladder entry for sweeps)");
  cmd->add_option("--alpha", o.alpha, "Exponent of the power-singular source");
  cmd->add_option("--ntheta", o.ntheta, "Azimuthal grid size (finest ladder entry for sweeps)");
  cmd->add_option("--gmres-tol", o.gmres_tol, "GMRES relative residual tolerance");
  cmd->add_option("--gmres-maxit", o.gmres_maxit, "Krylov dimension per GMRES cycle, 0 for automatic");
  cmd->add_option("--solver", o.solver, "Linear solver: gmres | dense");
  cmd->add_option("--jobs", o.jobs, "Worker threads");
  cmd->add_option("--out", o.out, "CSV output path; a .json summary is written next to it");
}

std::vector<int> doubling(int from, int to) {
  std::vector<int> out;
  for (int v = from; v <= to; v *= 2) out.push_back(v);
  if (out.empty()) out.push_back(to);
  return out;
}

ExperimentConfig resolve(const Overrides& o, std::string_view preset) {
  ExperimentConfig cfg = o.config.empty() ? default_config(preset) : load_config(o.config);
  auto& d = cfg.discretization;
  auto& s = cfg.solver;
  if (o.kernel) s.kernel = parse_kernel(*o.kernel);
  if (o.order) d.order = *o.order;
  if (o.panels) {
    d.panels = *o.panels;
    d.panel_ladder = doubling(std::min(2, *o.panels), *o.panels);
  }
  if (o.refine_depth) {
    d.refine_depth = *o.refine_depth;
    d.depth_ladder.clear();
    for (int k = std::min(2, *o.refine_depth); k <= *o.refine_depth; ++k) d.depth_ladder.push_back(k);
  }
  if (o.alpha) {
    cfg.rhs.alpha = *o.alpha;
    cfg.rhs.alphas = {*o.alpha};
  }
  if (o.ntheta) {
    d.ntheta = *o.ntheta;
    d.ntheta_ladder = doubling(std::min(4, *o.ntheta), *o.ntheta);
  }
  if (o.gmres_tol) s.gmres_tol = *o.gmres_tol;
  if (o.gmres_maxit) s.gmres_maxit = *o.gmres_maxit;
  if (o.solver) {
    if (*o.solver != "gmres" && *o.solver != "dense") throw Error(ErrorKind::config, "unknown solver " + *o.solver);
    s.solver = *o.solver == "dense" ? SolverKind::dense : SolverKind::gmres;
  }
  if (o.jobs) s.jobs = *o.jobs;
  if (o.out) cfg.output = *o.out;
  return cfg;
}

void emit(const std::string& path, const std::string& csv, const nlohmann::json& summary) {
  if (csv.empty()) {
    if (path.empty()) {
      std::cout << summary.dump(2) << '\n';
    } else {
      std::ofstream(std::filesystem::path(path).replace_extension(".json")) << summary.dump(2) << '\n';
    }
    return;
  }
  if (path.empty()) {
    std::cout << csv;
    std::cerr << summary.dump(2) << '\n';
    return;
  }
  std::ofstream(path) << csv;
  std::filesystem::path json_path(path);
  json_path.replace_extension(".json");
  std::ofstream(json_path) << summary.dump(2) << '\n';
  std::cerr << summary.dump(2) << '\n';
}

std::string csv_of(const ConvergenceRecord& record) {
  std::ostringstream out;
  write_csv(out, record);
  return out.str();
}

int ode_solve(const Overrides& o) {
  const ExperimentConfig cfg = resolve(o, "ode-compare");
  const auto prob = smooth_ode_problem(cfg.solver.kernel);
  const PanelMesh mesh = build_mesh(prob.period, cfg.discretization.panels, {}, cfg.discretization.order);
  const auto sol = solve_ode(prob, mesh, solver_options(cfg.solver));
  const Eigen::VectorXd u = sol.nodal_u();
  const Eigen::VectorXd du = sol.nodal_du();
  std::ostringstream csv;
  csv << "s,u,du\n";
  for (Eigen::Index i = 0; i < mesh.size(); ++i)
    csv << format_double(mesh.nodes()(i)) << ',' << format_double(u(i)) << ',' << format_double(du(i)) << '\n';
  emit(cfg.output, csv.str(),
       {{"kernel", to_string(cfg.solver.kernel)},
        {"n_s", mesh.size()},
        {"gmres_iterations", sol.report().iterations},
        {"residual", sol.report().residual}});
  return 0;
}

int ode_compare(const Overrides& o) {
  const ExperimentConfig cfg = resolve(o, "ode-compare");
  const auto cmp = run_ode_comparison(cfg);
  emit(cfg.output, csv_of(cmp.record),
       {{"convergence", to_json(cmp.record)},
        {"oracle_discrepancy", {{"poisson", cmp.oracle_discrepancy_poisson}, {"yukawa", cmp.oracle_discrepancy_yukawa}}},
        {"dense_gmres_gap", cmp.dense_gmres_gap}});
  return 0;
}

int lb_solve(const Overrides& o) {
  ExperimentConfig cfg = resolve(o, "torus");
  const auto& d = cfg.discretization;
  const auto disc = discretization_from(cfg, d.panels, d.ntheta, d.refine_depth);
  std::optional<SurfaceScalarField> exact;
  SurfaceScalarField f;
  const auto& kind = cfg.rhs.kind;
  if (kind == "newtonian") {
    auto mp = restrict_newtonian(disc, cfg.rhs.center);
    exact = std::move(mp.u_exact);
    f = std::move(mp.f);
  } else if (kind == "smooth-cosine-exact") {
    auto mp = smooth_cosine_problem(disc);
    exact = std::move(mp.u_exact);
    f = std::move(mp.f);
  } else if (kind == "power-singular") {
    const auto src = power_singular_field(cfg.rhs.alpha, cfg.rhs.s0, cfg.rhs.m, disc->curve.get());
    if (src.warning) std::cerr << "warning: " << *src.warning << '\n';
    f = SurfaceScalarField::sample(disc, src);
  } else if (kind == "smooth-cosine") {
    const int m = cfg.rhs.m;
    f = SurfaceScalarField::sample(disc, [m](double t, double s) { return std::sin(m * t) * std::cos(std::numbers::pi * s / 2); });
  } else {
    throw Error(ErrorKind::config, "lb-solve does not know rhs kind '" + kind + "'");
  }
  LBOptions opts = lb_options(cfg.solver);
  opts.jobs = cfg.solver.jobs;
  const auto sol = solve_lb(f, opts);

  std::ostringstream csv;
  csv << "theta,s,u,f\n";
  for (int j = 0; j < disc->ntheta; ++j)
    for (Eigen::Index c = 0; c < disc->npoints(); ++c)
      csv << format_double(disc->theta(j)) << ',' << format_double(disc->mesh.nodes()(c)) << ','
          << format_double(sol.field.grid()(j, c)) << ',' << format_double(f.grid()(j, c)) << '\n';
  nlohmann::json summary = {{"curve", cfg.geometry.name},
                            {"rhs", kind},
                            {"ntheta", d.ntheta},
                            {"n_s", disc->npoints()},
                            {"modes_solved", sol.modes.size()},
                            {"max_gmres_iterations", sol.max_iterations()}};
  if (exact) summary["rel_l2_error"] = relative_l2_error(sol.field, *exact);
  emit(cfg.output, csv.str(), summary);
  return 0;
}

int converge(const Overrides& o, const std::string& study) {
  if (study == "torus") {
    const ExperimentConfig cfg = resolve(o, "torus");
    const auto record = run_torus(cfg);
    emit(cfg.output, csv_of(record), to_json(record));
    return 0;
  }
  if (study == "square-toroid") {
    const ExperimentConfig cfg = resolve(o, "square-toroid");
    const auto report = run_square_toroid(cfg);
    emit(cfg.output, csv_of(report.record), to_json(report));
    return 0;
  }
  throw Error(ErrorKind::config, "unknown study '" + study + "'");
}

int hodge(const Overrides& o, const std::string& field) {
  const ExperimentConfig cfg = resolve(o, "hodge");
  if (field == "all") {
    const auto report = run_hodge(cfg);
    const auto j = to_json(report);
    emit(cfg.output, "", j);
    return 0;
  }
  const auto& d = cfg.discretization;
  const auto disc = discretization_from(cfg, d.panels, d.ntheta, d.refine_depth);
  const auto basis = harmonic_basis(disc);
  TangentVectorField F;
  if (field == "test-field") {
    F = hodge_test_field(disc);
  } else if (field == "basis-1" || field == "basis-2") {
    F = basis[field == "basis-1" ? 0 : 1];
  } else if (field == "gradient") {
    const double k = std::numbers::pi / 2.0;
    const auto& curve = *disc->curve;
    F = {SurfaceScalarField::sample(disc, [&](double t, double s) { return -k * std::sin(2 * t) * std::sin(k * s); }),
         SurfaceScalarField::sample(
             disc, [&](double t, double s) { return 2.0 * std::cos(2 * t) * std::cos(k * s) / curve.eval(s).r; })};
  } else {
    throw Error(ErrorKind::config, "unknown field '" + field + "'");
  }
  HodgeOptions opts;
  opts.lb = lb_options(cfg.solver);
  opts.lb.jobs = cfg.solver.jobs;
  const auto h = hodge_decompose(F, opts);
  const double fnorm = l2_norm(F);
  const auto proj = project_harmonic(h.harmonic, basis, fnorm);
  std::ostringstream csv;
  csv << "theta,s,harmonic_s,harmonic_theta\n";
  for (int j = 0; j < disc->ntheta; ++j)
    for (Eigen::Index c = 0; c < disc->npoints(); ++c)
      csv << format_double(disc->theta(j)) << ',' << format_double(disc->mesh.nodes()(c)) << ','
          << format_double(h.harmonic.s.grid()(j, c)) << ',' << format_double(h.harmonic.theta.grid()(j, c)) << '\n';
  emit(cfg.output, csv.str(),
       {{"field", field},
        {"ntheta", d.ntheta},
        {"panels_per_face", d.panels},
        {"relative_norms",
         {{"curl_free", l2_norm(h.curl_free) / fnorm},
          {"divergence_free", l2_norm(h.divergence_free) / fnorm},
          {"harmonic", l2_norm(h.harmonic) / fnorm}}},
        {"harmonic_coefficients", proj.coefficients},
        {"projection_residual", proj.residual}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace-Beltrami solver on surfaces of revolution"};
  app.require_subcommand(1);

  Overrides o;
  auto* ode_solve_cmd = app.add_subcommand("ode-solve", "Solve the smooth periodic test ODE once and print nodal u, u'");
  add_common(ode_solve_cmd, o);
  auto* ode_compare_cmd = app.add_subcommand("ode-compare", "Convergence of both kernels on the smooth periodic ODE");
  add_common(ode_compare_cmd, o);
  auto* lb_cmd = app.add_subcommand("lb-solve", "Solve the Laplace-Beltrami problem described by a config");
  add_common(lb_cmd, o);
  std::string study;
  auto* conv_cmd = app.add_subcommand("converge", "Convergence study: torus | square-toroid");
  conv_cmd->add_option("study", study, "torus | square-toroid")->required();
  add_common(conv_cmd, o);
  std::string field = "test-field";
  auto* hodge_cmd = app.add_subcommand("hodge", "Hodge decomposition of a tangential field on the square toroid");
  hodge_cmd->add_option("--field", field, "test-field | basis-1 | basis-2 | gradient | all");
  add_common(hodge_cmd, o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*ode_solve_cmd) return ode_solve(o);
    if (*ode_compare_cmd) return ode_compare(o);
    if (*lb_cmd) return lb_solve(o);
    if (*conv_cmd) return converge(o, study);
    if (*hodge_cmd) return hodge(o, field);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
