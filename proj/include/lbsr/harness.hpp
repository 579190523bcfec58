#ifndef LBSR_HARNESS_HPP
#define LBSR_HARNESS_HPP

#include "lbsr/geometry.hpp"
#include "lbsr/hodge.hpp"
#include "lbsr/kernels.hpp"
#include "lbsr/periodic_ode.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lbsr {

struct DiscretizationConfig {
  int order = 16;
  int panels = 2;  // per smooth segment of the curve
  std::vector<int> panel_ladder{2, 4, 8, 16, 32};
  int ntheta = 16;
  std::vector<int> ntheta_ladder{4, 8, 16, 32, 64};
  std::vector<double> refine_targets;
  int refine_depth = 0;
  std::vector<int> depth_ladder{2, 3, 4, 5, 6, 7, 8, 9, 10};
  int reference_depth_offset = 4;
  int reference_factor = 8;  // reference panels = factor * finest ladder entry

  bool operator==(const DiscretizationConfig&) const = default;
};

struct RhsConfig {
  /// newtonian | power-singular | smooth-cosine | smooth-cosine-exact
  std::string kind = "newtonian";
  Eigen::Vector3d center{0.0, 0.5, 0.5};
  double alpha = -0.5;
  std::vector<double> alphas{-1.0 / 3.0, -0.5, -0.75};
  double s0 = 2.0;
  int m = 3;

  bool operator==(const RhsConfig&) const = default;
};

struct SolverConfig {
  KernelKind kernel = KernelKind::poisson;
  SolverKind solver = SolverKind::gmres;
  double gmres_tol = 1e-14;
  int gmres_maxit = 0;
  int jobs = 1;
  bool project_mean = false;

  bool operator==(const SolverConfig&) const = default;
};

/// Complete description of one run. Text form: sections [geometry],
/// [discretization], [rhs], [solver], [output] of `key = value` lines; lists
/// are space separated, vertices are `r z` pairs separated by commas, and
/// `#` starts a comment.
struct ExperimentConfig {
  CurveSpec geometry{"unit-square-toroid", {}, {}};
  DiscretizationConfig discretization;
  RhsConfig rhs;
  SolverConfig solver;
  std::string output;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::string_view text);
std::string format_config(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Preset for each experiment: ode-compare, torus, square-toroid, hodge.
ExperimentConfig default_config(std::string_view experiment);

LBOptions lb_options(const SolverConfig& config);
SolverOptions solver_options(const SolverConfig& config);

struct ConvergenceRow {
  std::string series;
  double sweep = 0.0;  // N_s, or h_final for refinement sweeps
  int ntheta = 0;
  double error = 0.0;
  int iterations = 0;
  double seconds = 0.0;

  bool operator==(const ConvergenceRow&) const = default;
};

struct ConvergenceRecord {
  std::string sweep_name = "n_s";
  std::vector<ConvergenceRow> rows;

  /// Rows of one series with the given ntheta (any ntheta when negative).
  std::vector<ConvergenceRow> series(std::string_view name, int ntheta = -1) const;
  void sort();
};

/// Header: series,<sweep_name>,ntheta,rel_l2_error,gmres_iterations,wall_seconds.
void write_csv(std::ostream& out, const ConvergenceRecord& record);
ConvergenceRecord read_csv(std::istream& in);
nlohmann::json to_json(const ConvergenceRecord& record);

/// Shortest round-trip decimal form.
std::string format_double(double x);

struct OrderFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  int used = 0;
};

/// Least-squares slope of log(error) against log(h) over rows whose error is
/// above `plateau`.
OrderFit estimate_order(const std::vector<double>& h, const std::vector<double>& error, double plateau = 0.0);
OrderFit estimate_order(const std::vector<ConvergenceRow>& rows, double plateau = 0.0);

struct OdeComparison {
  ConvergenceRecord record;
  /// Max |reference - oracle| / max |oracle| per kernel.
  double oracle_discrepancy_poisson = 0.0;
  double oracle_discrepancy_yukawa = 0.0;
  /// Dense versus GMRES on the finest ladder system, relative.
  double dense_gmres_gap = 0.0;
};

/// u'' + (sin 3x - 2) u' + (2 sin 5x - 3) u = (e^{sin 2x})'' on [0, 2 pi).
PeriodicODEProblem smooth_ode_problem(KernelKind kernel);
OdeComparison run_ode_comparison(const ExperimentConfig& config);

ConvergenceRecord run_torus(const ExperimentConfig& config);

struct InterfaceJump {
  std::string solve;
  int mode = 0;
  double edge = 0.0;
  double u_jump = 0.0;   // relative to max |u_n|
  double du_jump = 0.0;  // relative to max |u_n'|
};

struct SquareToroidReport {
  ConvergenceRecord record;  // series "alpha=<a>", sweep h_final
  std::vector<std::pair<double, OrderFit>> fits;
  double smooth_exact_error = 0.0;       // anti-derivative solution, 1 panel per face
  double smooth_direct_error = 0.0;      // direct f, configured panels per face vs 4x finer
  double smooth_direct_one_panel = 0.0;  // same with 1 panel per face
  std::vector<InterfaceJump> interfaces;
  double seconds = 0.0;
};

/// Both the anti-derivative pair u = -(4/pi^2) sin 3 theta cos(pi s / 2) and
/// its Laplace-Beltrami image on a curve.
ManufacturedProblem smooth_cosine_problem(const DiscretizationPtr& disc);

/// Edge jumps of every solved mode. Edges where the data is singular use the
/// representation limits; other edges use the panel interpolants.
std::vector<InterfaceJump> interface_jumps(const LBSolution& sol, const std::string& label,
                                           const std::vector<double>& singular_edges);

SquareToroidReport run_square_toroid(const ExperimentConfig& config);

struct HodgeReport {
  int ntheta = 0;
  int panels = 0;
  double test_field_residual = 0.0;
  std::array<double, 2> basis_residuals{};
  double gradient_residual = 0.0;
  double orthogonality = 0.0;  // sum of |cross inner products| / ||F||^2
  std::array<double, 2> coefficients{};
  int iterations = 0;
};

/// F = r s_hat + r^{-2} theta_hat.
TangentVectorField hodge_test_field(const DiscretizationPtr& disc);
HodgeReport run_hodge(const ExperimentConfig& config);
nlohmann::json to_json(const HodgeReport& report);
nlohmann::json to_json(const SquareToroidReport& report);

/// Builds the curve and mesh the config describes (refinement included).
DiscretizationPtr discretization_from(const ExperimentConfig& config, int panels, int ntheta, int depth);

}  // namespace lbsr

#endif  // LBSR_HARNESS_HPP
