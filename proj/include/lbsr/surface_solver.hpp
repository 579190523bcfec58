#ifndef LBSR_SURFACE_SOLVER_HPP
#define LBSR_SURFACE_SOLVER_HPP

#include "lbsr/fields.hpp"
#include "lbsr/periodic_ode.hpp"

#include <Eigen/Core>

#include <complex>
#include <map>
#include <optional>
#include <string>

namespace lbsr {

struct LBOptions {
  KernelKind kernel = KernelKind::poisson;
  SolverOptions solver;
  AssemblyOptions assembly;
  /// Allowed |int f| / int |f| before the data is rejected as outside the range.
  double mean_tol = 1e-10;
  /// Remove the discrete surface mean of f instead of rejecting it.
  bool project_mean = false;
  /// Modes with max_s |f_n| below cutoff * max |f| are not solved.
  double mode_cutoff = 1e-15;
  int jobs = 1;
};

using ComplexModeSolution = ModeSolution<std::complex<double>>;

/// Solution of Delta_Gamma u = f with the per-mode densities kept for
/// derivative evaluation. Only modes n >= 0 are stored; u_{-n} = conj(u_n).
/// Key N_theta / 2 holds the unpaired mode -N_theta / 2.
struct LBSolution {
  SurfaceScalarField field;
  std::map<int, ComplexModeSolution> modes;

  const DiscretizationPtr& discretization() const { return field.discretization(); }
  int max_iterations() const;
  int total_iterations() const;
};

/// Solves mode by mode: for n != 0, u_n'' + (r'/r) u_n' - (n^2/r^2) u_n = f_n;
/// for n = 0 the same with the constraint int u_0 r ds = 0.
LBSolution solve_lb(const SurfaceScalarField& f, const LBOptions& options = {});

/// grad u = u_s s_hat + (1/r) u_theta theta_hat, with u_s from S' sigma.
TangentVectorField surface_gradient(const LBSolution& sol);

/// Resamples a solution on another discretization of the same curve by
/// evaluating every mode's representation at the new nodes.
SurfaceScalarField resample(const LBSolution& sol, const DiscretizationPtr& target);

/// Outward unit normal n = s_hat x theta_hat at (theta, s-node values).
Eigen::Vector3d surface_normal(double theta, double dr, double dz);
Eigen::Vector3d surface_point(double theta, double r, double z);

struct ManufacturedProblem {
  SurfaceScalarField u_exact;
  SurfaceScalarField f;
};

/// v(x) = -1 / |x - center| restricted to the surface; u_exact is v minus its
/// discrete surface mean and f = -2 H dv/dn - d2v/dn2 (v is harmonic).
ManufacturedProblem restrict_newtonian(const DiscretizationPtr& disc, const Eigen::Vector3d& center);

/// Tangential projection of grad v for the same potential.
TangentVectorField newtonian_tangential_gradient(const DiscretizationPtr& disc, const Eigen::Vector3d& center);

/// f(theta, s) = sin(m theta) |s - s0|^alpha, singular at s0.
struct PowerSingularSource {
  double alpha = -0.5;
  double s0 = 0.0;
  int m = 3;
  std::optional<std::string> warning;

  double operator()(double theta, double s) const;
};

PowerSingularSource power_singular_field(double alpha, double s0, int m, const GeneratingCurve* curve = nullptr);

}  // namespace lbsr

#endif  // LBSR_SURFACE_SOLVER_HPP
