#include "lbsr/surface_solver.hpp"

#include "lbsr/errors.hpp"
#include "lbsr/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

namespace lbsr {

int LBSolution::max_iterations() const {
  int it = 0;
  for (const auto& [n, m] : modes) it = std::max(it, m.report().iterations);
  return it;
}

int LBSolution::total_iterations() const {
  int it = 0;
  for (const auto& [n, m] : modes) it += m.report().iterations;
  return it;
}

namespace {

// Coefficient row of mode n >= 0 in the stack; n = N/2 maps to the unpaired mode.
Eigen::VectorXcd mode_data(const FourierStack& stack, int n) {
  const int stored = (n == stack.ntheta() / 2) ? stack.nyquist() : n;
  return stack.mode(stored).transpose();
}

void store_mode(FourierStack& stack, int n, const Eigen::VectorXcd& values) {
  if (n == stack.ntheta() / 2) {
    stack.mode(stack.nyquist()) = values.transpose();
    return;
  }
  stack.mode(n) = values.transpose();
  if (n > 0) stack.mode(-n) = values.conjugate().transpose();
}

}  // namespace

LBSolution solve_lb(const SurfaceScalarField& f_in, const LBOptions& options) {
  const DiscretizationPtr& disc = f_in.discretization();
  if (!(disc->curve->min_radius() > 0.0)) throw Error(ErrorKind::geometry, "surface touches the rotation axis");

  SurfaceScalarField f = f_in;
  const double mean = f.integral();
  const double scale = disc->weights.cwiseProduct(f.grid().cwiseAbs()).sum();
  if (std::abs(mean) > options.mean_tol * std::max(scale, 1e-300)) {
    if (!options.project_mean)
      throw Error(ErrorKind::solvability, "right-hand side does not have surface mean zero");
  }
  if (options.project_mean && scale > 0.0) {
    Eigen::MatrixXd grid = f.grid();
    grid.array() -= mean / disc->area();
    f = SurfaceScalarField::from_grid(disc, std::move(grid));
  }

  const FourierStack& fs = f.stack();
  const int half = disc->ntheta / 2;
  const double fmax = f.grid().cwiseAbs().maxCoeff();
  std::vector<int> active;
  for (int n = 0; n <= half; ++n) {
    if (fmax > 0.0 && mode_data(fs, n).cwiseAbs().maxCoeff() > options.mode_cutoff * fmax) active.push_back(n);
  }

  auto layer = std::make_shared<const LayerPotential>(disc->mesh, options.kernel,
                                                      disc->npoints() <= options.assembly.dense_limit);
  const Eigen::VectorXd p = disc->dr.cwiseQuotient(disc->r);
  const Eigen::VectorXd inv_r2 = disc->r.cwiseAbs2().cwiseInverse();

  LBSolution sol;
  std::vector<std::optional<ComplexModeSolution>> results(active.size());
  parallel_for(active.size(), options.jobs, [&](std::size_t idx) {
    const int n = active[idx];
    std::optional<NodalConstraint> constraint;
    if (n == 0) constraint = NodalConstraint{disc->r, 0.0};
    const Eigen::VectorXd q = -static_cast<double>(n) * n * inv_r2;
    NystromSystem system(layer, p, q, std::move(constraint), options.assembly);
    results[idx] = solve<std::complex<double>>(system, mode_data(fs, n), options.solver);
  });

  FourierStack us(disc->ntheta, disc->npoints());
  for (std::size_t idx = 0; idx < active.size(); ++idx) {
    const int n = active[idx];
    store_mode(us, n, results[idx]->nodal_u());
    sol.modes.emplace(n, std::move(*results[idx]));
  }
  sol.field = SurfaceScalarField::from_stack(disc, std::move(us));
  return sol;
}

TangentVectorField surface_gradient(const LBSolution& sol) {
  const DiscretizationPtr& disc = sol.discretization();
  FourierStack ds(disc->ntheta, disc->npoints());
  FourierStack dt(disc->ntheta, disc->npoints());
  const int half = disc->ntheta / 2;
  for (const auto& [n, mode] : sol.modes) {
    store_mode(ds, n, mode.nodal_du());
    if (n != 0 && n != half) {
      const Eigen::VectorXcd u = mode.nodal_u();
      store_mode(dt, n, (std::complex<double>(0.0, n) * u.array() / disc->r.array()).matrix());
    }
  }
  return {SurfaceScalarField::from_stack(disc, std::move(ds)), SurfaceScalarField::from_stack(disc, std::move(dt))};
}

SurfaceScalarField resample(const LBSolution& sol, const DiscretizationPtr& target) {
  const DiscretizationPtr& src = sol.discretization();
  if (target->ntheta != src->ntheta) throw Error(ErrorKind::parameter, "resample keeps N_theta fixed");
  FourierStack us(target->ntheta, target->npoints());
  const Eigen::VectorXd& x = target->mesh.nodes();
  for (const auto& [n, mode] : sol.modes) {
    Eigen::VectorXcd values(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) values(i) = mode.eval_u(x(i));
    store_mode(us, n, values);
  }
  return SurfaceScalarField::from_stack(target, std::move(us));
}

Eigen::Vector3d surface_normal(double theta, double dr, double dz) {
  return {-dz * std::cos(theta), -dz * std::sin(theta), dr};
}

Eigen::Vector3d surface_point(double theta, double r, double z) {
  return {r * std::cos(theta), r * std::sin(theta), z};
}

ManufacturedProblem restrict_newtonian(const DiscretizationPtr& disc, const Eigen::Vector3d& center) {
  const Eigen::Index ns = disc->npoints();
  Eigen::MatrixXd v(disc->ntheta, ns);
  Eigen::MatrixXd f(disc->ntheta, ns);
  for (Eigen::Index c = 0; c < ns; ++c) {
    const double s = disc->mesh.nodes()(c);
    const CurvePoint pt = disc->curve->eval(s);
    const double H = mean_curvature(*disc->curve, s);
    for (int j = 0; j < disc->ntheta; ++j) {
      const double th = disc->theta(j);
      const Eigen::Vector3d d = surface_point(th, pt.r, pt.z) - center;
      const double rho = d.norm();
      if (!(rho > 1e-12)) throw Error(ErrorKind::singular_data, "potential center lies on the surface");
      const Eigen::Vector3d n = surface_normal(th, pt.dr, pt.dz);
      const double dn = d.dot(n);
      const double rho3 = rho * rho * rho;
      const double dv_dn = dn / rho3;
      const double d2v_dn2 = 1.0 / rho3 - 3.0 * dn * dn / (rho3 * rho * rho);
      v(j, c) = -1.0 / rho;
      f(j, c) = -2.0 * H * dv_dn - d2v_dn2;
    }
  }
  const double mean = disc->weights.cwiseProduct(v).sum() / disc->area();
  v.array() -= mean;
  return {SurfaceScalarField::from_grid(disc, std::move(v)), SurfaceScalarField::from_grid(disc, std::move(f))};
}

TangentVectorField newtonian_tangential_gradient(const DiscretizationPtr& disc, const Eigen::Vector3d& center) {
  const Eigen::Index ns = disc->npoints();
  Eigen::MatrixXd gs(disc->ntheta, ns);
  Eigen::MatrixXd gt(disc->ntheta, ns);
  for (Eigen::Index c = 0; c < ns; ++c) {
    const CurvePoint pt = disc->curve->eval(disc->mesh.nodes()(c));
    for (int j = 0; j < disc->ntheta; ++j) {
      const double th = disc->theta(j);
      const Eigen::Vector3d d = surface_point(th, pt.r, pt.z) - center;
      const Eigen::Vector3d grad = d / std::pow(d.norm(), 3);
      const Eigen::Vector3d s_hat(pt.dr * std::cos(th), pt.dr * std::sin(th), pt.dz);
      const Eigen::Vector3d t_hat(-std::sin(th), std::cos(th), 0.0);
      gs(j, c) = grad.dot(s_hat);
      gt(j, c) = grad.dot(t_hat);
    }
  }
  return {SurfaceScalarField::from_grid(disc, std::move(gs)), SurfaceScalarField::from_grid(disc, std::move(gt))};
}

double PowerSingularSource::operator()(double theta, double s) const {
  return std::sin(m * theta) * std::pow(std::abs(s - s0), alpha);
}

PowerSingularSource power_singular_field(double alpha, double s0, int m, const GeneratingCurve* curve) {
  if (!(alpha > -1.0)) throw Error(ErrorKind::parameter, "exponent must exceed -1 for integrability");
  PowerSingularSource src{alpha, s0, m, std::nullopt};
  if (curve && !curve->is_breakpoint(s0))
    src.warning = "singular point is not a surface edge; refinement targets may not align with it";
  return src;
}

}  // namespace lbsr
