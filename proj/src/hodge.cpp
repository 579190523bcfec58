#include "lbsr/hodge.hpp"

#include "lbsr/errors.hpp"
#include "lbsr/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace lbsr {

namespace {

// Block-diagonal s-derivative on the mesh nodes.
Eigen::MatrixXd panel_derivative_blocks(const PanelMesh& mesh, bool chebyshev) {
  const Eigen::Index k = mesh.order();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k * mesh.num_panels());
  for (Eigen::Index i = 0; i < mesh.num_panels(); ++i) {
    const Eigen::VectorXd x = mesh.panel_nodes(i);
    if (!chebyshev) {
      D.middleCols(i * k, k) = differentiation_matrix(x);
      continue;
    }
    const Panel p = mesh.panel(i);
    Eigen::VectorXd cheb(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double t = std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * k));
      cheb(j) = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * t;
    }
    D.middleCols(i * k, k) = interpolation_matrix(cheb, x) * differentiation_matrix(cheb) * interpolation_matrix(x, cheb);
  }
  return D;
}

}  // namespace

SurfaceScalarField surface_divergence(const TangentVectorField& F, const DivergenceOptions& options) {
  const DiscretizationPtr& disc = F.discretization();
  const PanelMesh& mesh = disc->mesh;
  const Eigen::Index k = mesh.order();
  const Eigen::MatrixXd D = panel_derivative_blocks(mesh, options.chebyshev_resample);

  const Eigen::MatrixXd rfs = F.s.grid() * disc->r.asDiagonal();
  Eigen::MatrixXd div(disc->ntheta, disc->npoints());
  for (Eigen::Index i = 0; i < mesh.num_panels(); ++i)
    div.middleCols(i * k, k) = rfs.middleCols(i * k, k) * D.middleCols(i * k, k).transpose();
  div += synthesize(theta_derivative(F.theta.stack()));
  div = div * disc->r.cwiseInverse().asDiagonal();
  return SurfaceScalarField::from_grid(disc, std::move(div));
}

TangentVectorField rotate(const TangentVectorField& F) { return {-F.theta, F.s}; }

std::array<TangentVectorField, 2> harmonic_basis(const DiscretizationPtr& disc) {
  const Eigen::MatrixXd inv_r = Eigen::VectorXd::Ones(disc->ntheta) * disc->r.cwiseInverse().transpose();
  const SurfaceScalarField h = SurfaceScalarField::from_grid(disc, inv_r);
  const SurfaceScalarField zero = SurfaceScalarField::zero(disc);
  return {TangentVectorField{h, zero}, TangentVectorField{zero, -h}};
}

HodgeDecomposition hodge_decompose(const TangentVectorField& F, const HodgeOptions& options) {
  LBOptions lb = options.lb;
  lb.project_mean = true;
  const int inner_jobs = std::max(1, lb.jobs / 2);
  const int outer_jobs = lb.jobs > 1 ? 2 : 1;
  lb.jobs = inner_jobs;

  const SurfaceScalarField div_f = surface_divergence(F, options.divergence);
  const SurfaceScalarField div_nf = -surface_divergence(rotate(F), options.divergence);
  std::array<LBSolution, 2> sols;
  parallel_for(2, outer_jobs, [&](std::size_t i) { sols[i] = solve_lb(i == 0 ? div_f : div_nf, lb); });

  HodgeDecomposition out{std::move(sols[0]), std::move(sols[1]), {}, {}, {}};
  out.curl_free = surface_gradient(out.alpha);
  out.divergence_free = rotate(surface_gradient(out.beta));
  out.harmonic = F - out.curl_free - out.divergence_free;
  return out;
}

HarmonicProjection project_harmonic(const TangentVectorField& H, const std::array<TangentVectorField, 2>& basis,
                                    double reference_norm) {
  if (!(reference_norm > 0.0)) throw Error(ErrorKind::parameter, "reference norm must be positive");
  Eigen::Matrix2d gram;
  Eigen::Vector2d rhs;
  for (int i = 0; i < 2; ++i) {
    rhs(i) = inner_product(H, basis[i]);
    for (int j = 0; j < 2; ++j) gram(i, j) = inner_product(basis[i], basis[j]);
  }
  if (!(std::abs(gram.determinant()) > 1e-14 * gram.cwiseAbs2().sum()))
    throw Error(ErrorKind::geometry, "harmonic basis Gram matrix is singular");
  const Eigen::Vector2d c = gram.ldlt().solve(rhs);
  const TangentVectorField rem = H - basis[0] * c(0) - basis[1] * c(1);
  return {{c(0), c(1)}, l2_norm(rem) / reference_norm};
}

}  // namespace lbsr
