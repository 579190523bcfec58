#include "lbsr/fields.hpp"

#include "lbsr/errors.hpp"

#include <cmath>
#include <numbers>

namespace lbsr {

DiscretizationPtr make_discretization(std::shared_ptr<const GeneratingCurve> curve, PanelMesh mesh, int ntheta) {
  if (!curve) throw Error(ErrorKind::parameter, "missing curve");
  const double L = curve->length();
  if (std::abs(mesh.length() - L) > 1e-12 * L) throw Error(ErrorKind::parameter, "mesh does not span the curve");
  for (double b : curve->breakpoints()) {
    if (!mesh.is_boundary(b, 1e-12 * L)) throw Error(ErrorKind::parameter, "mesh is not aligned with a surface edge");
  }
  auto disc = std::make_shared<SurfaceDiscretization>();
  disc->curve = std::move(curve);
  disc->mesh = std::move(mesh);
  disc->ntheta = ntheta;
  disc->theta = theta_grid(ntheta);
  const Eigen::Index n = disc->mesh.size();
  disc->r.resize(n);
  disc->dr.resize(n);
  disc->dz.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CurvePoint pt = disc->curve->eval(disc->mesh.nodes()(i));
    disc->r(i) = pt.r;
    disc->dr(i) = pt.dr;
    disc->dz(i) = pt.dz;
  }
  const Eigen::RowVectorXd wr = disc->mesh.weights().cwiseProduct(disc->r).transpose() * (2 * std::numbers::pi / ntheta);
  disc->weights = wr.replicate(ntheta, 1);
  return disc;
}

SurfaceScalarField SurfaceScalarField::from_grid(DiscretizationPtr disc, Eigen::MatrixXd grid) {
  if (grid.rows() != disc->ntheta || grid.cols() != disc->npoints())
    throw Error(ErrorKind::parameter, "grid shape does not match the discretization");
  FourierStack stack = decompose(grid);
  return SurfaceScalarField(std::move(disc), std::move(grid), std::move(stack));
}

SurfaceScalarField SurfaceScalarField::from_stack(DiscretizationPtr disc, FourierStack stack) {
  if (stack.ntheta() != disc->ntheta || stack.npoints() != disc->npoints())
    throw Error(ErrorKind::parameter, "stack shape does not match the discretization");
  Eigen::MatrixXd grid = synthesize(stack);
  return SurfaceScalarField(std::move(disc), std::move(grid), std::move(stack));
}

SurfaceScalarField SurfaceScalarField::sample(DiscretizationPtr disc, const std::function<double(double, double)>& fn) {
  Eigen::MatrixXd grid(disc->ntheta, disc->npoints());
  for (Eigen::Index c = 0; c < grid.cols(); ++c) {
    const double s = disc->mesh.nodes()(c);
    for (Eigen::Index j = 0; j < grid.rows(); ++j) grid(j, c) = fn(disc->theta(j), s);
  }
  return from_grid(std::move(disc), std::move(grid));
}

SurfaceScalarField SurfaceScalarField::zero(DiscretizationPtr disc) {
  Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(disc->ntheta, disc->npoints());
  FourierStack stack(disc->ntheta, disc->npoints());
  return SurfaceScalarField(std::move(disc), std::move(grid), std::move(stack));
}

double SurfaceScalarField::integral() const { return disc_->weights.cwiseProduct(grid_).sum(); }

double SurfaceScalarField::l2_norm() const { return std::sqrt(inner_product(*this, *this)); }

namespace {

void check_same(const SurfaceScalarField& a, const SurfaceScalarField& b) {
  if (a.grid().rows() != b.grid().rows() || a.grid().cols() != b.grid().cols())
    throw Error(ErrorKind::parameter, "fields live on different grids");
}

}  // namespace

SurfaceScalarField SurfaceScalarField::operator+(const SurfaceScalarField& other) const {
  check_same(*this, other);
  FourierStack st(stack_.ntheta(), stack_.coeffs() + other.stack_.coeffs());
  return SurfaceScalarField(disc_, grid_ + other.grid_, std::move(st));
}

SurfaceScalarField SurfaceScalarField::operator-(const SurfaceScalarField& other) const {
  check_same(*this, other);
  FourierStack st(stack_.ntheta(), stack_.coeffs() - other.stack_.coeffs());
  return SurfaceScalarField(disc_, grid_ - other.grid_, std::move(st));
}

SurfaceScalarField SurfaceScalarField::operator*(double a) const {
  FourierStack st(stack_.ntheta(), stack_.coeffs() * a);
  return SurfaceScalarField(disc_, grid_ * a, std::move(st));
}

double inner_product(const SurfaceScalarField& a, const SurfaceScalarField& b) {
  check_same(a, b);
  return a.discretization()->weights.cwiseProduct(a.grid()).cwiseProduct(b.grid()).sum();
}

double inner_product(const TangentVectorField& a, const TangentVectorField& b) {
  return inner_product(a.s, b.s) + inner_product(a.theta, b.theta);
}

double l2_norm(const TangentVectorField& f) { return std::sqrt(inner_product(f, f)); }

double relative_l2_error(const SurfaceScalarField& a, const SurfaceScalarField& b) {
  check_same(a, b);
  const double ref = b.l2_norm();
  if (ref == 0.0) throw Error(ErrorKind::degenerate_reference, "reference field has zero norm");
  return (a - b).l2_norm() / ref;
}

double relative_l2_error(const TangentVectorField& a, const TangentVectorField& b) {
  const double ref = l2_norm(b);
  if (ref == 0.0) throw Error(ErrorKind::degenerate_reference, "reference field has zero norm");
  return l2_norm(a - b) / ref;
}

}  // namespace lbsr
