#ifndef LBSR_FIELDS_HPP
#define LBSR_FIELDS_HPP

#include "lbsr/azimuthal.hpp"
#include "lbsr/geometry.hpp"
#include "lbsr/quadrature.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>

namespace lbsr {

/// Tensor grid on the surface: N_theta equispaced angles times the Gauss
/// nodes of a panel mesh along the generating curve.
struct SurfaceDiscretization {
  std::shared_ptr<const GeneratingCurve> curve;
  PanelMesh mesh;
  int ntheta = 0;
  Eigen::VectorXd theta;
  Eigen::VectorXd r;   // r(s) at the mesh nodes
  Eigen::VectorXd dr;  // dr/ds
  Eigen::VectorXd dz;  // dz/ds
  /// Surface quadrature weights w_j r_j 2 pi / N_theta, N_theta x N_s.
  Eigen::MatrixXd weights;

  Eigen::Index npoints() const { return mesh.size(); }
  double area() const { return weights.sum(); }
};

using DiscretizationPtr = std::shared_ptr<const SurfaceDiscretization>;

/// Checks that the mesh spans the curve and has a boundary at every edge.
DiscretizationPtr make_discretization(std::shared_ptr<const GeneratingCurve> curve, PanelMesh mesh, int ntheta);

/// Scalar field on the grid together with its theta Fourier coefficients.
class SurfaceScalarField {
 public:
  SurfaceScalarField() = default;

  static SurfaceScalarField from_grid(DiscretizationPtr disc, Eigen::MatrixXd grid);
  static SurfaceScalarField from_stack(DiscretizationPtr disc, FourierStack stack);
  static SurfaceScalarField sample(DiscretizationPtr disc, const std::function<double(double, double)>& fn);
  static SurfaceScalarField zero(DiscretizationPtr disc);

  const Eigen::MatrixXd& grid() const { return grid_; }
  const FourierStack& stack() const { return stack_; }
  const DiscretizationPtr& discretization() const { return disc_; }

  double integral() const;
  double l2_norm() const;

  SurfaceScalarField operator+(const SurfaceScalarField& other) const;
  SurfaceScalarField operator-(const SurfaceScalarField& other) const;
  SurfaceScalarField operator*(double a) const;
  SurfaceScalarField operator-() const { return *this * -1.0; }

 private:
  SurfaceScalarField(DiscretizationPtr disc, Eigen::MatrixXd grid, FourierStack stack)
      : disc_(std::move(disc)), grid_(std::move(grid)), stack_(std::move(stack)) {}

  DiscretizationPtr disc_;
  Eigen::MatrixXd grid_;
  FourierStack stack_;
};

/// Tangential field F = F^s s_hat + F^theta theta_hat in the orthonormal
/// frame of the surface of revolution.
struct TangentVectorField {
  SurfaceScalarField s;
  SurfaceScalarField theta;

  const DiscretizationPtr& discretization() const { return s.discretization(); }

  TangentVectorField operator+(const TangentVectorField& o) const { return {s + o.s, theta + o.theta}; }
  TangentVectorField operator-(const TangentVectorField& o) const { return {s - o.s, theta - o.theta}; }
  TangentVectorField operator*(double a) const { return {s * a, theta * a}; }
};

/// Surface L2 inner products with the tensor-product weights.
double inner_product(const SurfaceScalarField& a, const SurfaceScalarField& b);
double inner_product(const TangentVectorField& a, const TangentVectorField& b);
double l2_norm(const TangentVectorField& f);

/// Relative L2 difference ||a - b|| / ||b|| with b the reference.
double relative_l2_error(const SurfaceScalarField& a, const SurfaceScalarField& b);
double relative_l2_error(const TangentVectorField& a, const TangentVectorField& b);

}  // namespace lbsr

#endif  // LBSR_FIELDS_HPP
