#include "lbsr/errors.hpp"
#include "lbsr/spectral_oracle.hpp"
#include "lbsr/surface_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

using namespace lbsr;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

DiscretizationPtr torus(int panels, int ntheta) {
  auto curve = std::make_shared<const GeneratingCurve>(circular_torus(1.0, 2.0));
  return make_discretization(curve, build_mesh(*curve, panels), ntheta);
}

DiscretizationPtr square(int panels, int ntheta, int depth = 0) {
  auto curve = std::make_shared<const GeneratingCurve>(unit_square_toroid());
  PanelMesh mesh = build_mesh(*curve, panels);
  if (depth > 0) mesh = dyadic_refine(mesh, curve->breakpoints(), depth);
  return make_discretization(curve, std::move(mesh), ntheta);
}

double mode_peak(const SurfaceScalarField& u, int n) { return u.stack().mode(n).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("zero data gives the zero solution") {
  const auto disc = torus(4, 8);
  const auto sol = solve_lb(SurfaceScalarField::zero(disc));
  CHECK(sol.field.grid().cwiseAbs().maxCoeff() == 0.0);
  CHECK(sol.modes.empty());
}

TEST_CASE("data with nonzero mean is rejected unless projected") {
  const auto disc = torus(4, 8);
  const auto f = SurfaceScalarField::sample(disc, [](double t, double s) { return 1.0 + std::cos(t) * std::sin(s); });
  try {
    solve_lb(f);
    FAIL("expected a solvability error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::solvability);
  }
  LBOptions opts;
  opts.project_mean = true;
  const auto sol = solve_lb(f, opts);
  CHECK(std::abs(sol.field.integral()) <= 1e-12);
}

TEST_CASE("modes decouple and the solution has zero mean") {
  const auto disc = torus(8, 16);
  const auto f = SurfaceScalarField::sample(disc, [](double t, double s) { return std::sin(3 * t) * std::cos(2 * s); });
  const auto sol = solve_lb(f);
  CHECK(sol.modes.size() == 1);
  CHECK(sol.modes.count(3) == 1);
  for (int n = 0; n < 8; ++n) {
    if (n == 3) continue;
    CHECK(mode_peak(sol.field, n) <= 1e-15);
  }
  CHECK(mode_peak(sol.field, 3) > 1e-3);

  const auto g = SurfaceScalarField::sample(disc, [](double, double s) { return std::cos(2 * s); });
  LBOptions opts;
  opts.project_mean = true;
  const auto axi = solve_lb(g, opts);
  // The n = 0 constraint: int u0 r ds = 0, i.e. zero surface mean.
  CHECK(std::abs(axi.field.integral()) <= 1e-13 * axi.field.l2_norm());
}

TEST_CASE("pseudo-spectral Laplacian confirms the restricted Newtonian data") {
  // Independent check on the smooth torus: apply (1/r) d/ds (r d/ds) + (1/r^2) d2/dtheta2
  // to v = -1/|x - c| with Fourier differentiation on a fine equispaced grid.
  const auto disc = torus(6, 8);
  const Eigen::Vector3d c(0.0, 0.5, 0.5);
  const auto mp = restrict_newtonian(disc, c);
  const auto& curve = *disc->curve;
  const double L = curve.length();
  const int M = 96;
  const Eigen::MatrixXd Ds = oracle::fourier_derivative_matrix(L, M, 1);
  const Eigen::MatrixXd Dt2 = oracle::fourier_derivative_matrix(2 * kPi, M, 2);

  auto v = [&](double t, double s) {
    const auto p = curve.eval(s);
    return -1.0 / (Eigen::Vector3d(p.r * std::cos(t), p.r * std::sin(t), p.z) - c).norm();
  };
  Eigen::VectorXd r(M), ss(M), tt(M);
  for (int i = 0; i < M; ++i) {
    ss(i) = L * i / M;
    tt(i) = 2 * kPi * i / M;
    r(i) = curve.eval(ss(i)).r;
  }
  double err = 0.0;
  double scale = 0.0;
  for (int j = 0; j < disc->ntheta; ++j) {
    const double th = disc->theta(j);
    Eigen::VectorXd vs(M);
    Eigen::MatrixXd vt(M, M);  // rows theta, columns s
    for (int i = 0; i < M; ++i) vs(i) = v(th, ss(i));
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) vt(a, b) = v(tt(a) + th, ss(b));
    const Eigen::VectorXd radial = Ds * Eigen::VectorXd(r.cwiseProduct(Ds * vs));
    const Eigen::RowVectorXd ang = Dt2.row(0) * vt;
    Eigen::VectorXd lap(M);
    for (int i = 0; i < M; ++i) lap(i) = radial(i) / r(i) + ang(i) / (r(i) * r(i));
    const oracle::FourierSolution interp{L, lap};
    for (Eigen::Index k = 0; k < disc->npoints(); ++k) {
      err = std::max(err, std::abs(interp.eval(disc->mesh.nodes()(k)) - mp.f.grid()(j, k)));
      scale = std::max(scale, std::abs(mp.f.grid()(j, k)));
    }
  }
  CHECK(err <= 1e-9 * scale);

  // u_exact differs from v only by a constant.
  const auto vg = SurfaceScalarField::sample(disc, v);
  const Eigen::MatrixXd shift = vg.grid() - mp.u_exact.grid();
  CHECK(shift.maxCoeff() - shift.minCoeff() <= 1e-14);
  CHECK(std::abs(mp.u_exact.integral()) <= 1e-13);

  const Eigen::Vector3d on_surface = surface_point(disc->theta(0), disc->r(0), curve.eval(disc->mesh.nodes()(0)).z);
  CHECK_THROWS_AS(restrict_newtonian(disc, on_surface), Error);
}

TEST_CASE("Newtonian potential is recovered with its tangential gradient") {
  const auto disc = torus(16, 64);
  const Eigen::Vector3d c(0.0, 0.5, 0.5);
  const auto mp = restrict_newtonian(disc, c);
  const auto sol = solve_lb(mp.f);
  CHECK(relative_l2_error(sol.field, mp.u_exact) <= 1e-12);
  const auto grad = surface_gradient(sol);
  CHECK(relative_l2_error(grad, newtonian_tangential_gradient(disc, c)) <= 1e-11);
}

TEST_CASE("gradient of a resolved axisymmetric solution") {
  // f = Delta cos(pi s / 2) on the square toroid; compare grad u with the exact one up to
  // the mean shift, which the gradient does not see.
  const auto disc = square(2, 8);
  const auto& curve = *disc->curve;
  const double k = kPi / 2;
  const auto f = SurfaceScalarField::sample(disc, [&](double, double s) {
    const auto p = curve.eval(s);
    return -k * k * std::cos(k * s) - p.dr / p.r * k * std::sin(k * s);
  });
  LBOptions opts;
  opts.project_mean = true;
  const auto sol = solve_lb(f, opts);
  const auto grad = surface_gradient(sol);
  const TangentVectorField exact{SurfaceScalarField::sample(disc, [&](double, double s) { return -k * std::sin(k * s); }),
                                 SurfaceScalarField::zero(disc)};
  CHECK(relative_l2_error(grad, exact) <= 1e-10);
}

TEST_CASE("resampling onto a finer grid reproduces the representation") {
  const auto coarse = torus(6, 8);
  const auto fine = torus(9, 8);
  const Eigen::Vector3d c(0.0, 0.5, 0.5);
  LBOptions opts;
  opts.project_mean = true;
  const auto sol = solve_lb(restrict_newtonian(coarse, c).f, opts);
  const auto moved = resample(sol, fine);
  // Same theta grid, so only the s discretization differs.
  const auto direct = solve_lb(restrict_newtonian(fine, c).f, opts);
  CHECK(relative_l2_error(moved, direct.field) <= 1e-10);
  const auto back = resample(sol, coarse);
  CHECK((back.grid() - sol.field.grid()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("power singular source") {
  const auto src = power_singular_field(-0.5, 2.0, 1);
  CHECK(src(kPi / 2, 2.25) == Approx(2.0).epsilon(1e-15));
  CHECK_FALSE(src.warning.has_value());
  const GeneratingCurve sq = unit_square_toroid();
  CHECK_FALSE(power_singular_field(-0.5, 2.0, 3, &sq).warning.has_value());
  CHECK(power_singular_field(-0.5, 2.5, 3, &sq).warning.has_value());
  CHECK_THROWS_AS(power_singular_field(-1.0, 2.0, 3), Error);
  CHECK_THROWS_AS(power_singular_field(-1.5, 2.0, 3), Error);
}

TEST_CASE("relative L2 error") {
  const auto disc = torus(4, 8);
  const auto a = SurfaceScalarField::sample(disc, [](double t, double s) { return std::cos(t) + std::sin(s); });
  CHECK(relative_l2_error(a, a) == 0.0);
  CHECK(relative_l2_error(a * 1.5, a) == Approx(0.5).epsilon(1e-14));
  CHECK(relative_l2_error(SurfaceScalarField::zero(disc), a) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("outward normal on the torus") {
  const auto& curve = circular_torus(1.0, 2.0);
  for (double s : {0.0, 0.4, 1.3, 2.9}) {
    const auto p = curve.eval(s);
    for (double t : {0.0, 1.1, 4.0}) {
      const Eigen::Vector3d x = surface_point(t, p.r, p.z);
      const Eigen::Vector3d tube(1.5 * std::cos(t), 1.5 * std::sin(t), 0.0);
      const Eigen::Vector3d n = surface_normal(t, p.dr, p.dz);
      CHECK((n - (x - tube) / 0.5).norm() <= 1e-14);
    }
  }
}
