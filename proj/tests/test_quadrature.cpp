#include "lbsr/errors.hpp"
#include "lbsr/kernels.hpp"
#include "lbsr/quadrature.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lbsr;
using doctest::Approx;

TEST_CASE("Gauss-Legendre reference rules") {
  const auto& g1 = gauss_legendre(1);
  CHECK(g1.nodes(0) == 0.0);
  CHECK(g1.weights(0) == Approx(2.0).epsilon(1e-15));

  const auto& g2 = gauss_legendre(2);
  CHECK(g2.nodes(0) == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(g2.nodes(1) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(g2.weights(0) == Approx(1.0).epsilon(1e-15));

  for (int k : {3, 8, 16, 33, 64}) {
    const auto& g = gauss_legendre(k);
    CHECK(std::abs(g.weights.sum() - 2.0) <= 1e-14);
    CHECK((g.weights.array() > 0.0).all());
    for (int i = 1; i < k; ++i) CHECK(g.nodes(i) > g.nodes(i - 1));
  }
  const auto& g16 = gauss_legendre(16);
  CHECK(std::abs(g16.weights.dot(g16.nodes.array().pow(31).matrix())) <= 1e-14);
  // Degree 30 is the highest even power integrated exactly: int x^30 = 2/31.
  CHECK(g16.weights.dot(g16.nodes.array().pow(30).matrix()) == Approx(2.0 / 31.0).epsilon(1e-14));

  CHECK_THROWS_AS(gauss_legendre(0), Error);
  CHECK_THROWS_AS(gauss_legendre(65), Error);
}

TEST_CASE("build_mesh examples") {
  const double bps[] = {0.0, 1.0, 2.0, 3.0};
  const PanelMesh m = build_mesh(4.0, 1, bps);
  CHECK(m.num_panels() == 4);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(m.panel(i).width() == Approx(1.0));
  CHECK(std::abs(m.weights().sum() - 4.0) <= 1e-13 * 4.0);

  const PanelMesh u = build_mesh(2 * std::numbers::pi, 8, {});
  CHECK(u.num_panels() == 8);
  for (Eigen::Index i = 0; i < 8; ++i) CHECK(u.panel(i).width() == Approx(std::numbers::pi / 4));
  CHECK(u.size() == 128);

  const double bad[] = {4.5};
  CHECK_THROWS_AS(build_mesh(4.0, 1, bad), Error);
  CHECK_THROWS_AS(build_mesh(0.0, 1, {}), Error);
  CHECK_THROWS_AS(build_mesh(1.0, 0, {}), Error);
}

TEST_CASE("dyadic refinement") {
  const double bps[] = {0.0, 1.0, 2.0, 3.0};
  const PanelMesh m = build_mesh(4.0, 1, bps);
  const double target[] = {2.0};

  const PanelMesh r0 = dyadic_refine(m, target, 0);
  CHECK(r0.boundaries() == m.boundaries());

  const PanelMesh r3 = dyadic_refine(m, target, 3);
  CHECK(r3.num_panels() == m.num_panels() + 2 * 3);
  CHECK(r3.panel(r3.locate(2.0, Side::left)).width() == Approx(0.125));
  CHECK(r3.panel(r3.locate(2.0, Side::right)).width() == Approx(0.125));
  CHECK(r3.min_width() == Approx(0.125));
  CHECK(r3.length() == 4.0);
  CHECK(std::abs(r3.weights().sum() - 4.0) <= 1e-13 * 4.0);
  for (Eigen::Index i = 0; i + 1 < r3.num_panels(); ++i) CHECK(r3.panel(i).b == r3.panel(i + 1).a);

  const PanelMesh one = dyadic_refine(m, target, 3, RefineSides::left);
  CHECK(one.num_panels() == m.num_panels() + 3);
  CHECK(one.panel(one.locate(2.0, Side::right)).width() == 1.0);

  const double wrap[] = {0.0};
  const PanelMesh w = dyadic_refine(m, wrap, 2);
  CHECK(w.panel(0).width() == Approx(0.25));
  CHECK(w.panel(w.num_panels() - 1).width() == Approx(0.25));

  const double off[] = {1.5};
  try {
    dyadic_refine(m, off, 2);
    FAIL("non-boundary target accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::refinement);
  }
}

TEST_CASE("weights embed L2 with high order") {
  const double L = 2 * std::numbers::pi;
  auto g2 = [](double x) { return std::exp(2 * std::sin(x)); };  // int = 2 pi I0(2)
  const double exact = 2 * std::numbers::pi * std::cyl_bessel_i(0.0, 2.0);
  for (int M : {4, 8}) {
    const PanelMesh m = build_mesh(L, M, {});
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) sum += m.weights()(i) * g2(m.nodes()(i));
    CHECK(std::abs(sum - exact) <= 1e-13 * exact);
  }
}

TEST_CASE("Lagrange interpolation on Legendre nodes") {
  const GaussRule g = gauss_legendre(16, 0.0, 1.0);
  const Eigen::VectorXd x5 = g.nodes.array().pow(5);
  for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) CHECK(lagrange_interp(Panel{0.0, 1.0}, g.nodes, x5, x) == Approx(std::pow(x, 5)).epsilon(1e-13));
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(16, 3.5);
  CHECK(lagrange_interp(g.nodes, ones, 0.42) == Approx(3.5).epsilon(1e-15));
  const Eigen::VectorXd sines = g.nodes.array().sin();
  CHECK(std::abs(lagrange_interp(Panel{0.0, 1.0}, g.nodes, sines, 0.37) - std::sin(0.37)) <= 1e-12);
  try {
    lagrange_interp(Panel{0.0, 1.0}, g.nodes, sines, 1.2);
    FAIL("extrapolation accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::extrapolation);
  }
}

TEST_CASE("differentiation matrix is exact for polynomials") {
  const GaussRule g = gauss_legendre(16, -0.3, 1.7);
  const Eigen::MatrixXd D = differentiation_matrix(g.nodes);
  const Eigen::VectorXd p = g.nodes.array().pow(7) - 2 * g.nodes.array().square();
  const Eigen::VectorXd dp = 7 * g.nodes.array().pow(6) - 4 * g.nodes.array();
  CHECK((D * p - dp).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK((D * Eigen::VectorXd::Ones(16)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("split rules") {
  const SplitRule r = split_rule(Panel{0.0, 1.0}, 0.5, 16);
  CHECK(r.left.weights.sum() == Approx(0.5).epsilon(1e-15));
  CHECK(r.right.weights.sum() == Approx(0.5).epsilon(1e-15));

  const double x = 0.3;
  const SplitRule s = split_rule(Panel{0.0, 1.0}, x, 16);
  auto integrate = [&](auto fn) {
    double v = 0.0;
    for (int i = 0; i < 16; ++i) v += s.left.weights(i) * fn(s.left.nodes(i)) + s.right.weights(i) * fn(s.right.nodes(i));
    return v;
  };
  const double abs_exact = (x * x + (1 - x) * (1 - x)) / 2;
  CHECK(std::abs(integrate([&](double t) { return std::abs(x - t); }) - abs_exact) <= 1e-14);

  const double g_exact = oracles::poisson_panel_integral(0.0, 1.0, x, 1.0, {1.0}, 0.5);
  CHECK(std::abs(integrate([&](double t) { return g_poisson(x - t, 1.0); }) - g_exact) <= 1e-15);

  try {
    split_rule(Panel{0.0, 1.0}, 1.0, 16);
    FAIL("endpoint split accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_split);
  }
}
