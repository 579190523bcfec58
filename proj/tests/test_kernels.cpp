#include "lbsr/errors.hpp"
#include "lbsr/kernels.hpp"
#include "lbsr/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace lbsr;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

// int_0^L K(x - t) sigma(t) dt with the integrand's kink at t = x resolved by
// placing a panel boundary there.
double convolve(const std::function<double(double)>& K, const std::function<double(double)>& sigma, double x, double L) {
  std::vector<double> cuts = {0.0, L};
  if (x > 0.0 && x < L) cuts.insert(cuts.begin() + 1, x);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const int pieces = 8;
    for (int p = 0; p < pieces; ++p) {
      const double a = cuts[c] + (cuts[c + 1] - cuts[c]) * p / pieces;
      const double b = cuts[c] + (cuts[c + 1] - cuts[c]) * (p + 1) / pieces;
      const GaussRule g = gauss_legendre(20, a, b);
      for (int i = 0; i < 20; ++i) total += g.weights(i) * K(x - g.nodes(i)) * sigma(g.nodes(i));
    }
  }
  return total;
}

}  // namespace

TEST_CASE("Poisson kernel spot values") {
  CHECK(g_poisson(pi, 2 * pi) == Approx(pi / 12).epsilon(1e-15));
  CHECK(g_poisson(0.0, 2 * pi) == Approx(-pi / 6).epsilon(1e-15));
  CHECK(g_poisson_deriv(pi, 2 * pi) == 0.0);
  CHECK(g_poisson_deriv(1.0, 4.0) == Approx(0.25).epsilon(1e-15));
  CHECK(g_poisson_deriv(0.0, 4.0, Side::right) == 0.5);
  CHECK(g_poisson_deriv(0.0, 4.0, Side::left) == -0.5);
  CHECK(g_poisson_deriv(1e-12, 4.0) == Approx(0.5));
  CHECK(g_poisson_deriv(4.0 - 1e-12, 4.0) == Approx(-0.5));
  try {
    g_poisson_deriv(8.0, 4.0);
    FAIL("jump evaluation accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::jump_point);
  }
  CHECK_THROWS_AS(g_yukawa_deriv(0.0, 1.0), Error);
}

TEST_CASE("floor_mod maps into [0, L)") {
  CHECK(floor_mod(-0.5, 2.0) == 1.5);
  CHECK(floor_mod(4.5, 2.0) == 0.5);
  CHECK(floor_mod(0.0, 2.0) == 0.0);
  const double m = floor_mod(-1e-20, 1.0);
  CHECK(m >= 0.0);
  CHECK(m < 1.0);
}

TEST_CASE("Poisson kernel is mean zero") {
  for (double L : {1.0, 2 * pi, 4.0}) {
    const GaussRule g = gauss_legendre(16, 0.0, L);
    double sum = 0.0;
    for (int i = 0; i < 16; ++i) sum += g.weights(i) * g_poisson(g.nodes(i), L);
    CHECK(std::abs(sum) <= 1e-14 * std::max(1.0, L * L));
  }
}

TEST_CASE("Poisson kernel inverts the second derivative on sines") {
  const double L = 3.0;
  for (int n : {1, 2, 5}) {
    const double k = 2 * pi * n / L;
    for (double x : {0.0, 0.4, 1.7, 2.9}) {
      const double v = convolve([&](double y) { return g_poisson(y, L); }, [&](double t) { return std::sin(k * t); }, x, L);
      CHECK(std::abs(v + std::sin(k * x) / (k * k)) <= 1e-12);
    }
  }
}

TEST_CASE("Yukawa defining property and mean") {
  for (double L : {1.0, 2 * pi, 4.0}) {
    const double k = 2 * pi / L;
    for (double x : {0.0, 0.3 * L, 0.77 * L}) {
      const double v = convolve([&](double y) { return g_yukawa(y, L); }, [&](double t) { return std::cos(k * t); }, x, L);
      CHECK(std::abs(v + std::cos(k * x) / (1 + k * k)) <= 1e-12);
    }
    const double mean = convolve([&](double y) { return g_yukawa(y, L); }, [](double) { return 1.0; }, 0.4 * L, L);
    CHECK(mean == Approx(-1.0).epsilon(1e-13));
  }
}

TEST_CASE("kernels are even and periodic") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  const double L = 2.5;
  for (int i = 0; i < 1000; ++i) {
    const double x = U(rng);
    CHECK(std::abs(g_yukawa(x, L) - g_yukawa(-x, L)) <= 1e-14);
    CHECK(std::abs(g_poisson(x, L) - g_poisson(-x, L)) <= 1e-14);
    CHECK(std::abs(g_poisson(x + L, L) - g_poisson(x, L)) <= 1e-13);
    CHECK(std::abs(g_yukawa(x + L, L) - g_yukawa(x, L)) <= 1e-13);
    CHECK(std::abs(g_poisson_deriv(x + L, L) - g_poisson_deriv(x, L)) <= 1e-13);
    CHECK(std::abs(g_yukawa_deriv(x + L, L) - g_yukawa_deriv(x, L)) <= 1e-13);
  }
}

TEST_CASE("Yukawa derivative matches a central difference") {
  const double L = 2 * pi;
  for (double x : {0.3, 1.0, 3.0, 5.9}) {
    const double h = 1e-5;
    const double fd = (g_yukawa(x + h, L) - g_yukawa(x - h, L)) / (2 * h);
    CHECK(std::abs(fd - g_yukawa_deriv(x, L)) <= 1e-9);
  }
  CHECK(g_yukawa_deriv(0.0, L, Side::right) - g_yukawa_deriv(0.0, L, Side::left) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("the printed closed form needs the symmetric reduction") {
  const double L = 2 * pi;
  for (double x : {0.2, 1.0, 3.0, 4.4, 6.0}) {
    const double symmetric = floor_mod(x + L / 2, L) - L / 2;
    CHECK(std::abs(g_yukawa_closed_form(symmetric, L) - g_yukawa(x, L)) <= 1e-14);
  }
  // Reduced to [L/2, 3L/2) the same expression is not the periodic kernel.
  const double x = 0.2;
  const double shifted = floor_mod(x - L / 2, L) + L / 2;
  CHECK(std::abs(g_yukawa_closed_form(shifted, L) - g_yukawa(x, L)) > 1e-3);
}

TEST_CASE("kernel names") {
  CHECK(parse_kernel("poisson") == KernelKind::poisson);
  CHECK(parse_kernel("yukawa") == KernelKind::yukawa);
  CHECK(to_string(KernelKind::yukawa) == "yukawa");
  CHECK_THROWS_AS(parse_kernel("helmholtz"), Error);
}
