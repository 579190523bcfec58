#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Exact int_a^b G(x - t) P(t) dt for the periodic Poisson kernel
// G(y) = -(mod(y, L) - L/2)^2 / (2L) + L/24 and a polynomial P given by its
// coefficients in powers of (t - c). Requires 0 <= a < b <= L, 0 <= x <= L.
// With derivative = true the kernel is G'(y) = -(mod(y, L) - L/2) / L.
inline double poisson_panel_integral(double a, double b, double x, double L, const std::vector<double>& p, double c,
                                     bool derivative = false) {
  // On a piece where mod(x - t, L) = x - t + shift, with tau = t - c,
  // mod - L/2 = beta - tau and beta = x + shift - L/2 - c.
  auto piece = [&](double t0, double t1, double shift) {
    const double beta = x + shift - L / 2.0 - c;
    std::vector<double> g;
    if (derivative)
      g = {-beta / L, 1.0 / L};
    else
      g = {-beta * beta / (2.0 * L) + L / 24.0, beta / L, -1.0 / (2.0 * L)};
    std::vector<double> prod(p.size() + g.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) prod[i + j] += p[i] * g[j];
    const double u0 = t0 - c;
    const double u1 = t1 - c;
    double sum = 0.0;
    for (std::size_t m = 0; m < prod.size(); ++m)
      sum += prod[m] * (std::pow(u1, m + 1) - std::pow(u0, m + 1)) / static_cast<double>(m + 1);
    return sum;
  };
  if (x <= a) return piece(a, b, L);  // x - t <= 0 on the whole panel
  if (x >= b) return piece(a, b, 0.0);
  return piece(a, x, 0.0) + piece(x, b, L);
}

inline double eval_poly(const std::vector<double>& p, double t, double c) {
  double v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * (t - c) + p[i];
  return v;
}

// Mean curvature of the surface of revolution from its first and second
// fundamental forms, with fourth-order central differences of the embedding
// X(theta, s). Normal X_s x X_theta; H = 1/a on an outward-oriented sphere.
inline double fd_mean_curvature(const std::function<Eigen::Vector2d(double)>& rz, double s, double h = 1e-3) {
  const double th = 0.3;
  auto X = [&](double t, double ss) -> Eigen::Vector3d {
    const Eigen::Vector2d q = rz(ss);
    return Eigen::Vector3d(q(0) * std::cos(t), q(0) * std::sin(t), q(1));
  };
  auto d1 = [&](auto f) -> Eigen::Vector3d { return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h); };
  auto d2 = [&](auto f) -> Eigen::Vector3d { return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h); };
  const Eigen::Vector3d Xs = d1([&](double e) { return X(th, s + e); });
  const Eigen::Vector3d Xt = d1([&](double e) { return X(th + e, s); });
  const Eigen::Vector3d Xss = d2([&](double e) { return X(th, s + e); });
  const Eigen::Vector3d Xtt = d2([&](double e) { return X(th + e, s); });
  const Eigen::Vector3d Xst = d1([&](double e) { return d1([&](double g) { return X(th + g, s + e); }); });
  const Eigen::Vector3d n = Xs.cross(Xt).normalized();
  const double E = Xs.dot(Xs), F = Xs.dot(Xt), G = Xt.dot(Xt);
  const double e = Xss.dot(n), f = Xst.dot(n), g = Xtt.dot(n);
  return -(e * G - 2 * f * F + g * E) / (2 * (E * G - F * F));
}

}  // namespace oracles
