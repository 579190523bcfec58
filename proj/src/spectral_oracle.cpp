#include "lbsr/spectral_oracle.hpp"

#include "lbsr/errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>

namespace lbsr::oracle {

namespace {

// Wavenumber of FFT bin j; the Nyquist bin gets 0 for odd derivatives.
double wavenumber(int j, int n, int order) {
  if (2 * j == n) return order % 2 == 0 ? n / 2.0 : 0.0;
  return j < n / 2 ? j : j - n;
}

}  // namespace

Eigen::MatrixXd fourier_derivative_matrix(double period, int n, int order) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorKind::parameter, "collocation size must be even");
  Eigen::FFT<double> fft;
  const double scale = 2.0 * std::numbers::pi / period;
  Eigen::VectorXcd symbol(n);
  for (int j = 0; j < n; ++j) symbol(j) = std::pow(std::complex<double>(0.0, scale * wavenumber(j, n, order)), order);

  Eigen::MatrixXd D(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  Eigen::VectorXcd spec;
  Eigen::VectorXcd back;
  for (int c = 0; c < n; ++c) {
    e.setZero();
    e(c) = 1.0;
    fft.fwd(spec, e);
    spec = spec.cwiseProduct(symbol).eval();
    fft.inv(back, spec);
    D.col(c) = back.real();
  }
  return D;
}

FourierSolution solve_periodic_collocation(double period, const std::function<double(double)>& p,
                                           const std::function<double(double)>& q,
                                           const std::function<double(double)>& f, int n) {
  const Eigen::MatrixXd D1 = fourier_derivative_matrix(period, n, 1);
  Eigen::MatrixXd A = fourier_derivative_matrix(period, n, 2);
  Eigen::VectorXd rhs(n);
  for (int j = 0; j < n; ++j) {
    const double x = period * j / n;
    A.row(j) += p(x) * D1.row(j);
    A(j, j) += q(x);
    rhs(j) = f(x);
  }
  return {period, A.partialPivLu().solve(rhs)};
}

double FourierSolution::eval(double x) const {
  const int n = static_cast<int>(values.size());
  Eigen::FFT<double> fft;
  Eigen::VectorXcd c;
  fft.fwd(c, Eigen::VectorXd(values));
  const double t = 2.0 * std::numbers::pi * x / period;
  double sum = c(0).real();
  for (int j = 1; j < n / 2; ++j) sum += 2.0 * (c(j) * std::exp(std::complex<double>(0.0, j * t))).real();
  sum += (c(n / 2) * std::cos(n / 2 * t)).real();
  return sum / n;
}

}  // namespace lbsr::oracle
