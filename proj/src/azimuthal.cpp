#include "lbsr/azimuthal.hpp"

#include "lbsr/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

namespace lbsr {

FourierStack::FourierStack(int ntheta, Eigen::Index npoints)
    : FourierStack(ntheta, Eigen::MatrixXcd::Zero(ntheta, npoints)) {}

FourierStack::FourierStack(int ntheta, Eigen::MatrixXcd coeffs) : ntheta_(ntheta), coeffs_(std::move(coeffs)) {
  if (ntheta_ < 2 || ntheta_ % 2 != 0) throw Error(ErrorKind::parameter, "N_theta must be even and >= 2");
  if (coeffs_.rows() != ntheta_) throw Error(ErrorKind::parameter, "one coefficient row per mode required");
}

Eigen::Index FourierStack::row_of(int n) const {
  if (n < min_mode() || n > max_mode()) throw Error(ErrorKind::parameter, "mode outside the stack");
  return n >= 0 ? n : n + ntheta_;
}

Eigen::VectorXd theta_grid(int ntheta) {
  Eigen::VectorXd t(ntheta);
  for (int j = 0; j < ntheta; ++j) t(j) = 2.0 * std::numbers::pi * j / ntheta;
  return t;
}

FourierStack decompose(const Eigen::MatrixXd& grid) {
  const int nt = static_cast<int>(grid.rows());
  if (nt < 2 || nt % 2 != 0) throw Error(ErrorKind::parameter, "N_theta must be even and >= 2");
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(nt), out(nt);
  Eigen::MatrixXcd coeffs(nt, grid.cols());
  for (Eigen::Index c = 0; c < grid.cols(); ++c) {
    for (int j = 0; j < nt; ++j) in[j] = grid(j, c);
    fft.fwd(out, in);
    for (int j = 0; j < nt; ++j) coeffs(j, c) = out[j] / static_cast<double>(nt);
  }
  return FourierStack(nt, std::move(coeffs));
}

FourierStack decompose(const Eigen::MatrixXd& grid, std::span<const double> thetas) {
  const int nt = static_cast<int>(grid.rows());
  if (static_cast<int>(thetas.size()) != nt) throw Error(ErrorKind::parameter, "one angle per grid row required");
  const Eigen::VectorXd expected = theta_grid(nt);
  for (int j = 0; j < nt; ++j) {
    if (std::abs(thetas[j] - expected(j)) > 1e-12) throw Error(ErrorKind::parameter, "theta grid is not equispaced");
  }
  return decompose(grid);
}

Eigen::MatrixXd synthesize(const FourierStack& stack) { return synthesize(stack, stack.ntheta()); }

Eigen::MatrixXd synthesize(const FourierStack& stack, int ntheta) {
  if (ntheta < 2 || ntheta % 2 != 0) throw Error(ErrorKind::parameter, "N_theta must be even and >= 2");
  FourierStack target(ntheta, stack.npoints());
  const int lo = std::max(stack.min_mode(), target.min_mode());
  const int hi = std::min(stack.max_mode(), target.max_mode());
  for (int n = lo; n <= hi; ++n) target.mode(n) = stack.mode(n);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(ntheta), out(ntheta);
  Eigen::MatrixXd grid(ntheta, stack.npoints());
  for (Eigen::Index c = 0; c < stack.npoints(); ++c) {
    for (int j = 0; j < ntheta; ++j) in[j] = target.coeffs()(j, c);
    fft.inv(out, in);  // scaled by 1/N
    for (int j = 0; j < ntheta; ++j) grid(j, c) = out[j].real() * ntheta;
  }
  return grid;
}

FourierStack theta_derivative(const FourierStack& stack) {
  FourierStack out = stack;
  for (int n = stack.min_mode(); n <= stack.max_mode(); ++n) {
    if (n == stack.nyquist()) {
      out.mode(n).setZero();
    } else {
      out.mode(n) *= std::complex<double>(0.0, n);
    }
  }
  return out;
}

}  // namespace lbsr
