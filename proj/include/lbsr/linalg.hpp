#ifndef LBSR_LINALG_HPP
#define LBSR_LINALG_HPP

#include "lbsr/errors.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace lbsr {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A square linear map given only through its action.
template <typename Scalar>
struct LinearOperator {
  Eigen::Index rows = 0;
  std::function<VectorX<Scalar>(const VectorX<Scalar>&)> apply;

  VectorX<Scalar> operator()(const VectorX<Scalar>& x) const { return apply(x); }
};

template <typename Derived>
LinearOperator<typename Derived::Scalar> as_operator(const Eigen::MatrixBase<Derived>& matrix) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> A = matrix;
  return {A.rows(), [A = std::move(A)](const VectorX<Scalar>& x) -> VectorX<Scalar> { return A * x; }};
}

struct GmresOptions {
  double tol = 1e-14;
  int max_iter = 0;     // Krylov dimension per cycle; 0 means min(n, 1000)
  int max_restarts = 3;  // extra cycles used only when the true residual misses tol
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // true relative residual ||b - Ax|| / ||b||
  bool converged = false;
  std::vector<double> history;  // Arnoldi residual estimates, one per iteration
};

namespace detail {

template <typename Scalar>
Scalar conj(const Scalar& x) {
  return Eigen::numext::conj(x);
}

// Complex-safe Givens rotation [c, s; -conj(s), c] zeroing b against a.
template <typename Scalar>
void make_givens(const Scalar& a, const Scalar& b, double& c, Scalar& s) {
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  if (abs_b == 0.0) {
    c = 1.0;
    s = Scalar(0);
    return;
  }
  if (abs_a == 0.0) {
    c = 0.0;
    s = Scalar(1);
    return;
  }
  const double t = std::hypot(abs_a, abs_b);
  c = abs_a / t;
  s = (a / abs_a) * conj(b) / t;
}

template <typename Scalar>
void apply_givens(double c, const Scalar& s, Scalar& x, Scalar& y) {
  const Scalar nx = c * x + s * y;
  const Scalar ny = -conj(s) * x + c * y;
  x = nx;
  y = ny;
}

}  // namespace detail

/// Full (non-restarted) GMRES from a zero initial guess, modified Gram-Schmidt
/// with one reorthogonalization pass. If the Arnoldi estimate reaches tol but
/// the true residual does not, GMRES restarts from the current iterate up to
/// max_restarts times. Non-convergence is reported, never thrown.
template <typename Scalar>
std::pair<VectorX<Scalar>, SolveReport> gmres(const LinearOperator<Scalar>& A, const VectorX<Scalar>& b,
                                              const GmresOptions& options = {}) {
  const Eigen::Index n = b.size();
  if (n < 1 || A.rows != n) throw Error(ErrorKind::parameter, "gmres: dimension mismatch");
  if (!b.allFinite()) throw Error(ErrorKind::parameter, "gmres: right-hand side is not finite");

  SolveReport report;
  VectorX<Scalar> x = VectorX<Scalar>::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    report.converged = true;
    return {x, report};
  }
  const Eigen::Index m = options.max_iter > 0 ? std::min<Eigen::Index>(options.max_iter, n)
                                              : std::min<Eigen::Index>(n, 1000);

  VectorX<Scalar> r = b;
  for (int cycle = 0; cycle <= options.max_restarts; ++cycle) {
    const double beta = r.norm();
    MatrixX<Scalar> V(n, m + 1);
    MatrixX<Scalar> H = MatrixX<Scalar>::Zero(m + 1, m);
    std::vector<double> cs(m);
    std::vector<Scalar> sn(m);
    VectorX<Scalar> g = VectorX<Scalar>::Zero(m + 1);
    g(0) = beta;
    V.col(0) = r / beta;

    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      VectorX<Scalar> w = A(V.col(j));
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          const Scalar h = V.col(i).dot(w);
          H(i, j) += h;
          w -= h * V.col(i);
        }
      }
      const double hnext = w.norm();
      H(j + 1, j) = hnext;
      if (hnext > 0.0) V.col(j + 1) = w / hnext;

      for (Eigen::Index i = 0; i < j; ++i) detail::apply_givens(cs[i], sn[i], H(i, j), H(i + 1, j));
      detail::make_givens(H(j, j), H(j + 1, j), cs[j], sn[j]);
      detail::apply_givens(cs[j], sn[j], H(j, j), H(j + 1, j));
      H(j + 1, j) = Scalar(0);
      detail::apply_givens(cs[j], sn[j], g(j), g(j + 1));

      k = j + 1;
      const double estimate = std::abs(g(j + 1)) / bnorm;
      report.history.push_back(estimate);
      ++report.iterations;
      if (estimate <= options.tol || hnext == 0.0) break;
    }

    const VectorX<Scalar> y =
        H.topLeftCorner(k, k).template triangularView<Eigen::Upper>().solve(g.head(k));
    x += V.leftCols(k) * y;
    r = b - A(x);
    report.residual = r.norm() / bnorm;
    report.converged = report.residual <= options.tol;
    if (report.converged || report.history.back() > options.tol) break;
  }
  return {x, report};
}

/// LU with partial pivoting; the dense oracle for modest systems.
template <typename Derived, typename Rhs>
VectorX<typename Rhs::Scalar> dense_solve(const Eigen::MatrixBase<Derived>& A, const Eigen::MatrixBase<Rhs>& b) {
  using Scalar = typename Rhs::Scalar;
  const MatrixX<Scalar> M = A.template cast<Scalar>();
  return Eigen::PartialPivLU<MatrixX<Scalar>>(M).solve(b);
}

/// Diagonal change of variables y = sqrt(w) * sigma, under which the discrete
/// 2-norm of y approximates the L2 norm of sigma. The conjugated operator is
/// diag(sqrt w) A diag(1 / sqrt w).
struct WeightedEmbedding {
  Eigen::VectorXd sqrt_w;

  template <typename Derived>
  VectorX<typename Derived::Scalar> scale_in(const Eigen::MatrixBase<Derived>& sigma) const {
    using Scalar = typename Derived::Scalar;
    return (sqrt_w.template cast<Scalar>().array() * sigma.array()).matrix();
  }

  template <typename Derived>
  VectorX<typename Derived::Scalar> scale_out(const Eigen::MatrixBase<Derived>& y) const {
    using Scalar = typename Derived::Scalar;
    return (y.array() / sqrt_w.template cast<Scalar>().array()).matrix();
  }

  /// Returns diag(sqrt w) A diag(1 / sqrt w).
  Eigen::MatrixXd conjugate(const Eigen::MatrixXd& A) const {
    return sqrt_w.asDiagonal() * A * sqrt_w.cwiseInverse().asDiagonal();
  }

  template <typename Derived>
  double norm(const Eigen::MatrixBase<Derived>& sigma) const {
    return scale_in(sigma).norm();
  }
};

WeightedEmbedding weighted_embedding(const Eigen::VectorXd& weights);

}  // namespace lbsr

#endif  // LBSR_LINALG_HPP
