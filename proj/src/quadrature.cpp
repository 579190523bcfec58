#include "lbsr/quadrature.hpp"

#include "lbsr/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace lbsr {

namespace {

GaussRule compute_gauss_legendre(int k) {
  GaussRule rule{Eigen::VectorXd(k), Eigen::VectorXd(k)};
  const int m = (k + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (k + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= k; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = k * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= k; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = k * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes(i - 1) = -z;
    rule.nodes(k - i) = z;
    rule.weights(i - 1) = w;
    rule.weights(k - i) = w;
  }
  if (k % 2 == 1) rule.nodes(k / 2) = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int k) {
  if (k < 1 || k > 64) throw Error(ErrorKind::parameter, "Gauss-Legendre order must be in [1, 64]");
  static std::array<std::unique_ptr<GaussRule>, 65> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  if (!cache[k]) cache[k] = std::make_unique<GaussRule>(compute_gauss_legendre(k));
  return *cache[k];
}

GaussRule gauss_legendre(int k, double a, double b) {
  const GaussRule& ref = gauss_legendre(k);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  return {(mid + half * ref.nodes.array()).matrix(), half * ref.weights};
}

PanelMesh::PanelMesh(std::vector<double> boundaries, int order, std::vector<int> levels)
    : boundaries_(std::move(boundaries)), levels_(std::move(levels)), order_(order) {
  if (boundaries_.size() < 2) throw Error(ErrorKind::parameter, "mesh needs at least one panel");
  if (boundaries_.front() != 0.0) throw Error(ErrorKind::parameter, "mesh must start at 0");
  for (std::size_t i = 0; i + 1 < boundaries_.size(); ++i) {
    if (!(boundaries_[i + 1] > boundaries_[i])) throw Error(ErrorKind::parameter, "panel boundaries must increase");
  }
  if (levels_.empty()) levels_.assign(boundaries_.size() - 1, 0);
  if (levels_.size() != boundaries_.size() - 1) throw Error(ErrorKind::parameter, "one level per panel required");

  const GaussRule& ref = gauss_legendre(order_);
  nodes_.resize(size());
  weights_.resize(size());
  for (Eigen::Index i = 0; i < num_panels(); ++i) {
    const Panel p = panel(i);
    const double half = 0.5 * p.width();
    const double mid = 0.5 * (p.a + p.b);
    nodes_.segment(i * order_, order_) = (mid + half * ref.nodes.array()).matrix();
    weights_.segment(i * order_, order_) = half * ref.weights;
  }
}

double PanelMesh::min_width() const {
  double h = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < num_panels(); ++i) h = std::min(h, panel(i).width());
  return h;
}

Eigen::Index PanelMesh::locate(double x, Side side) const {
  const double L = length();
  if (x < 0.0 || x > L) throw Error(ErrorKind::parameter, "point outside [0, L]");
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), x);
  Eigen::Index i = (it - boundaries_.begin()) - 1;
  if (side == Side::left && i > 0 && x == boundaries_[i]) i -= 1;
  return std::clamp<Eigen::Index>(i, 0, num_panels() - 1);
}

bool PanelMesh::is_boundary(double x, double tol) const {
  for (double b : boundaries_) {
    if (std::abs(x - b) <= tol) return true;
  }
  return false;
}

PanelMesh build_mesh(double L, int panels_per_segment, std::span<const double> breakpoints, int order) {
  if (!(L > 0.0)) throw Error(ErrorKind::parameter, "empty domain");
  if (panels_per_segment < 1) throw Error(ErrorKind::parameter, "need at least one panel per segment");
  std::vector<double> edges = {0.0};
  for (double b : breakpoints) {
    if (b < 0.0 || b >= L) throw Error(ErrorKind::parameter, "breakpoint outside [0, L)");
    if (b > 0.0) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.push_back(L);

  std::vector<double> boundaries = {0.0};
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s];
    const double b = edges[s + 1];
    for (int k = 1; k < panels_per_segment; ++k) boundaries.push_back(a + (b - a) * k / panels_per_segment);
    boundaries.push_back(b);
  }
  return PanelMesh(std::move(boundaries), order);
}

PanelMesh build_mesh(const GeneratingCurve& curve, int panels_per_segment, int order) {
  return build_mesh(curve.length(), panels_per_segment, curve.breakpoints(), order);
}

PanelMesh dyadic_refine(const PanelMesh& mesh, std::span<const double> targets, int depth, RefineSides sides) {
  if (depth < 0) throw Error(ErrorKind::parameter, "negative refinement depth");
  std::vector<double> bounds = mesh.boundaries();
  std::vector<int> levels = mesh.levels();
  const double L = mesh.length();
  const double tol = 1e-13 * L;

  for (double target : targets) {
    auto find_boundary = [&](double x) -> std::ptrdiff_t {
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (std::abs(bounds[i] - x) <= tol) return static_cast<std::ptrdiff_t>(i);
      }
      return -1;
    };
    const std::ptrdiff_t idx = find_boundary(target);
    if (idx < 0) throw Error(ErrorKind::refinement, "refinement target is not a panel boundary");
    const bool at_start = idx == 0 || idx == static_cast<std::ptrdiff_t>(bounds.size()) - 1;

    // Refining toward the target from the left means repeatedly halving the
    // panel that ends there; from the right, the panel that starts there.
    if (sides != RefineSides::right) {
      const double x = at_start ? L : bounds[idx];
      for (int d = 0; d < depth; ++d) {
        auto it = std::lower_bound(bounds.begin(), bounds.end(), x - tol);
        const std::size_t j = it - bounds.begin();  // bounds[j] == x
        const double mid = 0.5 * (bounds[j - 1] + bounds[j]);
        const int lvl = levels[j - 1] + 1;
        levels[j - 1] = lvl;
        bounds.insert(bounds.begin() + j, mid);
        levels.insert(levels.begin() + j, lvl);
      }
    }
    if (sides != RefineSides::left) {
      const double x = at_start ? 0.0 : target;
      for (int d = 0; d < depth; ++d) {
        auto it = std::lower_bound(bounds.begin(), bounds.end(), x - tol);
        const std::size_t j = it - bounds.begin();
        const double mid = 0.5 * (bounds[j] + bounds[j + 1]);
        const int lvl = levels[j] + 1;
        levels[j] = lvl;
        bounds.insert(bounds.begin() + j + 1, mid);
        levels.insert(levels.begin() + j + 1, lvl);
      }
    }
  }
  return PanelMesh(std::move(bounds), mesh.order(), std::move(levels));
}

Eigen::VectorXd barycentric_weights(const Eigen::Ref<const Eigen::VectorXd>& nodes) {
  const Eigen::Index k = nodes.size();
  // Scale by the node spread to keep the products in range for large k.
  const double scale = 4.0 / (nodes.maxCoeff() - nodes.minCoeff() + (k == 1 ? 1.0 : 0.0));
  Eigen::VectorXd lambda(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    double prod = 1.0;
    for (Eigen::Index m = 0; m < k; ++m) {
      if (m != j) prod *= scale * (nodes(j) - nodes(m));
    }
    lambda(j) = 1.0 / prod;
  }
  return lambda;
}

Eigen::MatrixXd interpolation_matrix(const Eigen::Ref<const Eigen::VectorXd>& nodes,
                                     const Eigen::Ref<const Eigen::VectorXd>& points) {
  const Eigen::Index k = nodes.size();
  const Eigen::VectorXd lambda = barycentric_weights(nodes);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(points.size(), k);
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    const double x = points(i);
    Eigen::Index exact = -1;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (x == nodes(j)) exact = j;
    }
    if (exact >= 0) {
      P(i, exact) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double t = lambda(j) / (x - nodes(j));
      P(i, j) = t;
      denom += t;
    }
    P.row(i) /= denom;
  }
  return P;
}

Eigen::MatrixXd differentiation_matrix(const Eigen::Ref<const Eigen::VectorXd>& nodes) {
  const Eigen::Index k = nodes.size();
  const Eigen::VectorXd lambda = barycentric_weights(nodes);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i != j) D(i, j) = (lambda(j) / lambda(i)) / (nodes(i) - nodes(j));
    }
    D(i, i) = -D.row(i).sum();
  }
  return D;
}

double lagrange_interp(const Eigen::Ref<const Eigen::VectorXd>& nodes, const Eigen::Ref<const Eigen::VectorXd>& values,
                       double x) {
  return lagrange_interp(Panel{nodes.minCoeff(), nodes.maxCoeff()}, nodes, values, x);
}

double lagrange_interp(const Panel& panel, const Eigen::Ref<const Eigen::VectorXd>& nodes,
                       const Eigen::Ref<const Eigen::VectorXd>& values, double x) {
  if (nodes.size() != values.size()) throw Error(ErrorKind::parameter, "node/value size mismatch");
  if (!panel.contains(x)) throw Error(ErrorKind::extrapolation, "interpolation point outside the panel");
  Eigen::VectorXd pt(1);
  pt(0) = x;
  return (interpolation_matrix(nodes, pt) * values)(0);
}

SplitRule split_rule(const Panel& panel, double x, int k) {
  if (!(panel.a < x && x < panel.b)) throw Error(ErrorKind::degenerate_split, "split point must be interior");
  return {gauss_legendre(k, panel.a, x), gauss_legendre(k, x, panel.b)};
}

}  // namespace lbsr
