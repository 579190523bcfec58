#ifndef LBSR_QUADRATURE_HPP
#define LBSR_QUADRATURE_HPP

#include "lbsr/geometry.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace lbsr {

/// Gauss-Legendre nodes (increasing) and weights on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// k-point rule, 1 <= k <= 64. Rules are computed once and cached.
const GaussRule& gauss_legendre(int k);

/// Maps the k-point reference rule onto [a, b].
GaussRule gauss_legendre(int k, double a, double b);

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double width() const { return b - a; }
  bool contains(double x) const { return a <= x && x <= b; }
};

/// Partition of [0, L] into panels, each carrying a k-point Gauss-Legendre
/// rule. Node (i, j) of panel i is stored at flat index i * k + j.
class PanelMesh {
 public:
  PanelMesh() = default;
  /// boundaries = {0 = a_1 < b_1 = a_2 < ... < b_M = L}; levels holds the
  /// refinement depth of each panel (empty means all zero).
  PanelMesh(std::vector<double> boundaries, int order, std::vector<int> levels = {});

  int order() const { return order_; }
  Eigen::Index num_panels() const { return static_cast<Eigen::Index>(boundaries_.size()) - 1; }
  Eigen::Index size() const { return num_panels() * order_; }
  double length() const { return boundaries_.back(); }

  const std::vector<double>& boundaries() const { return boundaries_; }
  const std::vector<int>& levels() const { return levels_; }
  Panel panel(Eigen::Index i) const { return {boundaries_[i], boundaries_[i + 1]}; }
  double min_width() const;

  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  auto panel_nodes(Eigen::Index i) const { return nodes_.segment(i * order_, order_); }
  auto panel_weights(Eigen::Index i) const { return weights_.segment(i * order_, order_); }

  /// Panel containing x in [0, L]; at a shared boundary the side picks the
  /// panel to the left or right of it.
  Eigen::Index locate(double x, Side side = Side::right) const;
  bool is_boundary(double x, double tol = 1e-13) const;

 private:
  std::vector<double> boundaries_;
  std::vector<int> levels_;
  int order_ = 0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

/// Divides each inter-breakpoint segment of [0, L] into panels_per_segment
/// equal panels. Breakpoints must lie in [0, L).
PanelMesh build_mesh(double L, int panels_per_segment, std::span<const double> breakpoints, int order = 16);
PanelMesh build_mesh(const GeneratingCurve& curve, int panels_per_segment, int order = 16);

enum class RefineSides { both, left, right };

/// Bisects the panels adjacent to each target `depth` times toward the
/// target. Targets must be panel boundaries (0 and L are the same point).
PanelMesh dyadic_refine(const PanelMesh& mesh, std::span<const double> targets, int depth,
                        RefineSides sides = RefineSides::both);

/// Barycentric weights for distinct nodes.
Eigen::VectorXd barycentric_weights(const Eigen::Ref<const Eigen::VectorXd>& nodes);

/// Row i holds the Lagrange basis functions of `nodes` evaluated at points(i).
Eigen::MatrixXd interpolation_matrix(const Eigen::Ref<const Eigen::VectorXd>& nodes,
                                     const Eigen::Ref<const Eigen::VectorXd>& points);

/// Spectral differentiation matrix D with (D v)_i = p'(nodes_i), p the
/// interpolant of v.
Eigen::MatrixXd differentiation_matrix(const Eigen::Ref<const Eigen::VectorXd>& nodes);

/// Interpolates values given at the nodes of one panel to x. Refuses to
/// extrapolate outside [min(nodes), max(nodes)] unless a panel is given.
double lagrange_interp(const Eigen::Ref<const Eigen::VectorXd>& nodes,
                       const Eigen::Ref<const Eigen::VectorXd>& values, double x);
double lagrange_interp(const Panel& panel, const Eigen::Ref<const Eigen::VectorXd>& nodes,
                       const Eigen::Ref<const Eigen::VectorXd>& values, double x);

/// Two k-point Gauss-Legendre rules covering [a, x] and [x, b].
struct SplitRule {
  GaussRule left;
  GaussRule right;
};

SplitRule split_rule(const Panel& panel, double x, int k);

}  // namespace lbsr

#endif  // LBSR_QUADRATURE_HPP
