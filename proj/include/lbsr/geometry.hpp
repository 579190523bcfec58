#ifndef LBSR_GEOMETRY_HPP
#define LBSR_GEOMETRY_HPP

#include <Eigen/Core>

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lbsr {

/// Which one-sided limit to take at a point where a piecewise quantity jumps.
enum class Side { left, right };

/// Position and arclength derivatives of the generating curve, in the
/// (r, z) half-plane.
struct CurvePoint {
  double r = 0.0;
  double z = 0.0;
  double dr = 0.0;
  double dz = 0.0;
  double d2r = 0.0;
  double d2z = 0.0;
};

/// Straight segment traversed from start to end at unit speed.
struct LineSegment {
  Eigen::Vector2d start;
  Eigen::Vector2d end;
};

/// Circular arc: center + radius * (cos phi, sin phi) with
/// phi(t) = phase + direction * t / radius, direction = +1 (ccw) or -1 (cw).
struct ArcSegment {
  Eigen::Vector2d center;
  double radius = 1.0;
  double phase = 0.0;
  double direction = 1.0;
  double sweep = 0.0;  // arclength covered by the arc
};

using CurveSegment = std::variant<LineSegment, ArcSegment>;

/// Arclength-parameterized, closed, piecewise-smooth generating curve of a
/// surface of revolution about the z axis. Immutable once built.
///
/// Breakpoints are the arclength values where consecutive segments meet with
/// a tangent discontinuity; they become the surface edges.
class GeneratingCurve {
 public:
  explicit GeneratingCurve(std::vector<CurveSegment> segments);

  double length() const { return length_; }
  bool closed() const { return closed_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<CurveSegment>& segments() const { return segments_; }

  /// Evaluates at arclength s, wrapped into [0, L). At a segment junction the
  /// side selects which segment supplies the derivatives.
  CurvePoint eval(double s, Side side = Side::right) const;

  bool is_breakpoint(double s, double tol = 1e-13) const;
  double min_radius() const { return min_radius_; }

 private:
  std::vector<CurveSegment> segments_;
  std::vector<double> starts_;  // arclength at the start of each segment
  std::vector<double> breakpoints_;
  double length_ = 0.0;
  double min_radius_ = 0.0;
  bool closed_ = false;
};

CurvePoint eval_point(const GeneratingCurve& curve, double s, Side side = Side::right);

/// Circle of center ((inner + outer) / 2, 0) and radius (outer - inner) / 2,
/// starting at the outermost point and running clockwise in the (r, z) plane.
GeneratingCurve circular_torus(double inner, double outer);

/// Closed polygon through the given (r, z) vertices, starting at the first
/// vertex. Every vertex is a breakpoint.
GeneratingCurve polygon_toroid(std::span<const Eigen::Vector2d> vertices);

/// The square with vertices (2,0), (1,0), (1,1), (2,1); s = 2 is the top
/// inner edge.
GeneratingCurve unit_square_toroid();

struct CurveSpec {
  std::string name;                      // circular-torus | polygon-toroid | unit-square-toroid
  std::map<std::string, double> params;  // inner, outer
  std::vector<Eigen::Vector2d> vertices;

  bool operator==(const CurveSpec&) const = default;
};

GeneratingCurve curve_from_catalog(const CurveSpec& spec);

/// Mean curvature with respect to the normal n = s_hat x theta_hat, using the
/// convention H = 1/a on a sphere of radius a with outward normal. Throws at a
/// breakpoint.
double mean_curvature(const GeneratingCurve& curve, double s);

/// Profile (meridian) curvature r' z'' - z' r'' and azimuthal term z' / r,
/// the two ingredients of the mean curvature.
double profile_curvature(const CurvePoint& pt);
double azimuthal_curvature(const CurvePoint& pt);

/// Signed area enclosed by the (r, z) loop; negative for clockwise traversal.
double signed_area(const GeneratingCurve& curve);

}  // namespace lbsr

#endif  // LBSR_GEOMETRY_HPP
