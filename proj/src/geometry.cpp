#include "lbsr/geometry.hpp"

#include "lbsr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lbsr {

namespace {

double segment_length(const CurveSegment& seg) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) return (line->end - line->start).norm();
  return std::get<ArcSegment>(seg).sweep;
}

CurvePoint segment_eval(const CurveSegment& seg, double t) {
  CurvePoint pt;
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    const Eigen::Vector2d d = line->end - line->start;
    const Eigen::Vector2d tangent = d / d.norm();
    const Eigen::Vector2d x = line->start + t * tangent;
    pt.r = x.x();
    pt.z = x.y();
    pt.dr = tangent.x();
    pt.dz = tangent.y();
    return pt;
  }
  const auto& arc = std::get<ArcSegment>(seg);
  const double phi = arc.phase + arc.direction * t / arc.radius;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  pt.r = arc.center.x() + arc.radius * c;
  pt.z = arc.center.y() + arc.radius * s;
  pt.dr = -arc.direction * s;
  pt.dz = arc.direction * c;
  pt.d2r = -c / arc.radius;
  pt.d2z = -s / arc.radius;
  return pt;
}

Eigen::Vector2d segment_start(const CurveSegment& seg) {
  const CurvePoint p = segment_eval(seg, 0.0);
  return {p.r, p.z};
}

Eigen::Vector2d segment_end(const CurveSegment& seg) {
  const CurvePoint p = segment_eval(seg, segment_length(seg));
  return {p.r, p.z};
}

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                        const Eigen::Vector2d& q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on_segment = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= c.y() &&
           c.y() <= std::max(a.y(), b.y());
  };
  if (d1 == 0 && on_segment(p1, p2, q1)) return true;
  if (d2 == 0 && on_segment(p1, p2, q2)) return true;
  if (d3 == 0 && on_segment(q1, q2, p1)) return true;
  if (d4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double wrap(double s, double L) {
  double m = std::fmod(s, L);
  if (m < 0) m += L;
  if (m >= L) m = 0.0;
  return m;
}

}  // namespace

GeneratingCurve::GeneratingCurve(std::vector<CurveSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw Error(ErrorKind::geometry, "curve needs at least one segment");
  double s = 0.0;
  min_radius_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double len = segment_length(segments_[i]);
    if (!(len > 0.0)) throw Error(ErrorKind::geometry, "segment of zero length");
    starts_.push_back(s);
    s += len;

    if (const auto* arc = std::get_if<ArcSegment>(&segments_[i])) {
      // Minimum radius over the arc: check endpoints and the leftmost point if swept.
      const double phi0 = arc->phase;
      const double phi1 = arc->phase + arc->direction * arc->sweep / arc->radius;
      const double lo = std::min(phi0, phi1);
      const double hi = std::max(phi0, phi1);
      double rmin = std::min(segment_start(segments_[i]).x(), segment_end(segments_[i]).x());
      const double k = std::ceil((lo - std::numbers::pi) / (2 * std::numbers::pi));
      if (std::numbers::pi + 2 * std::numbers::pi * k <= hi) rmin = arc->center.x() - arc->radius;
      min_radius_ = std::min(min_radius_, rmin);
    } else {
      const auto& line = std::get<LineSegment>(segments_[i]);
      min_radius_ = std::min({min_radius_, line.start.x(), line.end.x()});
    }
  }
  length_ = s;
  if (!(min_radius_ > 0.0)) throw Error(ErrorKind::axis_violation, "curve touches or crosses the rotation axis");

  const double tol = 1e-12 * std::max(1.0, length_);
  closed_ = (segment_end(segments_.back()) - segment_start(segments_.front())).norm() <= tol;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    if ((segment_end(segments_[i]) - segment_start(segments_[i + 1])).norm() > tol)
      throw Error(ErrorKind::geometry, "segments are not contiguous");
  }

  // A junction is a breakpoint when the tangent or curvature jumps there.
  const std::size_t n = segments_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 && !closed_) continue;
    const CurveSegment& prev = segments_[(i + n - 1) % n];
    const CurvePoint a = segment_eval(prev, segment_length(prev));
    const CurvePoint b = segment_eval(segments_[i], 0.0);
    const double jump = std::abs(a.dr - b.dr) + std::abs(a.dz - b.dz) + std::abs(a.d2r - b.d2r) +
                        std::abs(a.d2z - b.d2z);
    if (jump > 1e-12) breakpoints_.push_back(starts_[i]);
  }
}

CurvePoint GeneratingCurve::eval(double s, Side side) const {
  double x = wrap(s, length_);
  std::size_t idx = std::upper_bound(starts_.begin(), starts_.end(), x) - starts_.begin() - 1;
  if (side == Side::left && x == starts_[idx]) {
    // Left limit at a junction: the end of the previous segment.
    if (idx == 0) {
      idx = segments_.size() - 1;
      x = length_;
    } else {
      idx -= 1;
    }
  }
  return segment_eval(segments_[idx], x - starts_[idx]);
}

bool GeneratingCurve::is_breakpoint(double s, double tol) const {
  const double x = wrap(s, length_);
  for (double b : breakpoints_) {
    if (std::abs(x - b) <= tol || std::abs(x - b - length_) <= tol || std::abs(x - b + length_) <= tol) return true;
  }
  return false;
}

CurvePoint eval_point(const GeneratingCurve& curve, double s, Side side) { return curve.eval(s, side); }

GeneratingCurve circular_torus(double inner, double outer) {
  if (!(inner > 0.0)) throw Error(ErrorKind::axis_violation, "inner radius must be positive");
  if (!(outer > inner)) throw Error(ErrorKind::parameter, "outer radius must exceed inner radius");
  ArcSegment arc;
  arc.center = {0.5 * (inner + outer), 0.0};
  arc.radius = 0.5 * (outer - inner);
  arc.phase = 0.0;
  arc.direction = -1.0;
  arc.sweep = 2 * std::numbers::pi * arc.radius;
  return GeneratingCurve({arc});
}

GeneratingCurve polygon_toroid(std::span<const Eigen::Vector2d> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorKind::geometry, "polygon needs at least three vertices");
  for (const auto& v : vertices) {
    if (!(v.x() > 0.0)) throw Error(ErrorKind::axis_violation, "polygon vertex at r <= 0");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
        throw Error(ErrorKind::geometry, "polygon is self-intersecting");
    }
  }
  std::vector<CurveSegment> segments;
  for (std::size_t i = 0; i < n; ++i) segments.emplace_back(LineSegment{vertices[i], vertices[(i + 1) % n]});
  return GeneratingCurve(std::move(segments));
}

GeneratingCurve unit_square_toroid() {
  const std::vector<Eigen::Vector2d> v = {{2.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}};
  return polygon_toroid(v);
}

GeneratingCurve curve_from_catalog(const CurveSpec& spec) {
  auto param = [&](const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) throw Error(ErrorKind::parameter, "missing curve parameter '" + key + "'");
    return it->second;
  };
  if (spec.name == "circular-torus") return circular_torus(param("inner"), param("outer"));
  if (spec.name == "polygon-toroid") return polygon_toroid(spec.vertices);
  if (spec.name == "unit-square-toroid") return unit_square_toroid();
  throw Error(ErrorKind::parameter, "unknown curve '" + spec.name + "'");
}

double profile_curvature(const CurvePoint& pt) { return pt.dr * pt.d2z - pt.dz * pt.d2r; }

double azimuthal_curvature(const CurvePoint& pt) { return pt.dz / pt.r; }

double mean_curvature(const GeneratingCurve& curve, double s) {
  if (curve.is_breakpoint(s)) throw Error(ErrorKind::non_smooth_point, "mean curvature requested at an edge");
  const CurvePoint pt = curve.eval(s);
  // n = s_hat x theta_hat = (-z' cos, -z' sin, r') is the left normal of the
  // profile, so both curvatures enter with a minus sign.
  return -0.5 * (profile_curvature(pt) + azimuthal_curvature(pt));
}

double signed_area(const GeneratingCurve& curve) {
  // Shoelace over a fine polyline; exact for polygons.
  double area = 0.0;
  for (std::size_t i = 0; i < curve.segments().size(); ++i) {
    const auto& seg = curve.segments()[i];
    const int pieces = std::holds_alternative<LineSegment>(seg) ? 1 : 2048;
    const double len = segment_length(seg);
    for (int k = 0; k < pieces; ++k) {
      const CurvePoint a = segment_eval(seg, len * k / pieces);
      const CurvePoint b = segment_eval(seg, len * (k + 1) / pieces);
      area += 0.5 * (a.r * b.z - b.r * a.z);
    }
  }
  return area;
}

}  // namespace lbsr
