#ifndef LBSR_ERRORS_HPP
#define LBSR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lbsr {

enum class ErrorKind {
  parameter,
  axis_violation,
  geometry,
  non_smooth_point,
  refinement,
  extrapolation,
  degenerate_split,
  jump_point,
  well_posedness,
  assembly,
  solver,
  solvability,
  singular_data,
  degenerate_reference,
  config,
  harness,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers can branch
/// on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::axis_violation: return "axis violation";
    case ErrorKind::geometry: return "geometry error";
    case ErrorKind::non_smooth_point: return "non-smooth point";
    case ErrorKind::refinement: return "refinement error";
    case ErrorKind::extrapolation: return "extrapolation refused";
    case ErrorKind::degenerate_split: return "degenerate split";
    case ErrorKind::jump_point: return "kernel jump point";
    case ErrorKind::well_posedness: return "ill-posed problem";
    case ErrorKind::assembly: return "assembly error";
    case ErrorKind::solver: return "solver error";
    case ErrorKind::solvability: return "solvability error";
    case ErrorKind::singular_data: return "singular data";
    case ErrorKind::degenerate_reference: return "degenerate reference";
    case ErrorKind::config: return "config error";
    case ErrorKind::harness: return "harness error";
  }
  return "error";
}

}  // namespace lbsr

#endif  // LBSR_ERRORS_HPP
