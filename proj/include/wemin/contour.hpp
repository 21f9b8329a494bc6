#pragma once

#include <span>
#include <string>
#include <vector>

#include "wemin/expr.hpp"
#include "wemin/types.hpp"

namespace wemin {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 40;

  void validate() const;
};

// Polyline contour strictly inside the upper half-plane. The half-plane is
// convex, so every segment between vertices stays inside it.
class Path {
 public:
  explicit Path(std::vector<Complex> vertices);
  const std::vector<Complex>& vertices() const { return vertices_; }

 private:
  std::vector<Complex> vertices_;
};

struct QuadratureOutcome {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  bool converged = true;
};

// Raised when the requested tolerance is unreachable within max_depth; the
// best estimate and its error bound are carried along.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& message, Complex best_estimate,
                  double error_bound)
      : Error(message),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}
  Complex best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  Complex best_estimate_;
  double error_bound_;
};

// Adaptive Gauss-Kronrod (7/15) integration of f along the straight segment
// [from, to]. The returned error estimate satisfies
// error <= max(abs_tol, rel_tol * |value|); otherwise QuadratureError.
Complex integrate_segment(const Expr& f, Complex from, Complex to,
                          const QuadratureConfig& cfg = {});

// Same, but reports instead of throwing on non-convergence.
QuadratureOutcome integrate_segment_outcome(const Expr& f, Complex from,
                                            Complex to,
                                            const QuadratureConfig& cfg = {});

Complex integrate_path(const Expr& f, const Path& path,
                       const QuadratureConfig& cfg = {});

// Antiderivative value at z anchored at base, integrating along the straight
// segment base -> z. Both endpoints must lie strictly inside the upper
// half-plane (Im > kBoundaryImMin); path independence on the convex domain is
// what justifies the straight path.
Complex integrate_from_base(const Expr& f, Complex base, Complex z,
                            const QuadratureConfig& cfg = {});

struct BatchEntry {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  bool ok = true;
  std::string message;
};

// Antiderivative at every target, anchored at base. Individual failures are
// recorded per entry; the batch never aborts as a whole. Parallel over
// targets; results are identical to the serial reference.
std::vector<BatchEntry> batch_antiderivative(const Expr& f, Complex base,
                                             std::span<const Complex> targets,
                                             const QuadratureConfig& cfg = {});

// Serial reference implementation of batch_antiderivative.
std::vector<BatchEntry> batch_antiderivative_serial(
    const Expr& f, Complex base, std::span<const Complex> targets,
    const QuadratureConfig& cfg = {});

}  // namespace wemin
