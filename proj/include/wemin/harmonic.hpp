#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wemin/contour.hpp"
#include "wemin/expr.hpp"
#include "wemin/types.hpp"

namespace wemin {

// Planar harmonic map f = h + conj(g), stored through its first-order data:
// f(z) = base_b + integral of h' from base_a to z
//               + conj(integral of g' from base_a to z).
// Everything the library measures (|Df|, Jacobian, dilatation, curvature) is
// first-order, so positions are recovered by contour integration only when
// needed.
struct HarmonicMap {
  Expr h_prime;
  Expr g_prime;
  Complex base_a;  // Im > 0
  Complex base_b;  // the value f(base_a)
  // Optional validation witness: a holomorphic expression whose real part
  // equals Re f. Used by tests, never by the evaluation path.
  std::optional<Expr> closed_form_re;
};

// Rectangular sampling grid in the open upper half-plane, row-major with the
// imaginary axis as the slow index (rows of constant Im, Re ascending).
struct GridSpec {
  double re_min = -3.0;
  double re_max = 3.0;
  double im_min = 1e-3;  // boundary exclusion
  double im_max = 3.0;
  int n_re = 50;
  int n_im = 50;

  void validate() const;
  std::size_t size() const {
    return static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im);
  }
  double re_at(int k) const;
  double im_at(int j) const;
  // Row-major: index = j * n_re + k.
  Complex point(int j, int k) const { return {re_at(k), im_at(j)}; }
};

struct BoundViolation {
  std::size_t index;  // grid index, row-major
  Complex z;
  double value;
};

struct PointFailure {
  std::size_t index;
  std::string message;
};

// Result of scanning a pointwise lower bound over a grid. Violations are
// ordered by grid index; the report is deterministic regardless of how the
// scan was parallelized.
struct BoundReport {
  double min_value = 0.0;
  Complex argmin{0.0, 0.0};
  double bound = 0.0;
  std::vector<BoundViolation> violations;
  std::size_t samples = 0;
  std::vector<PointFailure> failures;

  bool pass() const { return failures.empty() && violations.empty(); }
  std::string to_json() const;
};

// |Df(z)| = |h'(z)| + |g'(z)|
double df_norm(const HarmonicMap& m, Complex z);

// J(z, f) = |h'(z)|^2 - |g'(z)|^2; positive where the map is
// sense-preserving.
double jacobian(const HarmonicMap& m, Complex z);

// g'(z)/h'(z). Throws when h'(z) = 0.
Complex dilatation(const HarmonicMap& m, Complex z);

// f(z) via contour integration of (h', g') from the base point.
Complex evaluate_map(const HarmonicMap& m, Complex z,
                     const QuadratureConfig& cfg = {});

// Sharp lower bound Im(b)/Im(a) for |Df| of harmonic diffeomorphisms of the
// upper half-plane onto itself with f(a) = b.
double heinz_lower_bound(Complex a, Complex b);

// Scans |Df| over the grid against heinz_lower_bound(base_a, base_b).
BoundReport verify_heinz(const HarmonicMap& m, const GridSpec& grid,
                         double slack = 1e-9);
BoundReport verify_heinz_serial(const HarmonicMap& m, const GridSpec& grid,
                                double slack = 1e-9);

// a(z) = i(1+z)/(1-z), conformal from the unit disk onto the upper
// half-plane with a(0) = i; its inverse and derivative.
Complex cayley_disk_to_halfplane(Complex z);
Complex cayley_halfplane_to_disk(Complex w);
Complex cayley_derivative(Complex z);  // a'(z) = 2i/(1-z)^2

// Polar sampling grid on the closed disk of radius r_max < 1 (plus the
// center point), used for the disk-precomposed bound scan.
struct DiskGridSpec {
  double r_max = 0.95;
  int n_r = 40;
  int n_theta = 64;

  void validate() const;
};

// Scans |DF(z)| = |Df(a(z))| * |a'(z)| of the half-plane map m precomposed
// with the Cayley map, against (1/2) * dist(F(0), real axis) = Im(f(i))/2.
BoundReport verify_heinz_disk(const HarmonicMap& m, const DiskGridSpec& grid,
                              double slack = 1e-9,
                              const QuadratureConfig& cfg = {});

// P(z, t) = Im(z)/|z - t|^2 for Im z > 0.
double poisson_kernel(Complex z, double t);

enum class Domain { Disk, HalfPlane };

// Hyperbolic densities in the normalization used throughout:
// disk 1/(1-|z|^2), half-plane 1/(2 Im z).
double hyperbolic_density(Domain domain, Complex z);

// lambda_Omega(z) * (1 - |q(z)|^2) - |q'(z)|, nonnegative for any analytic
// q mapping the domain into the unit disk (Schwarz-Pick), zero exactly for
// conformal maps onto the disk.
double schwarz_pick_residual(const Expr& q, Complex z, Domain domain);
double schwarz_pick_residual(const Expr& q, const Expr& q_prime, Complex z,
                             Domain domain);

// Known lower-bound constants for |h'(0)| + |g'(0)| of harmonic
// diffeomorphisms onto a target domain Omega, normalized by
// dist(f(0), boundary of Omega). The conjectured values are open problems;
// nothing in this library attempts to settle them numerically.
namespace heinz_constants {
// Proved for every convex target.
inline constexpr double kConvexTarget = 0.25;
// Conjectured sharp value for convex targets.
inline constexpr double kConvexTargetConjectured = 0.5;
// Proved when the target is the unit disk (Heinz).
inline constexpr double kDiskTarget = 1.0 / std::numbers::pi;
// Conjectured sharp value for the unit disk target.
inline constexpr double kDiskTargetConjectured = 2.0 / std::numbers::pi;
// Sharp bound on |h'(0)| + |g'(0)| itself (not distance-normalized) for
// harmonic diffeomorphisms of the unit disk onto itself fixing the origin
// (Hall).
inline constexpr double kDiskOntoDiskFixedOrigin =
    3.0 * std::numbers::sqrt3 / (2.0 * std::numbers::pi);
}  // namespace heinz_constants

}  // namespace wemin
