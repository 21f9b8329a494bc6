#include "wemin/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace wemin {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error("quadrature tolerances must be positive");
  }
  if (max_depth < 1) {
    throw Error("quadrature max_depth must be >= 1");
  }
}

Path::Path(std::vector<Complex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw Error("path needs at least 2 vertices");
  }
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    require_finite(vertices_[k], "path vertex");
    if (vertices_[k].imag() <= kBoundaryImMin) {
      throw Error("path vertex too close to the real axis");
    }
    if (k > 0 && vertices_[k] == vertices_[k - 1]) {
      throw Error("consecutive path vertices must be distinct");
    }
  }
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half; the rule
// is symmetric). Kronrod abscissae at even indices extend the embedded
// 7-point Gauss rule whose abscissae sit at the odd indices.
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
  Complex value;
  double error;
};

// One Gauss-Kronrod pass over the straight segment [a, b].
Panel gk15(const Expr& f, Complex a, Complex b) {
  const Complex center = 0.5 * (a + b);
  const Complex half = 0.5 * (b - a);

  Complex gauss(0.0, 0.0);
  Complex kronrod(0.0, 0.0);
  for (int k = 0; k < 8; ++k) {
    const double x = kKronrodNodes[k];
    Complex sum = evaluate(f, center + half * x);
    if (k != 7) {
      sum += evaluate(f, center - half * x);
    }
    kronrod += kKronrodWeights[k] * sum;
    if (k % 2 == 1) {
      gauss += kGaussWeights[k / 2] * sum;
    }
  }
  const double scale = std::abs(half);
  return {kronrod * half, std::abs(kronrod - gauss) * scale};
}

struct Accumulator {
  Complex total{0.0, 0.0};
  double error = 0.0;
  bool converged = true;
};

void refine(const Expr& f, Complex a, Complex b, const Panel& panel,
            double tol, int depth, int max_depth, Accumulator& acc) {
  if (panel.error <= tol || depth >= max_depth) {
    acc.total += panel.value;
    acc.error += panel.error;
    if (panel.error > tol) {
      acc.converged = false;
    }
    return;
  }
  const Complex mid = 0.5 * (a + b);
  refine(f, a, mid, gk15(f, a, mid), 0.5 * tol, depth + 1, max_depth, acc);
  refine(f, mid, b, gk15(f, mid, b), 0.5 * tol, depth + 1, max_depth, acc);
}

QuadratureOutcome integrate_segment_impl(const Expr& f, Complex from,
                                         Complex to,
                                         const QuadratureConfig& cfg) {
  cfg.validate();
  require_finite(from, "integrate_segment");
  require_finite(to, "integrate_segment");
  if (from == to) {
    return {Complex(0.0, 0.0), 0.0, true};
  }
  const Panel whole = gk15(f, from, to);
  double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(whole.value));
  QuadratureOutcome out;
  // The relative target depends on the final value; if heavy cancellation
  // shrinks it below the first estimate, tighten and rerun.
  for (int attempt = 0; attempt < 3; ++attempt) {
    Accumulator acc;
    refine(f, from, to, whole, tol, 0, cfg.max_depth, acc);
    const double bound =
        std::max(cfg.abs_tol, cfg.rel_tol * std::abs(acc.total));
    out = {acc.total, acc.error, acc.converged && acc.error <= bound};
    if (out.converged || !acc.converged) {
      return out;
    }
    tol = bound;
  }
  return out;
}

void require_in_half_plane(Complex z, const char* what) {
  require_finite(z, what);
  if (z.imag() <= kBoundaryImMin) {
    throw Error(std::string(what) + ": point too close to the real axis");
  }
}

}  // namespace

QuadratureOutcome integrate_segment_outcome(const Expr& f, Complex from,
                                            Complex to,
                                            const QuadratureConfig& cfg) {
  return integrate_segment_impl(f, from, to, cfg);
}

Complex integrate_segment(const Expr& f, Complex from, Complex to,
                          const QuadratureConfig& cfg) {
  QuadratureOutcome out = integrate_segment_impl(f, from, to, cfg);
  if (!out.converged) {
    throw QuadratureError("quadrature tolerance not reached at max depth",
                          out.value, out.error_estimate);
  }
  return out.value;
}

Complex integrate_path(const Expr& f, const Path& path,
                       const QuadratureConfig& cfg) {
  Complex total(0.0, 0.0);
  const auto& v = path.vertices();
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    total += integrate_segment(f, v[k], v[k + 1], cfg);
  }
  return total;
}

Complex integrate_from_base(const Expr& f, Complex base, Complex z,
                            const QuadratureConfig& cfg) {
  require_in_half_plane(base, "integrate_from_base");
  require_in_half_plane(z, "integrate_from_base");
  return integrate_segment(f, base, z, cfg);
}

namespace {

BatchEntry batch_entry(const Expr& f, Complex base, Complex target,
                       const QuadratureConfig& cfg) {
  BatchEntry entry;
  try {
    require_in_half_plane(target, "batch_antiderivative");
    QuadratureOutcome out = integrate_segment_impl(f, base, target, cfg);
    entry.value = out.value;
    entry.error_estimate = out.error_estimate;
    if (!out.converged) {
      entry.ok = false;
      entry.message = "quadrature tolerance not reached at max depth";
    }
  } catch (const Error& err) {
    entry.ok = false;
    entry.message = err.what();
  }
  return entry;
}

}  // namespace

std::vector<BatchEntry> batch_antiderivative(const Expr& f, Complex base,
                                             std::span<const Complex> targets,
                                             const QuadratureConfig& cfg) {
  require_in_half_plane(base, "batch_antiderivative");
  std::vector<BatchEntry> entries(targets.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long k = 0; k < static_cast<long long>(targets.size()); ++k) {
    entries[static_cast<std::size_t>(k)] =
        batch_entry(f, base, targets[static_cast<std::size_t>(k)], cfg);
  }
  return entries;
}

std::vector<BatchEntry> batch_antiderivative_serial(
    const Expr& f, Complex base, std::span<const Complex> targets,
    const QuadratureConfig& cfg) {
  require_in_half_plane(base, "batch_antiderivative");
  std::vector<BatchEntry> entries(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    entries[k] = batch_entry(f, base, targets[k], cfg);
  }
  return entries;
}

}  // namespace wemin
