#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfv/discrete_ops.hpp"
#include "sfv/mesh.hpp"
#include "sfv/rates.hpp"

namespace sfv {

/// A smooth function with its analytic Laplacian.
struct SmoothFunctionSpec {
  std::string name;
  ScalarField value;
  ScalarField laplacian;
  bool neumann_compatible = true;
};

/// Compares the supplied Laplacian against a central-difference Laplacian at
/// `samples` pseudo-random interior points. Returns the worst relative
/// mismatch, measured against max(1, |Lap w|).
double laplacian_self_check(const SmoothFunctionSpec& spec, const Box& domain, int samples = 32,
                            std::uint64_t seed = 7);

struct EllipticProjection {
  CellField field;
  /// max_K |sum_sigma tau_sigma (w_K - w_L) + int_K Lap w| / max_K |int_K Lap w|,
  /// against the right-hand side after its (quadrature-level) sum is removed.
  double balance_residual = 0.0;
  /// |sum_K m_K w_K - int w|
  double mass_defect = 0.0;
  /// |sum_K int_K Lap w| / sum_K |int_K Lap w|; nonzero only from quadrature
  /// or incompatible data.
  double compatibility_defect = 0.0;
  int iterations = 0;
  bool compatibility_warning = false;
};

/// Solves sum_K m_K w_K = int w and
/// sum_{sigma in E_K} tau_sigma (w_K - w_L) = -int_K Lap w for every K,
/// by zero-mean CG followed by a mean shift. Throws ConvergenceError on a
/// disconnected mesh or when CG fails to reach `tolerance`.
EllipticProjection elliptic_projection(const SmoothFunctionSpec& spec, const MeshPtr& mesh,
                                       double tolerance = 1e-13, int max_iterations = 20000);

/// w evaluated at the cell centers.
CellField centered_projection(const ScalarField& w, const MeshPtr& mesh);

/// ||w - c||_{L^2} for a piecewise-constant c, 5-point Gauss per axis.
double l2_distance(const ScalarField& w, const CellField& c);

struct ProjectionRow {
  double h = 0.0;
  double elliptic_error = 0.0;  // ||w - w~||_2
  double centered_error = 0.0;  // ||w - w^||_2
  double seminorm_gap = 0.0;    // |w^ - w~|_{1,h}
  double balance_residual = 0.0;
  double mass_defect = 0.0;
};

struct ProjectionReport {
  std::string function;
  std::vector<ProjectionRow> rows;
  RateFit elliptic_fit;
  RateFit centered_fit;
  RateFit seminorm_fit;
  bool all_decreasing = false;
};

/// Error table over a mesh family (at least three levels). Fits are skipped
/// (left at zero) for columns that vanish to roundoff.
ProjectionReport projection_error_report(const SmoothFunctionSpec& spec, const std::vector<MeshPtr>& meshes);

/// cos(pi x1) cos(pi x2) [cos(pi x3)] with Laplacian -d pi^2 w.
SmoothFunctionSpec cosine_function(int dimension);

}  // namespace sfv
