#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>

#include "sfv/field.hpp"
#include "sfv/mesh.hpp"

namespace sfv {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sqrt(sum_K m_K w_K^2)
double discrete_l2_norm(const CellField& w);

/// sqrt(sum_{sigma = K|L} (m_sigma / d_K|L) (w_K - w_L)^2)
double discrete_h1_seminorm(const CellField& w);

/// sum_K m_K w_K
double mass(const CellField& w);

/// sum_K m_K a_K b_K
double weighted_inner(const CellField& a, const CellField& b);

/// Symmetric TPFA stiffness matrix A with A_KK = sum tau_sigma and
/// A_KL = -tau_sigma, tau_sigma = m_sigma / d_K|L. Depends only on the mesh,
/// so it is assembled once and shared.
Eigen::SparseMatrix<double> assemble_tpfa_stiffness(const AdmissibleMesh& mesh);

/// Discrete Neumann Laplacian: (1/m_K) sum_sigma tau_sigma (w_L - w_K).
CellField apply_tpfa_laplacian(const CellField& w);

bool is_connected(const AdmissibleMesh& mesh);

/// Factorization of the TPFA stiffness with the last cell grounded. Solves
/// A x = b for b with zero sum and returns the solution with zero m-weighted
/// mean.
class NeumannSolver {
 public:
  explicit NeumannSolver(MeshPtr mesh);
  CellField solve(const std::vector<double>& rhs) const;

 private:
  struct Impl;
  MeshPtr mesh_;
  std::shared_ptr<const Impl> impl_;
};

struct CgResult {
  std::vector<double> solution;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients on the zero-sum complement of
/// the TPFA stiffness. `rhs` must sum to zero; iterates are kept orthogonal
/// to constants.
CgResult solve_zero_mean_cg(const Eigen::SparseMatrix<double>& stiffness, const std::vector<double>& rhs,
                            double tolerance, int max_iterations);

using VelocityField = std::function<Vector(double t, const Point& x)>;

/// Space-time averaged normal velocity per interior edge, oriented from
/// `inner` to `outer`. The value seen from `outer` is the negation.
struct EdgeVelocity {
  MeshPtr mesh;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::vector<double> normal_velocity;

  double seen_from(std::size_t edge, std::size_t cell) const {
    const double v = normal_velocity[edge];
    return mesh->interior_edges()[edge].inner == cell ? v : -v;
  }
};

/// 3-point Gauss per tangential axis on each edge times 2-point Gauss on
/// (t_begin, t_end].
EdgeVelocity edge_velocity(const VelocityField& velocity, const MeshPtr& mesh, double t_begin, double t_end);

EdgeVelocity zero_edge_velocity(const MeshPtr& mesh, double t_begin, double t_end);

enum class UpwindRule {
  upstream,
  downstream  // sign-flipped trace, only for mutation testing
};

/// Edge value taken from `inner` when v_K,sigma >= 0, else from `outer`.
std::vector<double> upwind_trace(const CellField& u, const EdgeVelocity& v, UpwindRule rule = UpwindRule::upstream);

/// Gap between the two sides of the discrete integration-by-parts identity.
/// `asymmetry` scales the transmissibility seen from the `inner` cell on the
/// cell-wise side by (1 + asymmetry); it is zero except in mutation tests.
double dibp_gap(const CellField& w, const CellField& v, double asymmetry = 0.0);

/// Largest ||w||_2^2 / |w|_{1,h}^2 over fields with zero mass, i.e. the
/// inverse of the smallest nonzero generalized eigenvalue of (A, diag m_K).
/// Power iteration on the inverse operator until the Rayleigh quotient
/// settles to `tolerance` (relative).
double poincare_constant_estimate(const MeshPtr& mesh, double tolerance = 1e-8, int max_iterations = 10000);

}  // namespace sfv
