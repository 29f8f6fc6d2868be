#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfv/discrete_ops.hpp"
#include "sfv/noise.hpp"
#include "sfv/problem.hpp"

namespace sfv {

class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, std::size_t step, double residual)
      : std::runtime_error(what), step_(step), residual_(residual) {}
  std::size_t step() const { return step_; }
  double residual() const { return residual_; }

 private:
  std::size_t step_;
  double residual_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepperParams {
  /// Newton stops once ||R||_w <= newton_tolerance * (||u^{n-1}||_2 + |dW| ||g(u^{n-1})||_2),
  /// with ||R||_w^2 = sum_K R_K^2 / m_K.
  double newton_tolerance = 1e-11;
  int max_newton_iterations = 30;
  /// tau * L_beta above this value produces a warning in the trajectory.
  double reaction_step_limit = 0.5;
  UpwindRule upwind = UpwindRule::upstream;
};

/// Per-cell residual of the semi-implicit step:
///   m_K (u_K - p_K) + tau sum m_s v_Ks f(u_s) + tau sum (m_s/d)(u_K - u_L)
///   - m_K g(p_K) dW - tau m_K beta(u_K)
CellField assemble_residual(const ProblemSpec& problem, const CellField& candidate, const CellField& previous,
                            double increment, const EdgeVelocity& velocity, double tau,
                            UpwindRule upwind = UpwindRule::upstream);

struct StepResult {
  CellField state;
  int iterations = 0;
  double residual = 0.0;
};

/// Newton solver for one step. Keeps the sparsity pattern and the last LU
/// factorization; the factorization is reused whenever the Jacobian values
/// repeat bit for bit (affine f and beta with a steady velocity).
/// Not thread-safe: use one Stepper per worker.
class Stepper {
 public:
  Stepper(const ProblemSpec& problem, MeshPtr mesh, StepperParams params = {});
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  StepResult advance(const CellField& previous, double increment, const EdgeVelocity& velocity, double tau);

  const StepperParams& params() const { return params_; }
  std::size_t factorizations() const;

 private:
  struct Impl;
  ProblemSpec problem_;
  MeshPtr mesh_;
  StepperParams params_;
  std::unique_ptr<Impl> impl_;
};

/// One step of the scheme from `previous`; convenience wrapper around Stepper.
StepResult newton_advance(const ProblemSpec& problem, const CellField& previous, double increment,
                          const EdgeVelocity& velocity, double tau, const StepperParams& params = {});

/// Edge velocities for every interval of a time grid. Steady fields are
/// integrated once.
class VelocitySchedule {
 public:
  VelocitySchedule(const ProblemSpec& problem, MeshPtr mesh, TimeGrid grid);
  const EdgeVelocity& at(std::size_t step) const;  // interval (t_{step-1}, t_step]

 private:
  std::vector<EdgeVelocity> per_step_;
  bool steady_ = true;
};

struct Trajectory {
  TimeGrid grid;
  std::vector<CellField> states;  // u^0 .. u^N
  std::vector<int> newton_iterations;
  std::vector<double> residuals;
  std::vector<double> increments;
  std::vector<std::string> warnings;
};

/// u^0 = cell averages of the initial datum, then N semi-implicit steps driven
/// by the path coarsened to `grid`. Step failures are rethrown with the step
/// index.
Trajectory run_path(const ProblemSpec& problem, const MeshPtr& mesh, const TimeGrid& grid, const NoisePath& path,
                    const StepperParams& params = {});

/// Same, reusing a velocity schedule and stepper across paths.
Trajectory run_path(const ProblemSpec& problem, const MeshPtr& mesh, const TimeGrid& grid, const NoisePath& path,
                    const VelocitySchedule& schedule, Stepper& stepper);

}  // namespace sfv
