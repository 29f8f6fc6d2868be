#include "sfv/scheme.hpp"

#include <cmath>
#include <cstring>

#include <Eigen/SparseLU>
#include <fmt/format.h>

namespace sfv {

namespace {

double weighted_residual_norm(const CellField& r) {
  double sum = 0.0;
  const auto& cells = r.mesh()->cells();
  for (std::size_t k = 0; k < r.size(); ++k) sum += r[k] * r[k] / cells[k].measure;
  return std::sqrt(sum);
}

double noise_scale(const ProblemSpec& problem, const CellField& previous, double increment) {
  if (increment == 0.0) return discrete_l2_norm(previous);
  CellField g(previous.mesh());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = problem.noise(previous[k]);
  return discrete_l2_norm(previous) + std::abs(increment) * discrete_l2_norm(g);
}

bool take_inner(double v, UpwindRule rule) { return (v >= 0.0) == (rule == UpwindRule::upstream); }

}  // namespace

CellField assemble_residual(const ProblemSpec& problem, const CellField& candidate, const CellField& previous,
                            double increment, const EdgeVelocity& velocity, double tau, UpwindRule upwind) {
  require_same_mesh(candidate, previous);
  const auto& mesh = *candidate.mesh();
  CellField r(candidate.mesh());
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double m = mesh.cells()[k].measure;
    r[k] = m * (candidate[k] - previous[k]) - m * problem.noise(previous[k]) * increment -
           tau * m * problem.reaction(candidate[k]);
  }
  const auto& edges = mesh.interior_edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const double v = velocity.normal_velocity[i];
    double flux = tau * e.transmissibility() * (candidate[e.inner] - candidate[e.outer]);
    if (v != 0.0) {
      const double trace = take_inner(v, upwind) ? candidate[e.inner] : candidate[e.outer];
      flux += tau * e.measure * v * problem.flux(trace);
    }
    r[e.inner] += flux;
    r[e.outer] -= flux;
  }
  return r;
}

struct Stepper::Impl {
  Eigen::SparseMatrix<double> jacobian;
  std::vector<Eigen::Index> diag_slot;
  // Per edge: slots of (K,K), (L,L), (K,L), (L,K) in the value array.
  std::vector<std::array<Eigen::Index, 4>> edge_slot;
  std::vector<double> factored_values;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  bool has_factor = false;
  std::size_t factorizations = 0;

  Eigen::Index slot(Eigen::Index row, Eigen::Index col) const {
    const auto* outer = jacobian.outerIndexPtr();
    const auto* inner = jacobian.innerIndexPtr();
    for (Eigen::Index p = outer[col]; p < outer[col + 1]; ++p)
      if (inner[p] == row) return p;
    throw std::logic_error("missing Jacobian slot");
  }
};

Stepper::Stepper(const ProblemSpec& problem, MeshPtr mesh, StepperParams params)
    : problem_(problem), mesh_(std::move(mesh)), params_(params), impl_(std::make_unique<Impl>()) {
  impl_->jacobian = assemble_tpfa_stiffness(*mesh_);
  const auto n = static_cast<Eigen::Index>(mesh_->cell_count());
  impl_->diag_slot.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) impl_->diag_slot[static_cast<std::size_t>(k)] = impl_->slot(k, k);
  for (const auto& e : mesh_->interior_edges()) {
    const auto k = static_cast<Eigen::Index>(e.inner);
    const auto l = static_cast<Eigen::Index>(e.outer);
    impl_->edge_slot.push_back({impl_->slot(k, k), impl_->slot(l, l), impl_->slot(k, l), impl_->slot(l, k)});
  }
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

std::size_t Stepper::factorizations() const { return impl_->factorizations; }

StepResult Stepper::advance(const CellField& previous, double increment, const EdgeVelocity& velocity, double tau) {
  if (previous.mesh() != mesh_) throw std::invalid_argument("state lives on a different mesh than the stepper");
  const ProblemSpec& problem = problem_;
  const auto& cells = mesh_->cells();
  const auto& edges = mesh_->interior_edges();
  const std::size_t n = cells.size();

  StepResult out{previous, 0, 0.0};
  CellField& u = out.state;
  const double target = params_.newton_tolerance * noise_scale(problem, previous, increment);
  CellField r = assemble_residual(problem, u, previous, increment, velocity, tau, params_.upwind);
  out.residual = weighted_residual_norm(r);

  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  while (out.residual > target) {
    if (out.iterations >= params_.max_newton_iterations) {
      throw StepFailure(fmt::format("Newton did not converge in {} iterations (residual {:.3e}, target {:.3e})",
                                    out.iterations, out.residual, target),
                        0, out.residual);
    }
    // Jacobian of the residual at u.
    double* values = impl_->jacobian.valuePtr();
    std::fill(values, values + impl_->jacobian.nonZeros(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      values[impl_->diag_slot[k]] = cells[k].measure * (1.0 - tau * problem.reaction.derivative(u[k]));
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      const auto& s = impl_->edge_slot[i];
      const double t = tau * e.transmissibility();
      values[s[0]] += t;
      values[s[1]] += t;
      values[s[2]] -= t;
      values[s[3]] -= t;
      const double v = velocity.normal_velocity[i];
      if (v == 0.0) continue;
      if (take_inner(v, params_.upwind)) {
        const double c = tau * e.measure * v * problem.flux.derivative(u[e.inner]);
        values[s[0]] += c;  // d R_K / d u_K
        values[s[3]] -= c;  // d R_L / d u_K
      } else {
        const double c = tau * e.measure * v * problem.flux.derivative(u[e.outer]);
        values[s[2]] += c;  // d R_K / d u_L
        values[s[1]] -= c;  // d R_L / d u_L
      }
    }

    const auto nnz = static_cast<std::size_t>(impl_->jacobian.nonZeros());
    const bool same = impl_->has_factor && impl_->factored_values.size() == nnz &&
                      std::memcmp(impl_->factored_values.data(), values, nnz * sizeof(double)) == 0;
    if (!same) {
      if (!impl_->analyzed) {
        impl_->lu.analyzePattern(impl_->jacobian);
        impl_->analyzed = true;
      }
      impl_->lu.factorize(impl_->jacobian);
      if (impl_->lu.info() != Eigen::Success) {
        impl_->has_factor = false;
        throw SolverError("singular Newton Jacobian: " + impl_->lu.lastErrorMessage());
      }
      impl_->factored_values.assign(values, values + nnz);
      impl_->has_factor = true;
      ++impl_->factorizations;
    }

    for (std::size_t k = 0; k < n; ++k) rhs[static_cast<Eigen::Index>(k)] = -r[k];
    const Eigen::VectorXd delta = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) throw SolverError("Newton linear solve failed");
    for (std::size_t k = 0; k < n; ++k) u[k] += delta[static_cast<Eigen::Index>(k)];
    ++out.iterations;
    if (!u.all_finite()) throw StepFailure("Newton iterate became non-finite", 0, out.residual);
    r = assemble_residual(problem, u, previous, increment, velocity, tau, params_.upwind);
    out.residual = weighted_residual_norm(r);
  }
  return out;
}

StepResult newton_advance(const ProblemSpec& problem, const CellField& previous, double increment,
                          const EdgeVelocity& velocity, double tau, const StepperParams& params) {
  Stepper stepper(problem, previous.mesh(), params);
  return stepper.advance(previous, increment, velocity, tau);
}

VelocitySchedule::VelocitySchedule(const ProblemSpec& problem, MeshPtr mesh, TimeGrid grid) {
  steady_ = !problem.has_velocity() || problem.steady_velocity;
  if (!problem.has_velocity()) {
    per_step_.push_back(zero_edge_velocity(mesh, 0.0, grid.step()));
    return;
  }
  if (steady_) {
    per_step_.push_back(edge_velocity(problem.velocity, mesh, 0.0, grid.node(1)));
    return;
  }
  for (std::size_t n = 1; n <= grid.steps; ++n) {
    per_step_.push_back(edge_velocity(problem.velocity, mesh, grid.node(n - 1), grid.node(n)));
  }
}

const EdgeVelocity& VelocitySchedule::at(std::size_t step) const { return steady_ ? per_step_.front() : per_step_.at(step - 1); }

Trajectory run_path(const ProblemSpec& problem, const MeshPtr& mesh, const TimeGrid& grid, const NoisePath& path,
                    const StepperParams& params) {
  const VelocitySchedule schedule(problem, mesh, grid);
  Stepper stepper(problem, mesh, params);
  return run_path(problem, mesh, grid, path, schedule, stepper);
}

Trajectory run_path(const ProblemSpec& problem, const MeshPtr& mesh, const TimeGrid& grid, const NoisePath& path,
                    const VelocitySchedule& schedule, Stepper& stepper) {
  Trajectory traj;
  traj.grid = grid;
  traj.increments = coarsen(path, grid.steps);
  const double tau = grid.step();
  if (tau * problem.reaction_lipschitz > stepper.params().reaction_step_limit) {
    traj.warnings.push_back(fmt::format("tau * L_beta = {:.3g} exceeds {:.3g}", tau * problem.reaction_lipschitz,
                                        stepper.params().reaction_step_limit));
  }
  traj.states.reserve(grid.steps + 1);
  traj.states.push_back(cell_average(problem.initial, mesh));
  for (std::size_t n = 1; n <= grid.steps; ++n) {
    try {
      StepResult step = stepper.advance(traj.states.back(), traj.increments[n - 1], schedule.at(n), tau);
      traj.newton_iterations.push_back(step.iterations);
      traj.residuals.push_back(step.residual);
      traj.states.push_back(std::move(step.state));
    } catch (const StepFailure& failure) {
      throw StepFailure(fmt::format("step {}: {}", n, failure.what()), n, failure.residual());
    }
  }
  return traj;
}

}  // namespace sfv
