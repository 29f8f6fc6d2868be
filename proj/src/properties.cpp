#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sfv/projections.hpp"
#include "sfv/study.hpp"

namespace sfv {

namespace {

constexpr std::uint64_t kFieldStream = 0x5eed0001;

CellField random_field(const MeshPtr& mesh, std::uint64_t seed, std::uint64_t stream) {
  CellField w(mesh);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = counter_normal(seed, stream, k);
  return w;
}

CellField zero_mean(CellField w) {
  const double shift = mass(w) / w.mesh()->domain().measure();
  for (std::size_t k = 0; k < w.size(); ++k) w[k] -= shift;
  return w;
}

std::vector<MeshPtr> property_meshes(std::uint64_t seed) {
  return {unit_mesh(2, 4), jittered_tensor_mesh(Box::unit(2), {7, 5}, 0.5, seed),
          jittered_tensor_mesh(Box::unit(3), {3, 4, 2}, 0.5, seed + 1)};
}

class Suite {
 public:
  void add(std::string name, bool passed, double value, double threshold, std::string detail = {}) {
    report.checks.push_back({std::move(name), passed, value, threshold, std::move(detail)});
  }
  // value <= threshold passes
  void bound(std::string name, double value, double threshold, std::string detail = {}) {
    add(std::move(name), std::isfinite(value) && value <= threshold, value, threshold, std::move(detail));
  }
  PropertyReport report;
};

void check_dibp(Suite& suite, const StudyConfig& config) {
  const double asymmetry = config.mutation == Mutation::dibp_asymmetry ? 1e-6 : 0.0;
  const auto meshes = property_meshes(config.seed);
  double worst = 0.0;
  std::size_t pair = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const MeshPtr& mesh = meshes[i % meshes.size()];
    const CellField w = random_field(mesh, config.seed, kFieldStream + 2 * i);
    const CellField v = random_field(mesh, config.seed, kFieldStream + 2 * i + 1);
    const double scale = discrete_h1_seminorm(w) * discrete_h1_seminorm(v) + 1.0;
    const double rel = dibp_gap(w, v, asymmetry) / scale;
    if (rel > worst) {
      worst = rel;
      pair = i;
    }
  }
  suite.bound("dibp_identity", worst, 1e-12, fmt::format("200 pairs on 3 meshes, worst pair {}", pair));
}

void check_laplacian(Suite& suite, const StudyConfig& config) {
  double adjoint = 0.0;
  double row_sum = 0.0;
  double definite = 0.0;  // largest <Lap w, w>, relative
  double identity = 0.0;  // |<Lap w, w> + |w|_{1,h}^2|
  double kernel = 0.0;
  for (const MeshPtr& mesh : property_meshes(config.seed)) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const CellField a = random_field(mesh, config.seed, 1000 + 2 * s);
      const CellField b = random_field(mesh, config.seed, 1001 + 2 * s);
      const CellField la = apply_tpfa_laplacian(a);
      const CellField lb = apply_tpfa_laplacian(b);
      const double scale = discrete_h1_seminorm(a) * discrete_h1_seminorm(b) + 1.0;
      adjoint = std::max(adjoint, std::abs(weighted_inner(la, b) - weighted_inner(a, lb)) / scale);
      row_sum = std::max(row_sum, std::abs(mass(la)) / scale);
      const double h1 = discrete_h1_seminorm(a);
      identity = std::max(identity, std::abs(weighted_inner(la, a) + h1 * h1) / (h1 * h1 + 1.0));
      definite = std::max(definite, weighted_inner(la, a) / (h1 * h1 + 1.0));
    }
    const CellField c(mesh, 3.25);
    kernel = std::max(kernel, discrete_l2_norm(apply_tpfa_laplacian(c)));
    // A non-constant field has a positive seminorm.
    CellField bump(mesh, 1.0);
    bump[0] = 2.0;
    if (!(discrete_h1_seminorm(bump) > 0.0)) kernel = std::max(kernel, 1.0);
  }
  suite.bound("laplacian_self_adjoint", adjoint, 1e-12);
  suite.bound("laplacian_zero_row_sum", row_sum, 1e-12);
  suite.bound("laplacian_energy_identity", identity, 1e-12, "<Lap w, w> = -|w|_{1,h}^2");
  suite.bound("laplacian_negative_semidefinite", definite, 1e-12);
  suite.bound("laplacian_kernel_constants", kernel, 1e-12);
}

void check_poincare(Suite& suite, const StudyConfig& config) {
  const MeshPtr mesh = unit_mesh(config.dimension, std::max<std::size_t>(config.mesh_levels.front(), 2));
  const double cp = poincare_constant_estimate(mesh);
  double worst = -1e300;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const CellField w = zero_mean(random_field(mesh, config.seed, 2000 + s));
    const double l2 = discrete_l2_norm(w);
    const double h1 = discrete_h1_seminorm(w);
    worst = std::max(worst, l2 * l2 - cp * h1 * h1);
  }
  suite.bound("poincare_bound", worst, 1e-10, fmt::format("C_p = {:.6g}", cp));
}

void check_upwind(Suite& suite, const StudyConfig& config) {
  double worst = 0.0;
  for (const MeshPtr& mesh : property_meshes(config.seed)) {
    const EdgeVelocity vel = edge_velocity(stream_velocity, mesh, 0.0, 0.1);
    const CellField u = random_field(mesh, config.seed, 3000);
    const auto trace = upwind_trace(u, vel);
    double total = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < mesh->cell_count(); ++k) {
      for (std::size_t e : mesh->cells()[k].interior_edges) {
        const double term = mesh->interior_edges()[e].measure * vel.seen_from(e, k) * trace[e];
        total += term;
        scale += std::abs(term);
      }
    }
    worst = std::max(worst, std::abs(total) / (scale + 1.0));
  }
  suite.bound("upwind_antisymmetry", worst, 1e-14);
}

/// Runs `paths` trajectories of the additive and stochastic presets and checks
/// the summed scheme.
void check_mass(Suite& suite, const StudyConfig& config) {
  const MeshPtr mesh = unit_mesh(config.dimension, config.mesh_levels.front());
  const TimeGrid grid{config.time_steps.front(), config.horizon};
  const std::size_t paths = std::max<std::size_t>(config.paths, 1);

  StudyConfig additive = config;
  additive.preset = "additive";
  const ProblemSpec p_add = problem_for(additive);
  const double c = config.noise_amplitude;
  const double area = p_add.domain.measure();

  StudyConfig stochastic = config;
  stochastic.preset = "stochastic";
  const ProblemSpec p_sto = problem_for(stochastic);

  double martingale = 0.0;   // worst |defect| / n
  double general = 0.0;
  const double tau = grid.step();
  for (std::size_t p = 0; p < paths; ++p) {
    const NoisePath path = sample_path(config.seed, p, grid.steps, config.horizon);
    const NoisePath coarse = coarsened(path, grid.steps);

    const Trajectory ta = run_path(p_add, mesh, grid, path, config.stepper);
    const double m0 = mass(ta.states.front());
    for (std::size_t n = 1; n <= grid.steps; ++n) {
      const double defect = std::abs(mass(ta.states[n]) - m0 - c * area * coarse.brownian(n));
      martingale = std::max(martingale, defect / static_cast<double>(n));
    }

    const Trajectory ts = run_path(p_sto, mesh, grid, path, config.stepper);
    double expected = mass(ts.states.front());
    for (std::size_t n = 1; n <= grid.steps; ++n) {
      double noise = 0.0;
      double react = 0.0;
      for (std::size_t k = 0; k < mesh->cell_count(); ++k) {
        const double m = mesh->cells()[k].measure;
        noise += m * p_sto.noise(ts.states[n - 1][k]);
        react += m * p_sto.reaction(ts.states[n][k]);
      }
      expected += ts.increments[n - 1] * noise + tau * react;
      general = std::max(general, std::abs(mass(ts.states[n]) - expected) / static_cast<double>(n));
    }
  }
  suite.bound("mass_martingale_identity", martingale, 1e-9,
              fmt::format("max_n |mass(u^n) - mass(u^0) - c|L|W(t_n)| / n over {} paths", paths));
  suite.bound("mass_identity_general", general, 1e-9, "stochastic preset, multiplicative noise and reaction");
}

/// Largest violation of the discrete energy inequality over all steps.
double energy_violation(const Trajectory& traj) {
  const double e0 = discrete_l2_norm(traj.states.front());
  const double tau = traj.grid.step();
  double dissipated = 0.0;
  double worst = -1e300;
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const double jump = discrete_l2_norm(traj.states[n] - traj.states[n - 1]);
    const double h1 = discrete_h1_seminorm(traj.states[n]);
    dissipated += jump * jump + 2.0 * tau * h1 * h1;
    const double l2 = discrete_l2_norm(traj.states[n]);
    worst = std::max(worst, l2 * l2 + dissipated - e0 * e0);
  }
  return worst;
}

void check_energy(Suite& suite, const StudyConfig& config) {
  StepperParams params = config.stepper;
  if (config.mutation == Mutation::flip_upwind) params.upwind = UpwindRule::downstream;
  const MeshPtr mesh = unit_mesh(config.dimension, config.mesh_levels.front());
  const TimeGrid grid{config.time_steps.front(), config.horizon};
  const NoisePath path = sample_path(config.seed, 0, grid.steps, config.horizon);

  StudyConfig heat = config;
  heat.preset = "heat";
  const double diffusion = energy_violation(run_path(problem_for(heat), mesh, grid, path, params));
  suite.bound("energy_pure_diffusion", diffusion, 1e-9);

  StudyConfig conv = config;
  conv.preset = "convection";
  ProblemSpec convection = problem_for(conv);
  double worst = energy_violation(run_path(convection, mesh, grid, path, params));
  // Convection-dominated variant: cell Peclet number above 1.
  const double amplify = 40.0 * static_cast<double>(config.mesh_levels.front()) / 8.0;
  convection.velocity = [amplify](double t, const Point& x) {
    Vector v = stream_velocity(t, x);
    for (double& c : v) c *= amplify;
    return v;
  };
  convection.flux_lipschitz = 1.0;
  worst = std::max(worst, energy_violation(run_path(convection, mesh, grid, path, params)));
  suite.bound("energy_upwind_convection", worst, 1e-9, fmt::format("stream velocity x1 and x{:g}", amplify));
}

void check_projections(Suite& suite, const StudyConfig& config) {
  const SmoothFunctionSpec spec = cosine_function(config.dimension);
  double residual = 0.0;
  double mass_defect = 0.0;
  for (std::size_t n : {4, 8, 16}) {
    const EllipticProjection proj = elliptic_projection(spec, unit_mesh(config.dimension, n));
    residual = std::max(residual, proj.balance_residual);
    mass_defect = std::max(mass_defect, proj.mass_defect);
  }
  suite.bound("elliptic_projection_residual", residual, 1e-11);
  suite.bound("elliptic_projection_mass", mass_defect, 1e-12);

  // Linearity: projection of a w1 + b w2 equals the combination of projections.
  const MeshPtr mesh = unit_mesh(config.dimension, 8);
  SmoothFunctionSpec w2{"cos(2 pi x1)",
                        [](const Point& x) { return std::cos(2.0 * std::numbers::pi * x[0]); },
                        [](const Point& x) {
                          return -4.0 * std::numbers::pi * std::numbers::pi * std::cos(2.0 * std::numbers::pi * x[0]);
                        },
                        true};
  const double a = 1.5;
  const double b = -0.75;
  SmoothFunctionSpec combo{"combo", [&](const Point& x) { return a * spec.value(x) + b * w2.value(x); },
                           [&](const Point& x) { return a * spec.laplacian(x) + b * w2.laplacian(x); }, true};
  const CellField lhs = elliptic_projection(combo, mesh).field;
  const CellField rhs = a * elliptic_projection(spec, mesh).field + b * elliptic_projection(w2, mesh).field;
  suite.bound("elliptic_projection_linearity", discrete_l2_norm(lhs - rhs), 1e-11);
}

void check_coupling(Suite& suite, const StudyConfig& config) {
  const MeshPtr coarse_mesh = unit_mesh(config.dimension, config.mesh_levels.front());
  const RefinedMesh fine = refine(*coarse_mesh);
  const ProblemSpec problem = problem_for(config);
  const std::size_t steps = config.time_steps.front();
  const TimeGrid grid{steps, config.horizon};
  const NoisePath path = sample_path(config.seed, 0, 2 * steps, config.horizon);

  // Reference against itself through the coarsening pipeline.
  const Trajectory ref = run_path(problem, fine.mesh, {2 * steps, config.horizon}, path, config.stepper);
  const Trajectory again = run_path(problem, fine.mesh, {2 * steps, config.horizon}, coarsened(path, 2 * steps),
                                    config.stepper);
  std::vector<std::size_t> identity(fine.mesh->cell_count());
  for (std::size_t k = 0; k < identity.size(); ++k) identity[k] = k;
  double self = 0.0;
  for (Interpolant side : {Interpolant::right, Interpolant::left}) {
    for (double e : coupled_error_profile(again, ref, identity, side)) self = std::max(self, e);
  }
  suite.add("coupling_self_zero", self == 0.0, self, 0.0);

  const CellField c = random_field(coarse_mesh, config.seed, 4000);
  const CellField lifted = inject(c, fine.mesh, fine.parent);
  double dist = 0.0;
  for (std::size_t f = 0; f < lifted.size(); ++f) dist = std::max(dist, std::abs(lifted[f] - c[fine.parent[f]]));
  suite.add("injection_distance_zero", dist == 0.0, dist, 0.0);

  // Coarsening commutes along a divisor chain.
  const NoisePath fine_path = sample_path(config.seed, 1, 4 * steps, config.horizon);
  const auto direct = coarsen(fine_path, steps);
  const auto twice = coarsen(coarsened(fine_path, 2 * steps), steps);
  double commute = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i) commute = std::max(commute, std::abs(direct[i] - twice[i]));
  suite.add("coarsen_commutes", commute == 0.0, commute, 0.0);

  // u^n depends on increments 1..n only.
  const std::size_t cut = steps / 2;
  const NoisePath on_grid = coarsened(path, steps);
  std::vector<double> truncated = on_grid.brownian_nodes();
  for (std::size_t n = cut + 1; n < truncated.size(); ++n) truncated[n] = truncated[cut];
  const NoisePath stopped(config.horizon, config.seed, 0, truncated);
  const Trajectory full = run_path(problem, coarse_mesh, grid, on_grid, config.stepper);
  const Trajectory part = run_path(problem, coarse_mesh, grid, stopped, config.stepper);
  double measurable = 0.0;
  for (std::size_t n = 0; n <= cut; ++n) measurable = std::max(measurable, discrete_l2_norm(full.states[n] - part.states[n]));
  suite.add("measurability", measurable == 0.0, measurable, 0.0, fmt::format("states 0..{} identical", cut));
}

}  // namespace

PropertyReport run_property_suite(const StudyConfig& config) {
  validate_config(config);
  Suite suite;
  check_dibp(suite, config);
  check_laplacian(suite, config);
  check_poincare(suite, config);
  check_upwind(suite, config);
  check_mass(suite, config);
  check_energy(suite, config);
  check_projections(suite, config);
  check_coupling(suite, config);
  return std::move(suite.report);
}

}  // namespace sfv
