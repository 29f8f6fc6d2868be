#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sfv/scheme.hpp"

using namespace sfv;

namespace {

constexpr double pi = std::numbers::pi;

ProblemSpec bare(const MeshPtr& mesh) {
  ProblemSpec p;
  p.name = "bare";
  p.domain = mesh->domain();
  p.initial = [](const Point& x) { return std::cos(pi * x[0]); };
  return p;
}

}  // namespace

TEST(Scheme, ConstantIsSteadyForDiffusion) {
  const auto mesh = unit_mesh(2, 4);
  const ProblemSpec p = bare(mesh);
  const CellField c(mesh, 1.7);
  const CellField r = assemble_residual(p, c, c, 0.0, zero_edge_velocity(mesh, 0, 0.1), 0.1);
  for (double v : r.values()) EXPECT_EQ(v, 0.0);
}

TEST(Scheme, ResidualSumTelescopes) {
  const auto mesh = unit_mesh(2, 6);
  PresetParams params;
  const ProblemSpec p = make_preset("stochastic", params);
  const double tau = 0.01;
  const double dw = 0.07;
  const EdgeVelocity vel = edge_velocity(p.velocity, mesh, 0.0, tau);
  CellField prev = cell_average(p.initial, mesh);
  CellField cand(mesh);
  for (std::size_t k = 0; k < cand.size(); ++k) cand[k] = prev[k] + 0.01 * std::sin(static_cast<double>(k));
  const CellField r = assemble_residual(p, cand, prev, dw, vel, tau);
  double expected = 0.0;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    const double m = mesh->cells()[k].measure;
    expected += m * (cand[k] - prev[k]) - dw * m * p.noise(prev[k]) - tau * m * p.reaction(cand[k]);
  }
  double sum = 0.0;
  for (double v : r.values()) sum += v;
  EXPECT_NEAR(sum, expected, 1e-15);
}

TEST(Scheme, AffineProblemConvergesInOneIteration) {
  const auto mesh = unit_mesh(2, 8);
  const ProblemSpec p = make_preset("stochastic", PresetParams{});
  const CellField u0 = cell_average(p.initial, mesh);
  const StepResult step = newton_advance(p, u0, 0.03, edge_velocity(p.velocity, mesh, 0.0, 0.01), 0.01);
  EXPECT_EQ(step.iterations, 1);
}

TEST(Scheme, DiffusionStepPreservesMass) {
  const auto mesh = unit_mesh(2, 8);
  const ProblemSpec p = bare(mesh);
  const CellField u0 = cell_average(p.initial, mesh);
  const StepResult step = newton_advance(p, u0, 0.0, zero_edge_velocity(mesh, 0, 0.01), 0.01);
  EXPECT_NEAR(mass(step.state), mass(u0), 1e-11);
}

TEST(Scheme, ScalarImplicitEulerReaction) {
  const auto mesh = unit_mesh(2, 3);
  ProblemSpec p = bare(mesh);
  p.reaction = ScalarLaw::linear(1.0);
  p.reaction_lipschitz = 1.0;
  const double tau = 0.1;
  const double c = 0.8;
  const StepResult step = newton_advance(p, CellField(mesh, c), 0.0, zero_edge_velocity(mesh, 0, tau), tau);
  for (double v : step.state.values()) EXPECT_NEAR(v, c / (1.0 - tau), 1e-13);
}

TEST(Scheme, AdditiveNoiseShift) {
  const auto mesh = unit_mesh(2, 4);
  ProblemSpec p = bare(mesh);
  p.noise = ScalarLaw::constant(1.0);
  const CellField u0 = cell_average(p.initial, mesh);
  const double dw = -0.21;
  const StepResult step = newton_advance(p, u0, dw, zero_edge_velocity(mesh, 0, 0.01), 0.01);
  const StepResult still = newton_advance(p, u0, 0.0, zero_edge_velocity(mesh, 0, 0.01), 0.01);
  for (std::size_t k = 0; k < u0.size(); ++k) EXPECT_NEAR(step.state[k], still.state[k] + dw, 1e-12);
}

TEST(Scheme, RunPathMetadataAndFactorReuse) {
  const auto mesh = unit_mesh(2, 8);
  const ProblemSpec p = make_preset("stochastic", PresetParams{});
  const TimeGrid grid{16, 0.05};
  const NoisePath path = sample_path(1, 0, 64, 0.05);
  const VelocitySchedule schedule(p, mesh, grid);
  Stepper stepper(p, mesh);
  const Trajectory traj = run_path(p, mesh, grid, path, schedule, stepper);
  EXPECT_EQ(traj.states.size(), 17u);
  EXPECT_EQ(traj.newton_iterations.size(), 16u);
  EXPECT_EQ(traj.increments, coarsen(path, 16));
  EXPECT_TRUE(traj.warnings.empty());
  for (const auto& s : traj.states) EXPECT_TRUE(s.all_finite());
  EXPECT_EQ(stepper.factorizations(), 1u);
}

TEST(Scheme, Deterministic) {
  const auto mesh = unit_mesh(2, 8);
  const ProblemSpec p = make_preset("stochastic", PresetParams{});
  const TimeGrid grid{8, 0.05};
  const NoisePath path = sample_path(3, 4, 8, 0.05);
  const Trajectory a = run_path(p, mesh, grid, path);
  const Trajectory b = run_path(p, mesh, grid, path);
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    for (std::size_t k = 0; k < a.states[n].size(); ++k) EXPECT_EQ(a.states[n][k], b.states[n][k]);
  }
}

TEST(Scheme, NonlinearFluxConverges) {
  const auto mesh = unit_mesh(2, 8);
  ProblemSpec p = make_preset("convection", PresetParams{});
  p.flux = ScalarLaw{[](double u) { return u + u * u * u; }, [](double u) { return 1.0 + 3.0 * u * u; }, false};
  const Trajectory traj = run_path(p, mesh, {10, 0.05}, sample_path(1, 0, 10, 0.05));
  for (int it : traj.newton_iterations) {
    EXPECT_GE(it, 1);
    EXPECT_LE(it, 6);
  }
  EXPECT_TRUE(check_assumptions(p).empty());
}

TEST(Scheme, StepFailureCarriesStepIndex) {
  const auto mesh = unit_mesh(2, 4);
  const ProblemSpec p = make_preset("stochastic", PresetParams{});
  StepperParams params;
  params.max_newton_iterations = 0;
  try {
    run_path(p, mesh, {4, 0.1}, sample_path(1, 0, 4, 0.1), params);
    FAIL() << "expected StepFailure";
  } catch (const StepFailure& e) {
    EXPECT_EQ(e.step(), 1u);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Scheme, LargeReactionStepWarns) {
  const auto mesh = unit_mesh(2, 4);
  ProblemSpec p = bare(mesh);
  p.reaction = ScalarLaw::linear(-20.0);
  p.reaction_lipschitz = 20.0;
  const Trajectory traj = run_path(p, mesh, {2, 0.1}, sample_path(1, 0, 2, 0.1));
  EXPECT_EQ(traj.warnings.size(), 1u);
}

TEST(Scheme, CouplingDivisibilityIsEnforced) {
  const auto mesh = unit_mesh(2, 4);
  const ProblemSpec p = make_preset("stochastic", PresetParams{});
  EXPECT_THROW(run_path(p, mesh, {3, 0.1}, sample_path(1, 0, 8, 0.1)), CouplingError);
}

TEST(Scheme, AssumptionChecks) {
  ProblemSpec p = make_preset("stochastic", PresetParams{});
  EXPECT_TRUE(check_assumptions(p).empty());
  p.flux = ScalarLaw{[](double u) { return 1.0 - u; }, [](double) { return -1.0; }, true};
  p.reaction = ScalarLaw::constant(0.5);
  EXPECT_GE(check_assumptions(p).size(), 3u);
}

TEST(Scheme, PresetsAreRegistered) {
  for (const auto& name : preset_names()) {
    const ProblemSpec p = make_preset(name, PresetParams{});
    EXPECT_EQ(p.name, name);
    EXPECT_NEAR(p.initial({0.0, 0.0, 0.0}), 1.0, 1e-15);
  }
  EXPECT_THROW(make_preset("nope", PresetParams{}), std::invalid_argument);
  const Vector v = stream_velocity(0.0, {0.0, 0.3, 0.0});
  EXPECT_NEAR(v[0], 0.0, 1e-15);
}
