#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sfv/report_io.hpp"
#include "sfv/study.hpp"

using namespace sfv;

namespace {

constexpr double pi = std::numbers::pi;

StudyConfig small_temporal() {
  StudyConfig c = default_config(StudyKind::temporal);
  c.mesh_levels = {8};
  c.time_steps = {4, 8, 16};
  c.reference_steps = 128;
  c.horizon = 0.01;
  c.paths = 16;
  return c;
}

}  // namespace

TEST(Study, ClosedFormHeat) {
  EXPECT_NEAR(closed_form_heat_reference({0.2, 0.7, 0.0}, 0.0, 2), std::cos(0.2 * pi) * std::cos(0.7 * pi), 1e-15);
  // u_t = Lap u by central differences
  const Point x{0.31, 0.62, 0.0};
  const double t = 0.05;
  const double dt = 1e-5;
  const double dx = 1e-4;
  const double ut = (closed_form_heat_reference(x, t + dt, 2) - closed_form_heat_reference(x, t - dt, 2)) / (2 * dt);
  double lap = 0.0;
  for (int i = 0; i < 2; ++i) {
    Point a = x;
    Point b = x;
    a[i] += dx;
    b[i] -= dx;
    lap += (closed_form_heat_reference(a, t, 2) - 2 * closed_form_heat_reference(x, t, 2) +
            closed_form_heat_reference(b, t, 2)) /
           (dx * dx);
  }
  EXPECT_NEAR(ut, lap, 1e-5);
  const CellField avg = cell_average([&](const Point& p) { return closed_form_heat_reference(p, t, 3); }, unit_mesh(3, 4));
  EXPECT_NEAR(mass(avg), 0.0, 1e-14);
}

TEST(Study, CoupledProfileOfSelfIsZero) {
  const auto mesh = unit_mesh(2, 4);
  const ProblemSpec p = make_preset("stochastic", PresetParams{});
  const Trajectory traj = run_path(p, mesh, {8, 0.05}, sample_path(1, 0, 8, 0.05));
  std::vector<std::size_t> parent(mesh->cell_count());
  for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = k;
  for (Interpolant i : {Interpolant::right, Interpolant::left}) {
    for (double e : coupled_error_profile(traj, traj, parent, i)) EXPECT_EQ(e, 0.0);
  }
}

TEST(Study, ValidationRejectsBadConfigs) {
  StudyConfig c = default_config(StudyKind::temporal);
  c.time_steps = {7, 16};
  EXPECT_THROW(validate_config(c), ConfigError);
  c = default_config(StudyKind::temporal);
  c.paths = 1;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = default_config(StudyKind::spatial);
  c.preset = "stochastic";
  EXPECT_THROW(validate_config(c), ConfigError);
  c = default_config(StudyKind::coupled);
  c.time_steps.pop_back();
  EXPECT_THROW(validate_config(c), ConfigError);
  c = default_config(StudyKind::hoelder);
  c.max_separation = 1024;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = default_config(StudyKind::projections);
  c.mesh_levels = {8, 24, 32};
  EXPECT_THROW(validate_config(c), ConfigError);
  c.mesh_levels = {8, 16};
  c.mesh_jitter = 0.0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = default_config(StudyKind::properties);
  c.preset = "nope";
  EXPECT_THROW(validate_config(c), ConfigError);
  for (StudyKind k : {StudyKind::properties, StudyKind::spatial, StudyKind::temporal, StudyKind::coupled,
                      StudyKind::hoelder, StudyKind::projections, StudyKind::mesh_info}) {
    EXPECT_NO_THROW(validate_config(default_config(k))) << to_string(k);
    EXPECT_EQ(study_kind_from_string(to_string(k)), k);
  }
}

TEST(Study, SmallSpatialStudyDecreases) {
  StudyConfig c = default_config(StudyKind::spatial);
  c.mesh_levels = {4, 8, 16};
  c.horizon = 0.05;
  const RateReport r = run_spatial_rate_study(c);
  ASSERT_EQ(r.rows.size(), 3u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LT(r.rows[i].err_mean_sq, r.rows[i - 1].err_mean_sq);
  EXPECT_GT(r.fit.slope, 0.8);
}

TEST(Study, DeterministicTemporalIsFirstOrder) {
  StudyConfig c = small_temporal();
  c.preset = "convection";
  c.horizon = 0.1;
  c.paths = 2;
  const RateReport r = run_temporal_rate_study(c);
  EXPECT_GE(r.fit.slope, 0.85);
  EXPECT_LE(r.fit.slope, 1.3);
  for (const auto& row : r.rows) EXPECT_EQ(row.ci, 0.0);
}

TEST(Study, ConfidenceIntervalShrinksWithPaths) {
  StudyConfig c = small_temporal();
  c.time_steps = {4, 8};
  const RateReport few = run_temporal_rate_study(c);
  c.paths *= 4;
  const RateReport many = run_temporal_rate_study(c);
  for (std::size_t i = 0; i < few.rows.size(); ++i) {
    EXPECT_NEAR(few.rows[i].ci / many.rows[i].ci, 2.0, 0.6) << "row " << i;
  }
}

TEST(Study, WorkerCountDoesNotChangeResults) {
  StudyConfig c = small_temporal();
  c.paths = 6;
  const std::string one = rate_csv(run_temporal_rate_study(c));
  c.workers = 3;
  const std::string three = rate_csv(run_temporal_rate_study(c));
  EXPECT_EQ(one, three);
}

TEST(Study, CoupledSmoke) {
  StudyConfig c = default_config(StudyKind::coupled);
  c.mesh_levels = {4, 8};
  c.time_steps = {4, 8};
  c.reference_cells = 16;
  c.reference_steps = 32;
  c.paths = 4;
  const RateReport r = run_coupled_rate_study(c);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_LT(r.rows[1].err_mean_sq, r.rows[0].err_mean_sq);
  EXPECT_EQ(r.rows[0].paths, 4u);
}

TEST(Study, HoelderSmoke) {
  StudyConfig c = default_config(StudyKind::hoelder);
  c.mesh_levels = {8};
  c.time_steps = {64};
  c.max_separation = 8;
  c.paths = 4;
  const HoelderDiagnostic d = run_hoelder_diagnostic(c);
  EXPECT_EQ(d.value.rows.size(), 4u);
  EXPECT_EQ(d.gradient.rows.size(), 4u);
  EXPECT_FALSE(d.value.fit_root);
  EXPECT_GT(d.value.fit.slope, 0.5);
}

TEST(Study, SlopesSoFar) {
  RateReport r;
  r.rows = {{0, 0.5, 0, 1, 0.25, 0}, {1, 0.25, 0, 1, 0.0625, 0}, {2, 0.125, 0, 1, 0.015625, 0}};
  r.refit();
  const auto s = r.slopes_so_far();
  EXPECT_TRUE(std::isnan(s[0]));
  EXPECT_NEAR(s[1], 1.0, 1e-12);
  EXPECT_NEAR(s[2], 1.0, 1e-12);
  EXPECT_NEAR(r.fit.slope, 1.0, 1e-12);
  EXPECT_FALSE(r.inconclusive);
  r.rows[1].ci = 0.2;
  r.refit();
  EXPECT_TRUE(r.inconclusive);
}

TEST(Study, PropertySuitePassesAndMutationsFail) {
  const StudyConfig c = default_config(StudyKind::properties);
  const PropertyReport good = run_property_suite(c);
  for (const auto& check : good.checks) EXPECT_TRUE(check.passed) << check.name << " " << check.value;
  EXPECT_TRUE(good.all_passed());

  StudyConfig flipped = c;
  flipped.mutation = Mutation::flip_upwind;
  const PropertyReport f = run_property_suite(flipped);
  ASSERT_NE(f.find("energy_upwind_convection"), nullptr);
  EXPECT_FALSE(f.find("energy_upwind_convection")->passed);

  StudyConfig skewed = c;
  skewed.mutation = Mutation::dibp_asymmetry;
  const PropertyReport s = run_property_suite(skewed);
  ASSERT_NE(s.find("dibp_identity"), nullptr);
  EXPECT_FALSE(s.find("dibp_identity")->passed);
}

TEST(Study, SpatialThreeDimensionalSmoke) {
  StudyConfig c = default_config(StudyKind::spatial);
  c.dimension = 3;
  c.mesh_levels = {4, 8};
  c.horizon = 0.02;
  c.time_step_factor = 0.1;
  const RateReport r = run_spatial_rate_study(c);
  EXPECT_GE(r.fit.slope, 0.9);
  EXPECT_LE(r.fit.slope, 2.2);
}

TEST(Study, ProvenanceHasSeedAndCommit) {
  const auto p = provenance(default_config(StudyKind::temporal));
  bool seed = false;
  bool commit = false;
  for (const auto& [k, v] : p) {
    seed = seed || (k == "seed" && v == "42");
    commit = commit || k == "commit";
  }
  EXPECT_TRUE(seed);
  EXPECT_TRUE(commit);
}
