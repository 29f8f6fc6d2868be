#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sfv/noise.hpp"
#include "sfv/problem.hpp"
#include "sfv/rates.hpp"
#include "sfv/scheme.hpp"

namespace sfv {

enum class StudyKind { properties, spatial, temporal, coupled, hoelder, projections, mesh_info };

std::string to_string(StudyKind kind);
StudyKind study_kind_from_string(const std::string& name);

/// Which piecewise-constant-in-time interpolant is compared: right uses u^n on
/// [t_{n-1}, t_n), left uses u^{n-1}.
enum class Interpolant { right, left };

enum class Mutation { none, flip_upwind, dibp_asymmetry };

std::string to_string(Mutation mutation);
Mutation mutation_from_string(const std::string& name);

struct StudyConfig {
  StudyKind study = StudyKind::properties;
  std::string preset = "stochastic";
  int dimension = 2;
  double horizon = 0.1;
  double noise_amplitude = 0.5;
  double reaction_rate = 0.2;

  /// Cells per axis for each level (spatial, coupled, projections); a single
  /// entry is the fixed mesh of temporal/hoelder runs.
  std::vector<std::size_t> mesh_levels;
  /// Nonzero: levels are successive refinements of a jittered tensor mesh
  /// with mesh_levels[0] cells per axis (projection study).
  double mesh_jitter = 0.0;
  /// Step counts per level (temporal, coupled); one entry for hoelder.
  std::vector<std::size_t> time_steps;
  std::size_t reference_steps = 0;
  std::size_t reference_cells = 0;
  /// Coupled study against the closed-form heat solution instead of a fine run.
  bool closed_form_reference = false;
  /// Spatial study: tau = time_step_factor * (cell width)^2.
  double time_step_factor = 0.05;
  /// Hoelder study: separations 1, 2, 4, ..., max_separation steps.
  std::size_t max_separation = 16;

  std::size_t paths = 64;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  Interpolant interpolant = Interpolant::right;
  Mutation mutation = Mutation::none;
  StepperParams stepper;
  std::string out_dir;
};

/// Defaults for each study, matching the acceptance experiments.
StudyConfig default_config(StudyKind kind);

/// Throws ConfigError on divisor-chain violations, M < 2 for Monte Carlo
/// studies, unknown presets or empty level lists.
void validate_config(const StudyConfig& config);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ProblemSpec problem_for(const StudyConfig& config);

/// Meshes of the configured levels: uniform, or nested refinements of a
/// jittered base mesh when mesh_jitter > 0.
std::vector<MeshPtr> study_meshes(const StudyConfig& config);

struct RateRow {
  std::size_t level = 0;
  double h = 0.0;
  double tau = 0.0;
  std::size_t paths = 0;
  double err_mean_sq = 0.0;
  double ci = 0.0;
};

struct RateReport {
  std::string study;
  std::string preset;
  std::string quantity;  // what err_mean_sq measures
  enum class Abscissa { h, tau } abscissa = Abscissa::h;
  /// Fit log(sqrt(err_mean_sq)) when true, log(err_mean_sq) otherwise.
  bool fit_root = true;
  std::vector<RateRow> rows;
  RateFit fit;
  bool inconclusive = false;
  std::vector<std::pair<std::string, std::string>> metadata;
  double wall_seconds = 0.0;

  double abscissa_of(const RateRow& row) const { return abscissa == Abscissa::h ? row.h : row.tau; }
  double ordinate_of(const RateRow& row) const;
  /// Slope fitted on rows [0, i]; NaN for the first row.
  std::vector<double> slopes_so_far() const;
  void refit();
};

/// e^{-d pi^2 t} prod_i cos(pi x_i), the Neumann heat solution on the unit
/// square/cube for the cosine-product datum.
double closed_form_heat_reference(const Point& x, double t, int dimension);

/// Runs `task(path_index, worker)` for every path on `workers` threads.
/// Results must be written to per-index slots; reduction happens afterwards
/// in index order.
void for_each_path(std::size_t paths, unsigned workers, const std::function<void(std::size_t, unsigned)>& task);

/// Squared discrete L2 distance at each node t_k (k = 0..N) of `coarse`'s
/// grid between the chosen interpolants of `coarse` and `fine`, evaluated on
/// the fine mesh through `parent` (fine cell -> coarse cell). Fine steps
/// must be a multiple of coarse steps.
std::vector<double> coupled_error_profile(const Trajectory& coarse, const Trajectory& fine,
                                          const std::vector<std::size_t>& parent, Interpolant interpolant);

RateReport run_spatial_rate_study(const StudyConfig& config);
RateReport run_temporal_rate_study(const StudyConfig& config);
RateReport run_coupled_rate_study(const StudyConfig& config);

struct HoelderDiagnostic {
  RateReport value;     // E ||u(t) - u(s)||_2^2
  RateReport gradient;  // E |u(t) - u(s)|_{1,h}^2
};
HoelderDiagnostic run_hoelder_diagnostic(const StudyConfig& config);

struct PropertyCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
  const PropertyCheck* find(const std::string& name) const;
};

/// Every discrete identity and invariant on randomized inputs with fixed
/// seeds; `config.mutation` injects a defect for mutation testing.
PropertyReport run_property_suite(const StudyConfig& config);

/// Reproducibility metadata common to all reports.
std::vector<std::pair<std::string, std::string>> provenance(const StudyConfig& config);

std::string build_commit();

}  // namespace sfv
