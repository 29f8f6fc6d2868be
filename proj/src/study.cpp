#include "sfv/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "sfv/projections.hpp"

#ifndef SFV_COMMIT
#define SFV_COMMIT "unknown"
#endif

namespace sfv {

std::string build_commit() { return SFV_COMMIT; }

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::properties: return "properties";
    case StudyKind::spatial: return "spatial";
    case StudyKind::temporal: return "temporal";
    case StudyKind::coupled: return "coupled";
    case StudyKind::hoelder: return "hoelder";
    case StudyKind::projections: return "projections";
    case StudyKind::mesh_info: return "mesh-info";
  }
  return "unknown";
}

StudyKind study_kind_from_string(const std::string& name) {
  for (StudyKind k : {StudyKind::properties, StudyKind::spatial, StudyKind::temporal, StudyKind::coupled,
                      StudyKind::hoelder, StudyKind::projections, StudyKind::mesh_info}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(fmt::format("unknown study '{}'", name));
}

std::string to_string(Mutation mutation) {
  switch (mutation) {
    case Mutation::none: return "none";
    case Mutation::flip_upwind: return "flip-upwind";
    case Mutation::dibp_asymmetry: return "dibp-asymmetry";
  }
  return "unknown";
}

Mutation mutation_from_string(const std::string& name) {
  for (Mutation m : {Mutation::none, Mutation::flip_upwind, Mutation::dibp_asymmetry}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError(fmt::format("unknown mutation '{}'", name));
}

StudyConfig default_config(StudyKind kind) {
  StudyConfig c;
  c.study = kind;
  switch (kind) {
    case StudyKind::properties:
    case StudyKind::mesh_info:
      c.mesh_levels = {8};
      c.time_steps = {16};
      c.horizon = 0.05;
      c.paths = 8;
      break;
    case StudyKind::spatial:
      c.preset = "heat";
      c.mesh_levels = {8, 16, 32, 64};
      c.horizon = 0.1;
      c.paths = 1;
      break;
    case StudyKind::temporal:
      c.mesh_levels = {32};
      c.time_steps = {8, 16, 32, 64, 128};
      c.reference_steps = 1024;
      c.horizon = 1e-3;
      c.paths = 64;
      break;
    case StudyKind::coupled:
      c.mesh_levels = {8, 16, 32, 64};
      c.time_steps = {8, 16, 32, 64};
      c.reference_cells = 64;
      c.reference_steps = 512;
      c.horizon = 0.1;
      c.paths = 64;
      break;
    case StudyKind::hoelder:
      c.mesh_levels = {32};
      c.time_steps = {1024};
      c.max_separation = 16;
      c.horizon = 2e-3;
      c.paths = 64;
      break;
    case StudyKind::projections:
      c.mesh_levels = {8, 16, 32, 64};
      c.mesh_jitter = 0.3;
      c.paths = 1;
      break;
  }
  return c;
}

ProblemSpec problem_for(const StudyConfig& config) {
  PresetParams params;
  params.dimension = config.dimension;
  params.horizon = config.horizon;
  params.noise_amplitude = config.noise_amplitude;
  params.reaction_rate = config.reaction_rate;
  return make_preset(config.preset, params);
}

std::vector<MeshPtr> study_meshes(const StudyConfig& config) {
  std::vector<MeshPtr> out;
  if (config.mesh_jitter == 0.0) {
    for (std::size_t n : config.mesh_levels) out.push_back(unit_mesh(config.dimension, n));
    return out;
  }
  const std::size_t base = config.mesh_levels.front();
  MeshPtr mesh = jittered_tensor_mesh(Box::unit(config.dimension),
                                      std::vector<std::size_t>(static_cast<std::size_t>(config.dimension), base),
                                      config.mesh_jitter, config.seed);
  std::size_t cells = base;
  for (std::size_t n : config.mesh_levels) {
    while (cells < n) {
      mesh = refine(*mesh).mesh;
      cells *= 2;
    }
    out.push_back(mesh);
  }
  return out;
}

void validate_config(const StudyConfig& config) {
  if (config.dimension != 2 && config.dimension != 3) throw ConfigError("dimension must be 2 or 3");
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), config.preset) == names.end()) {
    throw ConfigError(fmt::format("unknown preset '{}'", config.preset));
  }
  if (!(config.horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  for (std::size_t n : config.mesh_levels)
    if (n < 1) throw ConfigError("mesh levels must be >= 1 cell per axis");
  if (!(config.mesh_jitter >= 0.0 && config.mesh_jitter < 1.0)) throw ConfigError("mesh_jitter must lie in [0, 1)");
  if (config.mesh_jitter > 0.0) {
    for (std::size_t i = 0; i < config.mesh_levels.size(); ++i) {
      std::size_t n = config.mesh_levels.front();
      while (n < config.mesh_levels[i]) n *= 2;
      if (n != config.mesh_levels[i] || (i > 0 && config.mesh_levels[i] <= config.mesh_levels[i - 1])) {
        throw ConfigError("with mesh_jitter, levels must be increasing power-of-two multiples of the first");
      }
    }
  }
  for (std::size_t n : config.time_steps)
    if (n < 1) throw ConfigError("time steps must be >= 1");

  const bool monte_carlo = config.study == StudyKind::temporal || config.study == StudyKind::coupled ||
                           config.study == StudyKind::hoelder;
  if (monte_carlo && config.paths < 2) {
    throw ConfigError(fmt::format("{} needs at least 2 paths for a confidence interval, got {}",
                                  to_string(config.study), config.paths));
  }

  auto need_levels = [&](std::size_t minimum, const char* what) {
    if (config.mesh_levels.size() < minimum) {
      throw ConfigError(fmt::format("{} needs at least {} mesh level(s)", what, minimum));
    }
  };
  auto check_divisors = [&](std::size_t reference) {
    for (std::size_t n : config.time_steps) {
      if (reference % n != 0) {
        throw ConfigError(fmt::format("time steps {} do not divide the reference {} ({} is not a divisor)",
                                      fmt::join(config.time_steps, ","), reference, n));
      }
    }
  };

  switch (config.study) {
    case StudyKind::spatial:
      need_levels(2, "spatial study");
      if (config.preset != "heat") throw ConfigError("the spatial study needs the deterministic 'heat' preset");
      if (!(config.time_step_factor > 0.0)) throw ConfigError("time_step_factor must be positive");
      break;
    case StudyKind::temporal:
      need_levels(1, "temporal study");
      if (config.time_steps.size() < 2) throw ConfigError("temporal study needs at least two step counts");
      if (config.reference_steps == 0) throw ConfigError("temporal study needs reference_steps");
      check_divisors(config.reference_steps);
      break;
    case StudyKind::coupled:
      need_levels(2, "coupled study");
      if (config.time_steps.size() != config.mesh_levels.size()) {
        throw ConfigError("coupled study needs one step count per mesh level");
      }
      if (config.closed_form_reference) {
        if (config.preset != "heat") throw ConfigError("closed-form reference requires the 'heat' preset");
        break;
      }
      if (config.reference_steps == 0 || config.reference_cells == 0) {
        throw ConfigError("coupled study needs reference_steps and reference_cells");
      }
      check_divisors(config.reference_steps);
      for (std::size_t n : config.mesh_levels) {
        if (config.reference_cells % n != 0) {
          throw ConfigError(fmt::format("mesh level {} is not nested in the reference mesh {}", n,
                                        config.reference_cells));
        }
      }
      break;
    case StudyKind::hoelder:
      need_levels(1, "hoelder study");
      if (config.time_steps.size() != 1) throw ConfigError("hoelder study takes exactly one step count");
      if (config.max_separation < 2 || config.max_separation >= config.time_steps[0]) {
        throw ConfigError("max_separation must lie in [2, steps)");
      }
      break;
    case StudyKind::projections:
      need_levels(3, "projection study");
      break;
    case StudyKind::properties:
    case StudyKind::mesh_info:
      need_levels(1, to_string(config.study).c_str());
      break;
  }
}

double RateReport::ordinate_of(const RateRow& row) const {
  return fit_root ? std::sqrt(row.err_mean_sq) : row.err_mean_sq;
}

std::vector<double> RateReport::slopes_so_far() const {
  std::vector<double> out;
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : rows) {
    pairs.emplace_back(abscissa_of(row), ordinate_of(row));
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (pairs.size() >= 2) {
      try {
        slope = fit_rate(pairs).slope;
      } catch (const DomainError&) {
      }
    }
    out.push_back(slope);
  }
  return out;
}

void RateReport::refit() {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : rows) pairs.emplace_back(abscissa_of(row), ordinate_of(row));
  fit = fit_rate(pairs);
  inconclusive = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (std::abs(a.err_mean_sq - b.err_mean_sq) < a.ci + b.ci) inconclusive = true;
  }
}

double closed_form_heat_reference(const Point& x, double t, int dimension) {
  const double rate = static_cast<double>(dimension) * std::numbers::pi * std::numbers::pi;
  return std::exp(-rate * t) * cosine_product(x, dimension);
}

void for_each_path(std::size_t paths, unsigned workers, const std::function<void(std::size_t, unsigned)>& task) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(paths, 1))));
  if (workers == 1) {
    for (std::size_t p = 0; p < paths; ++p) task(p, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        const std::size_t p = next.fetch_add(1);
        if (p >= paths) return;
        try {
          task(p, w);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(paths);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> coupled_error_profile(const Trajectory& coarse, const Trajectory& fine,
                                          const std::vector<std::size_t>& parent, Interpolant interpolant) {
  const std::size_t nc = coarse.grid.steps;
  const std::size_t nf = fine.grid.steps;
  if (nf % nc != 0) throw CouplingError("fine step count is not a multiple of the coarse one");
  const std::size_t ratio = nf / nc;
  const auto& fine_mesh = *fine.states.front().mesh();
  if (parent.size() != fine_mesh.cell_count()) throw std::invalid_argument("parent map does not match the fine mesh");

  std::vector<double> profile(nc + 1);
  for (std::size_t k = 0; k <= nc; ++k) {
    const std::size_t ci = interpolant == Interpolant::right ? std::min(k + 1, nc) : k;
    const std::size_t fi = interpolant == Interpolant::right ? std::min(k * ratio + 1, nf) : k * ratio;
    const CellField& uc = coarse.states[ci];
    const CellField& uf = fine.states[fi];
    double sum = 0.0;
    for (std::size_t f = 0; f < parent.size(); ++f) {
      const double d = uc[parent[f]] - uf[f];
      sum += fine_mesh.cells()[f].measure * d * d;
    }
    profile[k] = sum;
  }
  return profile;
}

std::vector<std::pair<std::string, std::string>> provenance(const StudyConfig& config) {
  return {
      {"study", to_string(config.study)},
      {"preset", config.preset},
      {"seed", std::to_string(config.seed)},
      {"paths", std::to_string(config.paths)},
      {"horizon", fmt::format("{}", config.horizon)},
      {"noise_amplitude", fmt::format("{}", config.noise_amplitude)},
      {"reaction_rate", fmt::format("{}", config.reaction_rate)},
      {"newton_tolerance", fmt::format("{}", config.stepper.newton_tolerance)},
      {"max_newton_iterations", std::to_string(config.stepper.max_newton_iterations)},
      {"quadrature_points_per_axis", std::to_string(kQuadraturePoints)},
      {"interpolant", config.interpolant == Interpolant::right ? "right" : "left"},
      {"commit", build_commit()},
  };
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

MeshPtr level_mesh(const StudyConfig& config, std::size_t cells) { return unit_mesh(config.dimension, cells); }

/// Mesh, grid and edge velocities of one refinement level, shared read-only
/// between workers.
struct Level {
  MeshPtr mesh;
  TimeGrid grid;
  std::shared_ptr<const VelocitySchedule> schedule;
};

Level make_level(const ProblemSpec& problem, MeshPtr mesh, TimeGrid grid) {
  auto schedule = std::make_shared<const VelocitySchedule>(problem, mesh, grid);
  return {std::move(mesh), grid, std::move(schedule)};
}

/// Lazily built per-worker steppers, one per level.
class StepperPool {
 public:
  StepperPool(const ProblemSpec& problem, const std::vector<Level>& levels, const StepperParams& params,
              unsigned workers)
      : problem_(problem), levels_(levels), params_(params), slots_(workers) {
    for (auto& s : slots_) s.resize(levels.size());
  }

  Stepper& get(unsigned worker, std::size_t level) {
    auto& slot = slots_[worker][level];
    if (!slot) slot.emplace(problem_, levels_[level].mesh, params_);
    return *slot;
  }

 private:
  const ProblemSpec& problem_;
  const std::vector<Level>& levels_;
  StepperParams params_;
  std::vector<std::vector<std::optional<Stepper>>> slots_;
};

Trajectory run_level(const ProblemSpec& problem, const Level& level, const NoisePath& path, Stepper& stepper) {
  return run_path(problem, level.mesh, level.grid, path, *level.schedule, stepper);
}

RateRow summarize(std::size_t level, double h, double tau, const std::vector<double>& samples) {
  RateRow row{level, h, tau, samples.size(), 0.0, 0.0};
  if (samples.size() >= 2) {
    const MeanCi s = mc_mean_ci(samples);
    row.err_mean_sq = s.mean;
    row.ci = s.half_width;
  } else if (!samples.empty()) {
    row.err_mean_sq = samples.front();
  }
  return row;
}

}  // namespace

RateReport run_spatial_rate_study(const StudyConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  const ProblemSpec problem = problem_for(config);
  RateReport report;
  report.study = "spatial";
  report.preset = config.preset;
  report.quantity = "||u(T) - u_h^N||_2^2 against the closed-form heat solution";
  report.abscissa = RateReport::Abscissa::h;

  for (std::size_t i = 0; i < config.mesh_levels.size(); ++i) {
    const std::size_t n = config.mesh_levels[i];
    const MeshPtr mesh = level_mesh(config, n);
    const double width = 1.0 / static_cast<double>(n);
    const auto steps = static_cast<std::size_t>(std::ceil(config.horizon / (config.time_step_factor * width * width)));
    const TimeGrid grid{steps, config.horizon};
    const NoisePath path = sample_path(config.seed, 0, steps, config.horizon);
    const Trajectory traj = run_path(problem, mesh, grid, path, config.stepper);
    const double err = l2_distance(
        [&](const Point& x) { return closed_form_heat_reference(x, config.horizon, config.dimension); },
        traj.states.back());
    report.rows.push_back({i, mesh->size_h(), grid.step(), 1, err * err, 0.0});
    report.metadata.emplace_back(fmt::format("reg_level_{}", i), fmt::format("{:.17g}", mesh->regularity()));
  }
  report.refit();
  for (auto& kv : provenance(config)) report.metadata.push_back(kv);
  report.wall_seconds = seconds_since(start);
  return report;
}

RateReport run_temporal_rate_study(const StudyConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  const ProblemSpec problem = problem_for(config);
  const MeshPtr mesh = level_mesh(config, config.mesh_levels.front());

  std::vector<Level> levels;
  levels.push_back(make_level(problem, mesh, {config.reference_steps, config.horizon}));
  for (std::size_t n : config.time_steps) levels.push_back(make_level(problem, mesh, {n, config.horizon}));
  StepperPool pool(problem, levels, config.stepper, config.workers);

  const std::size_t m = config.paths;
  std::vector<std::vector<double>> samples(config.time_steps.size(), std::vector<double>(m));
  for_each_path(m, config.workers, [&](std::size_t p, unsigned w) {
    const NoisePath path = sample_path(config.seed, p, config.reference_steps, config.horizon);
    const Trajectory ref = run_level(problem, levels[0], path, pool.get(w, 0));
    for (std::size_t i = 0; i < config.time_steps.size(); ++i) {
      const Trajectory traj = run_level(problem, levels[i + 1], path, pool.get(w, i + 1));
      const CellField diff = traj.states.back() - ref.states.back();
      const double e = discrete_l2_norm(diff);
      samples[i][p] = e * e;
    }
  });

  RateReport report;
  report.study = "temporal";
  report.preset = config.preset;
  report.quantity = "E ||u_h^N(T) - u_ref(T)||_2^2, same mesh, coupled noise";
  report.abscissa = RateReport::Abscissa::tau;
  for (std::size_t i = 0; i < config.time_steps.size(); ++i) {
    report.rows.push_back(summarize(i, mesh->size_h(), levels[i + 1].grid.step(), samples[i]));
  }
  report.refit();
  report.metadata = provenance(config);
  report.metadata.emplace_back("mesh_regularity", fmt::format("{:.17g}", mesh->regularity()));
  report.metadata.emplace_back("reference_steps", std::to_string(config.reference_steps));
  report.wall_seconds = seconds_since(start);
  return report;
}

RateReport run_coupled_rate_study(const StudyConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  const ProblemSpec problem = problem_for(config);
  const std::size_t nlev = config.mesh_levels.size();

  std::vector<Level> levels;
  for (std::size_t i = 0; i < nlev; ++i) {
    levels.push_back(make_level(problem, level_mesh(config, config.mesh_levels[i]),
                                {config.time_steps[i], config.horizon}));
  }

  RateReport report;
  report.study = "coupled";
  report.preset = config.preset;
  report.abscissa = RateReport::Abscissa::h;
  const std::size_t m = config.paths;
  // profiles[level][path][node]
  std::vector<std::vector<std::vector<double>>> profiles(nlev, std::vector<std::vector<double>>(m));

  if (config.closed_form_reference) {
    report.quantity = "sup_k ||u(t_k) - u_h(t_k)||_2^2 against the closed-form heat solution";
    StepperPool pool(problem, levels, config.stepper, 1);
    for (std::size_t i = 0; i < nlev; ++i) {
      const NoisePath path = sample_path(config.seed, 0, levels[i].grid.steps, config.horizon);
      const Trajectory traj = run_level(problem, levels[i], path, pool.get(0, i));
      const std::size_t n = traj.grid.steps;
      std::vector<double> profile(n + 1);
      for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t idx = config.interpolant == Interpolant::right ? std::min(k + 1, n) : k;
        const double t = traj.grid.node(k);
        const double e = l2_distance(
            [&](const Point& x) { return closed_form_heat_reference(x, t, config.dimension); }, traj.states[idx]);
        profile[k] = e * e;
      }
      for (std::size_t p = 0; p < m; ++p) profiles[i][p] = profile;
    }
  } else {
    report.quantity = "sup_k E ||u_ref(t_k) - u_h(t_k)||_2^2 on the reference mesh, coupled noise";
    levels.push_back(make_level(problem, level_mesh(config, config.reference_cells),
                                {config.reference_steps, config.horizon}));
    std::vector<std::vector<std::size_t>> parents;
    for (std::size_t i = 0; i < nlev; ++i) parents.push_back(nesting_map(*levels[i].mesh, *levels.back().mesh));
    StepperPool pool(problem, levels, config.stepper, config.workers);
    for_each_path(m, config.workers, [&](std::size_t p, unsigned w) {
      const NoisePath path = sample_path(config.seed, p, config.reference_steps, config.horizon);
      const Trajectory ref = run_level(problem, levels.back(), path, pool.get(w, nlev));
      for (std::size_t i = 0; i < nlev; ++i) {
        const Trajectory traj = run_level(problem, levels[i], path, pool.get(w, i));
        profiles[i][p] = coupled_error_profile(traj, ref, parents[i], config.interpolant);
      }
    });
  }

  for (std::size_t i = 0; i < nlev; ++i) {
    const std::size_t nodes = levels[i].grid.steps + 1;
    RateRow best;
    bool first = true;
    for (std::size_t k = 0; k < nodes; ++k) {
      std::vector<double> samples(m);
      for (std::size_t p = 0; p < m; ++p) samples[p] = profiles[i][p][k];
      const RateRow row = summarize(i, levels[i].mesh->size_h(), levels[i].grid.step(), samples);
      if (first || row.err_mean_sq > best.err_mean_sq) {
        best = row;
        first = false;
      }
    }
    report.rows.push_back(best);
    report.metadata.emplace_back(fmt::format("reg_level_{}", i), fmt::format("{:.17g}", levels[i].mesh->regularity()));
  }
  report.refit();
  for (auto& kv : provenance(config)) report.metadata.push_back(kv);
  if (!config.closed_form_reference) {
    report.metadata.emplace_back("reference_cells", std::to_string(config.reference_cells));
    report.metadata.emplace_back("reference_steps", std::to_string(config.reference_steps));
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

HoelderDiagnostic run_hoelder_diagnostic(const StudyConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  const ProblemSpec problem = problem_for(config);
  const MeshPtr mesh = level_mesh(config, config.mesh_levels.front());
  const std::size_t steps = config.time_steps.front();
  std::vector<Level> levels{make_level(problem, mesh, {steps, config.horizon})};
  StepperPool pool(problem, levels, config.stepper, config.workers);

  std::vector<std::size_t> separations;
  for (std::size_t k = 1; k <= config.max_separation; k *= 2) separations.push_back(k);
  // Base times shared by every separation.
  const std::size_t bases = steps - separations.back() + 1;

  const std::size_t m = config.paths;
  std::vector<std::vector<double>> value(separations.size(), std::vector<double>(m));
  std::vector<std::vector<double>> gradient(separations.size(), std::vector<double>(m));
  for_each_path(m, config.workers, [&](std::size_t p, unsigned w) {
    const NoisePath path = sample_path(config.seed, p, steps, config.horizon);
    const Trajectory traj = run_level(problem, levels[0], path, pool.get(w, 0));
    for (std::size_t i = 0; i < separations.size(); ++i) {
      double v = 0.0;
      double g = 0.0;
      for (std::size_t s = 0; s < bases; ++s) {
        const CellField d = traj.states[s + separations[i]] - traj.states[s];
        const double l2 = discrete_l2_norm(d);
        const double h1 = discrete_h1_seminorm(d);
        v += l2 * l2;
        g += h1 * h1;
      }
      value[i][p] = v / static_cast<double>(bases);
      gradient[i][p] = g / static_cast<double>(bases);
    }
  });

  HoelderDiagnostic out;
  auto build = [&](RateReport& r, const std::vector<std::vector<double>>& samples, const char* quantity) {
    r.study = "hoelder";
    r.preset = config.preset;
    r.quantity = quantity;
    r.abscissa = RateReport::Abscissa::tau;
    r.fit_root = false;
    const double tau = levels[0].grid.step();
    for (std::size_t i = 0; i < separations.size(); ++i) {
      r.rows.push_back(summarize(i, mesh->size_h(), tau * static_cast<double>(separations[i]), samples[i]));
    }
    r.refit();
    r.metadata = provenance(config);
    r.metadata.emplace_back("steps", std::to_string(steps));
    r.wall_seconds = seconds_since(start);
  };
  build(out.value, value, "E ||u_h(t) - u_h(s)||_2^2 averaged over base times s");
  build(out.gradient, gradient, "E |u_h(t) - u_h(s)|_{1,h}^2 averaged over base times s");
  return out;
}

bool PropertyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

const PropertyCheck* PropertyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace sfv
