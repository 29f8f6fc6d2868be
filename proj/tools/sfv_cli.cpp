// Command-line driver: one subcommand per study, artifacts plus a run
// manifest in the output directory.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sfv/config.hpp"
#include "sfv/projections.hpp"
#include "sfv/report_io.hpp"
#include "sfv/study.hpp"

namespace {

enum ExitCode { kOk = 0, kInvariant = 1, kConfig = 2, kSolver = 3 };

struct Flags {
  std::string config_file;
  std::string levels;
  std::string steps;
  std::string mesh;
  std::string out;
  std::string preset;
  std::string mutation;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<unsigned> workers;
  std::optional<double> horizon;
  std::optional<double> sigma;
  std::optional<double> jitter;
  bool left = false;
  bool closed_form = false;
  bool dump_final = false;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config_file, "key=value config file");
  cmd.add_option("--seed", f.seed, "Monte Carlo seed");
  cmd.add_option("--paths", f.paths, "number of Monte Carlo paths");
  cmd.add_option("--levels", f.levels, "cells per axis per level, e.g. 8,16,32,64");
  cmd.add_option("--steps", f.steps, "time steps per level, e.g. 8,16,32");
  cmd.add_option("--mesh", f.mesh, "single uniform mesh NxM or NxMxP");
  cmd.add_option("--workers", f.workers, "worker threads (results do not depend on it)");
  cmd.add_option("--out", f.out, "output directory");
  cmd.add_option("--preset", f.preset, "problem preset");
  cmd.add_option("--horizon", f.horizon, "final time T");
  cmd.add_option("--sigma", f.sigma, "noise amplitude");
  cmd.add_option("--jitter", f.jitter, "relative width perturbation of the base mesh (projections)");
  cmd.add_option("--mutation", f.mutation, "inject a defect: flip-upwind or dibp-asymmetry");
  cmd.add_flag("--left-interpolant", f.left, "compare left instead of right interpolants");
  cmd.add_flag("--closed-form", f.closed_form, "coupled study against the closed-form heat solution");
  cmd.add_flag("--dump-final", f.dump_final, "write the final field of path 0 (temporal/hoelder)");
}

sfv::StudyConfig resolve_config(sfv::StudyKind kind, const Flags& f) {
  sfv::StudyConfig config = sfv::default_config(kind);
  if (!f.config_file.empty()) config = sfv::load_config_file(f.config_file, config);
  config = sfv::apply_env_overrides(config, sfv::process_env());
  config.study = kind;
  if (f.seed) config.seed = *f.seed;
  if (f.paths) config.paths = *f.paths;
  if (f.workers) config.workers = *f.workers;
  if (f.horizon) config.horizon = *f.horizon;
  if (f.sigma) config.noise_amplitude = *f.sigma;
  if (f.jitter) config.mesh_jitter = *f.jitter;
  if (!f.preset.empty()) config.preset = f.preset;
  if (!f.mutation.empty()) config.mutation = sfv::mutation_from_string(f.mutation);
  if (!f.levels.empty()) config.mesh_levels = sfv::parse_size_list("levels", f.levels);
  if (!f.steps.empty()) config.time_steps = sfv::parse_size_list("steps", f.steps);
  if (!f.mesh.empty()) {
    const auto [dimension, cells] = sfv::parse_mesh_spec(f.mesh);
    config.dimension = dimension;
    config.mesh_levels = {cells};
  }
  if (!f.out.empty()) config.out_dir = f.out;
  if (f.left) config.interpolant = sfv::Interpolant::left;
  if (f.closed_form) config.closed_form_reference = true;
  if (config.out_dir.empty()) config.out_dir = "sfv-out/" + sfv::to_string(kind);
  sfv::validate_config(config);
  return config;
}

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}
  void write(const std::string& name, const std::string& contents) {
    const std::string path = (std::filesystem::path(dir_) / name).string();
    sfv::write_file_atomic(path, contents);
    files_.push_back(path);
  }
  const std::vector<std::string>& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

void emit_rate(Outputs& out, const std::string& stem, const sfv::RateReport& report) {
  out.write(stem + ".csv", sfv::rate_csv(report));
  out.write(stem + ".json", sfv::rate_json(report).dump(2) + "\n");
  out.write(stem + ".svg", sfv::rate_svg(report));
  fmt::print("{}: slope {:.4f} (intercept {:.4f}, residual {:.3e}){}\n", stem, report.fit.slope,
             report.fit.intercept, report.fit.residual, report.inconclusive ? " [inconclusive: CIs overlap]" : "");
  for (const auto& r : report.rows) {
    fmt::print("  level {}  h {:.5g}  tau {:.5g}  err_mean_sq {:.6e} +- {:.2e}\n", r.level, r.h, r.tau, r.err_mean_sq,
               r.ci);
  }
}

int run(sfv::StudyKind kind, const sfv::StudyConfig& config, Outputs& out, std::string& message) {
  using sfv::StudyKind;
  switch (kind) {
    case StudyKind::properties: {
      const auto report = sfv::run_property_suite(config);
      out.write("properties.json", sfv::property_json(report).dump(2) + "\n");
      for (const auto& c : report.checks) {
        fmt::print("{:<32} {}  value {:.3e}  threshold {:.1e}{}\n", c.name, c.passed ? "PASS" : "FAIL", c.value,
                   c.threshold, c.detail.empty() ? "" : "  (" + c.detail + ")");
      }
      if (!report.all_passed()) {
        for (const auto& c : report.checks)
          if (!c.passed) message += (message.empty() ? "failed: " : ", ") + c.name;
        return kInvariant;
      }
      return kOk;
    }
    case StudyKind::spatial:
      emit_rate(out, "spatial", sfv::run_spatial_rate_study(config));
      return kOk;
    case StudyKind::temporal:
      emit_rate(out, "temporal", sfv::run_temporal_rate_study(config));
      break;
    case StudyKind::coupled:
      emit_rate(out, "coupled", sfv::run_coupled_rate_study(config));
      return kOk;
    case StudyKind::hoelder: {
      const auto d = sfv::run_hoelder_diagnostic(config);
      emit_rate(out, "hoelder_value", d.value);
      emit_rate(out, "hoelder_gradient", d.gradient);
      break;
    }
    case StudyKind::projections: {
      const auto meshes = sfv::study_meshes(config);
      const auto report = sfv::projection_error_report(sfv::cosine_function(config.dimension), meshes);
      out.write("projections.csv", sfv::projection_csv(report));
      out.write("projections.json", sfv::projection_json(report).dump(2) + "\n");
      fmt::print("elliptic slope {:.4f}, centered slope {:.4f}, seminorm gap slope {:.4f}\n", report.elliptic_fit.slope,
                 report.centered_fit.slope, report.seminorm_fit.slope);
      for (const auto& r : report.rows) {
        if (r.balance_residual > 1e-11) {
          message = fmt::format("balance residual {:.3e} at h = {:.4g}", r.balance_residual, r.h);
          return kInvariant;
        }
      }
      return kOk;
    }
    case StudyKind::mesh_info: {
      const auto mesh = sfv::unit_mesh(config.dimension, config.mesh_levels.front());
      const auto j = sfv::mesh_to_json(*mesh);
      out.write("mesh.json", j.dump(2) + "\n");
      fmt::print("{}\n", j.dump(2));
      return j["admissible"].get<bool>() ? kOk : kInvariant;
    }
  }
  return kOk;
}

void dump_final(Outputs& out, const sfv::StudyConfig& config) {
  const auto problem = sfv::problem_for(config);
  const auto mesh = sfv::unit_mesh(config.dimension, config.mesh_levels.front());
  const std::size_t steps = config.time_steps.back();
  const auto path = sfv::sample_path(config.seed, 0, steps, config.horizon);
  const auto traj = sfv::run_path(problem, mesh, {steps, config.horizon}, path, config.stepper);
  out.write("path0_final_field.csv", sfv::field_csv(traj.states.back()));
  out.write("path0_trajectory.csv", sfv::trajectory_csv(traj));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume solver and rate studies for stochastic convection-diffusion"};
  app.set_version_flag("--version", sfv::tool_version());
  app.require_subcommand(1);

  Flags flags;
  std::vector<std::pair<CLI::App*, sfv::StudyKind>> commands;
  const std::vector<std::pair<sfv::StudyKind, std::string>> kinds = {
      {sfv::StudyKind::properties, "discrete identities and invariants on randomized inputs"},
      {sfv::StudyKind::spatial, "deterministic spatial convergence against the closed form"},
      {sfv::StudyKind::temporal, "strong temporal convergence on a fixed mesh"},
      {sfv::StudyKind::coupled, "simultaneous refinement of h and tau against a fine reference"},
      {sfv::StudyKind::hoelder, "time regularity of the discrete solution"},
      {sfv::StudyKind::projections, "elliptic and centered projection errors"},
      {sfv::StudyKind::mesh_info, "mesh statistics and admissibility"},
  };
  for (const auto& [kind, help] : kinds) {
    auto* cmd = app.add_subcommand(sfv::to_string(kind), help);
    add_flags(*cmd, flags);
    commands.emplace_back(cmd, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  sfv::StudyKind kind = sfv::StudyKind::properties;
  for (const auto& [cmd, k] : commands)
    if (cmd->parsed()) kind = k;

  sfv::StudyConfig config;
  try {
    config = resolve_config(kind, flags);
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  }

  sfv::RunManifest manifest;
  manifest.config = sfv::config_echo(config);
  manifest.version = sfv::tool_version();
  manifest.commit = sfv::build_commit();
  manifest.started = sfv::utc_timestamp();

  Outputs out(config.out_dir);
  int status = kOk;
  try {
    status = run(kind, config, out, manifest.message);
    if (flags.dump_final && (kind == sfv::StudyKind::temporal || kind == sfv::StudyKind::hoelder)) dump_final(out, config);
  } catch (const sfv::StepFailure& e) {
    manifest.message = fmt::format("step failure at step {} (residual {:.3e}): {}", e.step(), e.residual(), e.what());
    status = kSolver;
  } catch (const sfv::SolverError& e) {
    manifest.message = e.what();
    status = kSolver;
  } catch (const sfv::ConvergenceError& e) {
    manifest.message = e.what();
    status = kSolver;
  } catch (const std::invalid_argument& e) {
    manifest.message = e.what();
    status = kConfig;
  } catch (const std::exception& e) {
    manifest.message = e.what();
    status = kSolver;
  }
  if (!manifest.message.empty()) fmt::print(stderr, "{}\n", manifest.message);

  manifest.finished = sfv::utc_timestamp();
  manifest.exit_status = status;
  const std::string manifest_path = (std::filesystem::path(out.dir()) / "manifest.json").string();
  manifest.outputs = out.files();
  manifest.outputs.push_back(manifest_path);
  try {
    sfv::write_file_atomic(manifest_path, manifest.to_json().dump(2) + "\n");
  } catch (const std::exception& e) {
    fmt::print(stderr, "cannot write manifest: {}\n", e.what());
    if (status == kOk) status = kSolver;
  }
  return status;
}
