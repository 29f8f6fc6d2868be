#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sfv/mesh.hpp"
#include "sfv/projections.hpp"
#include "sfv/scheme.hpp"
#include "sfv/study.hpp"

namespace sfv {

/// level,h,tau,n_paths,err_mean_sq,ci,slope_so_far with 17 significant digits.
std::string rate_csv(const RateReport& report);
nlohmann::ordered_json rate_json(const RateReport& report);

/// Log-log plot of the ordinate against the abscissa with a reference
/// triangle of the fitted slope. No external renderer.
std::string rate_svg(const RateReport& report);

nlohmann::ordered_json property_json(const PropertyReport& report);
nlohmann::ordered_json projection_json(const ProjectionReport& report);
std::string projection_csv(const ProjectionReport& report);

nlohmann::ordered_json mesh_to_json(const AdmissibleMesh& mesh);

/// cell,x,y,z,value
std::string field_csv(const CellField& field);

/// step,t,l2_norm,h1_seminorm,mass,newton_iterations,residual
std::string trajectory_csv(const Trajectory& trajectory);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& contents);

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> config;
  std::string version;
  std::string commit;
  std::string started;   // ISO 8601, UTC
  std::string finished;  // ISO 8601, UTC
  std::vector<std::string> outputs;
  int exit_status = 0;
  std::string message;

  nlohmann::ordered_json to_json() const;
};

std::string utc_timestamp();

/// Program version string.
std::string tool_version();

}  // namespace sfv
