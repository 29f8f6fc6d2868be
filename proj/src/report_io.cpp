#include "sfv/report_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace sfv {

namespace {

std::string g17(double v) { return fmt::format("{:.17g}", v); }

nlohmann::ordered_json fit_json(const RateFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual}};
}

}  // namespace

std::string tool_version() { return "0.1.0"; }

std::string rate_csv(const RateReport& report) {
  std::string out = "level,h,tau,n_paths,err_mean_sq,ci,slope_so_far\n";
  const auto slopes = report.slopes_so_far();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const RateRow& r = report.rows[i];
    out += fmt::format("{},{},{},{},{},{},{}\n", r.level, g17(r.h), g17(r.tau), r.paths, g17(r.err_mean_sq), g17(r.ci),
                       std::isnan(slopes[i]) ? std::string() : g17(slopes[i]));
  }
  return out;
}

nlohmann::ordered_json rate_json(const RateReport& report) {
  nlohmann::ordered_json j;
  j["study"] = report.study;
  j["preset"] = report.preset;
  j["quantity"] = report.quantity;
  j["abscissa"] = report.abscissa == RateReport::Abscissa::h ? "h" : "tau";
  j["ordinate"] = report.fit_root ? "sqrt(err_mean_sq)" : "err_mean_sq";
  j["fit"] = fit_json(report.fit);
  j["inconclusive"] = report.inconclusive;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"level", r.level}, {"h", r.h}, {"tau", r.tau}, {"n_paths", r.paths},
                    {"err_mean_sq", r.err_mean_sq}, {"ci", r.ci}});
  }
  j["rows"] = rows;
  auto meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  j["metadata"] = meta;
  j["wall_seconds"] = report.wall_seconds;
  return j;
}

std::string rate_svg(const RateReport& report) {
  constexpr double width = 480.0;
  constexpr double height = 360.0;
  constexpr double margin = 56.0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : report.rows) {
    const double x = report.abscissa_of(r);
    const double y = report.ordinate_of(r);
    if (x > 0.0 && y > 0.0) pts.emplace_back(std::log10(x), std::log10(y));
  }
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  const std::string xlabel = report.abscissa == RateReport::Abscissa::h ? "h" : "tau";
  const std::string ylabel = report.fit_root ? "sqrt(err_mean_sq)" : "err_mean_sq";
  svg += fmt::format("<text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{} "
                     "study, slope {:.3f}</text>\n",
                     width / 2, report.study, report.fit.slope);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">log10 "
                     "{}</text>\n",
                     width / 2, height - 12, xlabel);
  svg += fmt::format("<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
                     "transform=\"rotate(-90 14 {})\">log10 {}</text>\n",
                     height / 2, height / 2, ylabel);
  svg += fmt::format("<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{2}\" fill=\"none\" stroke=\"black\"/>\n", margin,
                     width - 2 * margin, height - 2 * margin);
  if (pts.empty()) return svg + "</svg>\n";

  auto [xmin_it, xmax_it] = std::minmax_element(pts.begin(), pts.end());
  double xmin = xmin_it->first;
  double xmax = xmax_it->first;
  double ymin = pts.front().second;
  double ymax = ymin;
  for (const auto& p : pts) {
    ymin = std::min(ymin, p.second);
    ymax = std::max(ymax, p.second);
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad_x = 0.05 * (xmax - xmin);
  const double pad_y = 0.05 * (ymax - ymin);
  xmin -= pad_x;
  xmax += pad_x;
  ymin -= pad_y;
  ymax += pad_y;
  auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto sy = [&](double y) { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); };

  for (double v : {xmin, xmax}) {
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
                       "text-anchor=\"middle\">{:.2f}</text>\n",
                       sx(v), height - margin + 14, v);
  }
  for (double v : {ymin, ymax}) {
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
                       "text-anchor=\"end\">{:.2f}</text>\n",
                       margin - 4, sy(v) + 3, v);
  }

  std::string line;
  for (const auto& p : pts) line += fmt::format("{:.2f},{:.2f} ", sx(p.first), sy(p.second));
  svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n", line);
  for (const auto& p : pts) {
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#1f77b4\"/>\n", sx(p.first), sy(p.second));
  }
  // Fitted line; the fit uses natural logarithms.
  const double x0 = xmin_it->first;
  const double x1 = xmax_it->first;
  const double c = report.fit.intercept / std::log(10.0);
  svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#d62728\" "
                     "stroke-dasharray=\"4 3\"/>\n",
                     sx(x0), sy(c + report.fit.slope * x0), sx(x1), sy(c + report.fit.slope * x1));
  return svg + "</svg>\n";
}

nlohmann::ordered_json property_json(const PropertyReport& report) {
  nlohmann::ordered_json j;
  j["all_passed"] = report.all_passed();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold},
                      {"detail", c.detail}});
  }
  j["checks"] = checks;
  return j;
}

nlohmann::ordered_json projection_json(const ProjectionReport& report) {
  nlohmann::ordered_json j;
  j["function"] = report.function;
  j["elliptic_fit"] = fit_json(report.elliptic_fit);
  j["centered_fit"] = fit_json(report.centered_fit);
  j["seminorm_fit"] = fit_json(report.seminorm_fit);
  j["all_decreasing"] = report.all_decreasing;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"h", r.h}, {"elliptic_error", r.elliptic_error}, {"centered_error", r.centered_error},
                    {"seminorm_gap", r.seminorm_gap}, {"balance_residual", r.balance_residual},
                    {"mass_defect", r.mass_defect}});
  }
  j["rows"] = rows;
  return j;
}

std::string projection_csv(const ProjectionReport& report) {
  std::string out = "h,elliptic_error,centered_error,seminorm_gap,balance_residual,mass_defect\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{}\n", g17(r.h), g17(r.elliptic_error), g17(r.centered_error),
                       g17(r.seminorm_gap), g17(r.balance_residual), g17(r.mass_defect));
  }
  return out;
}

nlohmann::ordered_json mesh_to_json(const AdmissibleMesh& mesh) {
  nlohmann::ordered_json j;
  j["dimension"] = mesh.dimension();
  j["cells"] = mesh.cell_count();
  j["interior_edges"] = mesh.interior_edges().size();
  j["boundary_edges"] = mesh.boundary_edges().size();
  j["vertices"] = mesh.vertices().size();
  j["size_h"] = mesh.size_h();
  j["regularity"] = mesh.regularity();
  double min_measure = 1e300;
  double total = 0.0;
  for (const auto& c : mesh.cells()) {
    min_measure = std::min(min_measure, c.measure);
    total += c.measure;
  }
  j["total_measure"] = total;
  j["min_cell_measure"] = min_measure;
  const ValidationReport v = validate_admissibility(mesh);
  j["admissible"] = v.ok();
  auto issues = nlohmann::ordered_json::array();
  for (const auto& violation : v.violations) {
    issues.push_back({{"kind", to_string(violation.kind)}, {"index", violation.index}, {"detail", violation.detail}});
  }
  j["violations"] = issues;
  return j;
}

std::string field_csv(const CellField& field) {
  std::string out = "cell,x,y,z,value\n";
  const auto& cells = field.mesh()->cells();
  for (std::size_t k = 0; k < field.size(); ++k) {
    const Point& c = cells[k].center;
    out += fmt::format("{},{},{},{},{}\n", k, g17(c[0]), g17(c[1]), g17(c[2]), g17(field[k]));
  }
  return out;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "step,t,l2_norm,h1_seminorm,mass,newton_iterations,residual\n";
  for (std::size_t n = 0; n < trajectory.states.size(); ++n) {
    const CellField& u = trajectory.states[n];
    const int iterations = n == 0 ? 0 : trajectory.newton_iterations[n - 1];
    const double residual = n == 0 ? 0.0 : trajectory.residuals[n - 1];
    out += fmt::format("{},{},{},{},{},{},{}\n", n, g17(trajectory.grid.node(n)), g17(discrete_l2_norm(u)),
                       g17(discrete_h1_seminorm(u)), g17(mass(u)), iterations, g17(residual));
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  fs::rename(tmp, target);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  auto cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  j["version"] = version;
  j["commit"] = commit;
  j["started"] = started;
  j["finished"] = finished;
  j["outputs"] = outputs;
  j["exit_status"] = exit_status;
  if (!message.empty()) j["message"] = message;
  return j;
}

}  // namespace sfv
