#include "sfv/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace sfv {

namespace {

// Uniform in [0, 1) from a 64-bit mixer; test-point placement only.
double hash_unit(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + i;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace

double laplacian_self_check(const SmoothFunctionSpec& spec, const Box& domain, int samples, std::uint64_t seed) {
  const int dim = domain.dimension;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
      const double u = 0.05 + 0.9 * hash_unit(seed, static_cast<std::uint64_t>(s * 3 + a));
      x[a] = domain.lower[a] + u * domain.side(a);
    }
    double fd = 0.0;
    const double w0 = spec.value(x);
    for (int a = 0; a < dim; ++a) {
      const double eta = 1e-4 * domain.side(a);
      Point xp = x;
      Point xm = x;
      xp[a] += eta;
      xm[a] -= eta;
      fd += (spec.value(xp) - 2.0 * w0 + spec.value(xm)) / (eta * eta);
    }
    const double exact = spec.laplacian(x);
    worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
  }
  return worst;
}

EllipticProjection elliptic_projection(const SmoothFunctionSpec& spec, const MeshPtr& mesh, double tolerance,
                                       int max_iterations) {
  if (!is_connected(*mesh)) throw ConvergenceError("elliptic projection is singular on a disconnected mesh");
  const std::size_t n = mesh->cell_count();
  const int dim = mesh->dimension();

  std::vector<double> rhs(n);
  double total = 0.0;
  double scale = 0.0;
  double integral = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Cell& c = mesh->cells()[k];
    rhs[k] = -integrate_cell(spec.laplacian, c, dim);
    integral += integrate_cell(spec.value, c, dim);
    total += rhs[k];
    scale += std::abs(rhs[k]);
  }

  EllipticProjection out;
  out.compatibility_defect = scale > 0.0 ? std::abs(total) / scale : 0.0;
  out.compatibility_warning = out.compatibility_defect > 1e-8;
  const double shift_rhs = total / static_cast<double>(n);
  for (double& b : rhs) b -= shift_rhs;

  if (n == 1) {
    out.field = CellField(mesh, integral / mesh->domain().measure());
    return out;
  }

  const Eigen::SparseMatrix<double> stiffness = assemble_tpfa_stiffness(*mesh);
  const CgResult cg = solve_zero_mean_cg(stiffness, rhs, tolerance, max_iterations);
  if (!cg.converged) {
    throw ConvergenceError(fmt::format("elliptic projection CG stalled at relative residual {:.3e} after {} iterations",
                                       cg.relative_residual, cg.iterations));
  }
  out.iterations = cg.iterations;
  out.field = CellField(mesh, cg.solution);
  const double shift = (integral - mass(out.field)) / mesh->domain().measure();
  for (std::size_t k = 0; k < n; ++k) out.field[k] += shift;
  out.mass_defect = std::abs(mass(out.field) - integral);

  double worst = 0.0;
  double rhs_max = 0.0;
  std::vector<double> balance(n, 0.0);
  for (const auto& e : mesh->interior_edges()) {
    const double flux = e.transmissibility() * (out.field[e.inner] - out.field[e.outer]);
    balance[e.inner] += flux;
    balance[e.outer] -= flux;
  }
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(balance[k] - rhs[k]));
    rhs_max = std::max(rhs_max, std::abs(rhs[k]));
  }
  out.balance_residual = rhs_max > 0.0 ? worst / rhs_max : worst;
  return out;
}

CellField centered_projection(const ScalarField& w, const MeshPtr& mesh) {
  CellField out(mesh);
  for (std::size_t k = 0; k < mesh->cell_count(); ++k) out[k] = w(mesh->cells()[k].center);
  return out;
}

double l2_distance(const ScalarField& w, const CellField& c) {
  const auto& mesh = *c.mesh();
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const double ck = c[k];
    sum += integrate_cell(
        [&](const Point& x) {
          const double d = w(x) - ck;
          return d * d;
        },
        mesh.cells()[k], mesh.dimension(), 5);
  }
  return std::sqrt(sum);
}

ProjectionReport projection_error_report(const SmoothFunctionSpec& spec, const std::vector<MeshPtr>& meshes) {
  if (meshes.size() < 3) throw DomainError("projection_error_report needs at least three mesh levels");
  ProjectionReport report;
  report.function = spec.name;
  for (const auto& mesh : meshes) {
    const EllipticProjection ep = elliptic_projection(spec, mesh);
    const CellField centered = centered_projection(spec.value, mesh);
    ProjectionRow row;
    row.h = mesh->size_h();
    row.elliptic_error = l2_distance(spec.value, ep.field);
    row.centered_error = l2_distance(spec.value, centered);
    row.seminorm_gap = discrete_h1_seminorm(centered - ep.field);
    row.balance_residual = ep.balance_residual;
    row.mass_defect = ep.mass_defect;
    report.rows.push_back(row);
  }

  auto column_fit = [&](auto member) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& row : report.rows) {
      if (row.*member > 1e-13) pairs.emplace_back(row.h, row.*member);
    }
    return pairs.size() == report.rows.size() ? fit_rate(pairs) : RateFit{};
  };
  report.elliptic_fit = column_fit(&ProjectionRow::elliptic_error);
  report.centered_fit = column_fit(&ProjectionRow::centered_error);
  report.seminorm_fit = column_fit(&ProjectionRow::seminorm_gap);

  report.all_decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    report.all_decreasing = report.all_decreasing && b.elliptic_error < a.elliptic_error &&
                            b.centered_error < a.centered_error && b.seminorm_gap < a.seminorm_gap;
  }
  return report;
}

SmoothFunctionSpec cosine_function(int dimension) {
  const double factor = -static_cast<double>(dimension) * std::numbers::pi * std::numbers::pi;
  SmoothFunctionSpec spec;
  spec.name = "cosine_product";
  spec.value = [dimension](const Point& x) {
    double u = 1.0;
    for (int a = 0; a < dimension; ++a) u *= std::cos(std::numbers::pi * x[a]);
    return u;
  };
  spec.laplacian = [dimension, factor](const Point& x) {
    double u = 1.0;
    for (int a = 0; a < dimension; ++a) u *= std::cos(std::numbers::pi * x[a]);
    return factor * u;
  };
  return spec;
}

}  // namespace sfv
