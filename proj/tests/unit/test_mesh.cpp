#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sfv/mesh.hpp"

using namespace sfv;

namespace {

constexpr double pi = std::numbers::pi;

double total_measure(const AdmissibleMesh& mesh) {
  double sum = 0.0;
  for (const auto& c : mesh.cells()) sum += c.measure;
  return sum;
}

}  // namespace

TEST(Mesh, UnitSquareCounts) {
  const auto mesh = unit_mesh(2, 2);
  EXPECT_EQ(mesh->cell_count(), 4u);
  EXPECT_EQ(mesh->interior_edges().size(), 4u);
  EXPECT_EQ(mesh->boundary_edges().size(), 8u);
  EXPECT_EQ(mesh->vertices().size(), 9u);
  for (const auto& c : mesh->cells()) EXPECT_DOUBLE_EQ(c.measure, 0.25);
  for (const auto& e : mesh->interior_edges()) {
    EXPECT_DOUBLE_EQ(e.measure, 0.5);
    EXPECT_DOUBLE_EQ(e.distance, 0.5);
    EXPECT_DOUBLE_EQ(e.transmissibility(), 1.0);
  }
  EXPECT_DOUBLE_EQ(mesh->size_h(), std::sqrt(2.0) / 2.0);
}

TEST(Mesh, CellsAreXFastest) {
  const auto mesh = unit_mesh(2, 2);
  EXPECT_DOUBLE_EQ(mesh->cells()[1].center[0], 0.75);
  EXPECT_DOUBLE_EQ(mesh->cells()[1].center[1], 0.25);
  EXPECT_DOUBLE_EQ(mesh->cells()[2].center[0], 0.25);
  EXPECT_DOUBLE_EQ(mesh->cells()[2].center[1], 0.75);
}

TEST(Mesh, Cube) {
  const auto mesh = unit_mesh(3, 3);
  EXPECT_EQ(mesh->cell_count(), 27u);
  EXPECT_EQ(mesh->interior_edges().size(), 3u * 2u * 9u);
  EXPECT_EQ(mesh->boundary_edges().size(), 6u * 9u);
  EXPECT_NEAR(total_measure(*mesh), 1.0, 1e-14);
}

TEST(Mesh, RegularityTwoByTwoIsVertexIncidence) {
  // diam / d(x_K, sigma) = (sqrt(2)/2) / (1/4) = 2 sqrt(2) < 4 edges at the center vertex.
  EXPECT_DOUBLE_EQ(unit_mesh(2, 2)->regularity(), 4.0);
}

TEST(Mesh, RegularitySingleCellCountsBoundaryEdges) {
  EXPECT_NEAR(unit_mesh(2, 1)->regularity(), 2.0 * std::sqrt(2.0), 1e-14);
}

TEST(Mesh, RegularityCubeCountsFaces) {
  EXPECT_DOUBLE_EQ(unit_mesh(3, 2)->regularity(), 12.0);
}

TEST(Mesh, RegularityBoundedUnderRefinement) {
  auto mesh = jittered_tensor_mesh(Box::unit(2), {4, 4}, 0.4, 3);
  const double r0 = mesh->regularity();
  for (int l = 0; l < 3; ++l) mesh = refine(*mesh).mesh;
  EXPECT_LE(mesh->regularity(), r0 * (1.0 + 1e-12));
}

TEST(Mesh, BuilderRejectsBadInput) {
  EXPECT_THROW(build_tensor_mesh(Box::unit(2), {0, 2}), GeometryError);
  EXPECT_THROW(build_tensor_mesh(Box::unit(2), {2, 2}, {{0.5, 0.4}, {0.5, 0.5}}), GeometryError);
  EXPECT_THROW(build_tensor_mesh(Box::unit(2), {2, 2}, {{0.5, 0.5}}), GeometryError);
  EXPECT_THROW(build_tensor_mesh(Box::unit(2), {2, 2}, {{1.5, -0.5}, {0.5, 0.5}}), GeometryError);
  EXPECT_THROW(build_tensor_mesh(Box::unit(2), {2}), GeometryError);
}

TEST(Mesh, NonUniformSpacing) {
  const auto mesh = build_tensor_mesh(Box::unit(2), {2, 1}, {{0.25, 0.75}, {1.0}});
  ASSERT_EQ(mesh->interior_edges().size(), 1u);
  EXPECT_DOUBLE_EQ(mesh->interior_edges()[0].distance, 0.5);
  EXPECT_DOUBLE_EQ(mesh->cells()[0].measure, 0.25);
  EXPECT_TRUE(validate_admissibility(*mesh).ok());
}

TEST(Mesh, ValidationAcceptsBuiltMeshes) {
  EXPECT_TRUE(validate_admissibility(*unit_mesh(2, 5)).ok());
  EXPECT_TRUE(validate_admissibility(*unit_mesh(3, 3)).ok());
  EXPECT_TRUE(validate_admissibility(*jittered_tensor_mesh(Box::unit(2), {6, 3}, 0.5, 11)).ok());
}

TEST(Mesh, ValidationFlagsBrokenDistance) {
  const auto good = unit_mesh(2, 2);
  auto interior = good->interior_edges();
  interior[0].distance *= 1.5;
  const AdmissibleMesh bad(good->domain(), good->cells(), interior, good->boundary_edges(), good->vertices());
  const auto report = validate_admissibility(bad);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.has(Violation::Kind::distance_mismatch));
}

TEST(Mesh, ValidationFlagsTiltedNormal) {
  const auto good = unit_mesh(2, 2);
  auto interior = good->interior_edges();
  interior[0].normal = {std::sqrt(0.5), std::sqrt(0.5), 0.0};
  const AdmissibleMesh bad(good->domain(), good->cells(), interior, good->boundary_edges(), good->vertices());
  EXPECT_TRUE(validate_admissibility(bad).has(Violation::Kind::orthogonality));
}

TEST(Mesh, ValidationFlagsMissingCell) {
  const auto good = unit_mesh(2, 2);
  auto cells = good->cells();
  cells[3].measure = 0.0;
  const AdmissibleMesh bad(good->domain(), cells, good->interior_edges(), good->boundary_edges(), good->vertices());
  EXPECT_TRUE(validate_admissibility(bad).has(Violation::Kind::nonpositive_measure));
}

TEST(Mesh, GaussRulesIntegratePolynomials) {
  for (int p = 1; p <= 5; ++p) {
    const auto rule = gauss_rule(p);
    for (int k = 0; k < 2 * p; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], k);
      EXPECT_NEAR(sum, 1.0 / (k + 1), 1e-14) << "points " << p << " degree " << k;
    }
  }
  EXPECT_THROW(gauss_rule(6), std::invalid_argument);
}

TEST(Mesh, CellAverageMatchesAntiderivative) {
  const auto mesh = unit_mesh(2, 16);
  const CellField avg = cell_average([](const Point& x) { return std::cos(pi * x[0]); }, mesh);
  for (std::size_t k = 0; k < mesh->cell_count(); ++k) {
    const auto& c = mesh->cells()[k];
    const double exact = (std::sin(pi * c.upper[0]) - std::sin(pi * c.lower[0])) / (pi * (c.upper[0] - c.lower[0]));
    EXPECT_NEAR(avg[k], exact, 1e-10);
  }
}

TEST(Mesh, CellAverageOfConstant) {
  const CellField avg = cell_average([](const Point&) { return 2.5; }, unit_mesh(3, 2));
  for (double v : avg.values()) EXPECT_DOUBLE_EQ(v, 2.5);
}

TEST(Mesh, RefineAndNesting) {
  const auto coarse = unit_mesh(2, 4);
  const auto fine = refine(*coarse);
  EXPECT_EQ(fine.mesh->cell_count(), 64u);
  const auto parent = nesting_map(*coarse, *fine.mesh);
  EXPECT_EQ(parent, fine.parent);
  for (std::size_t k = 0; k < parent.size(); ++k) {
    const auto& c = coarse->cells()[parent[k]];
    const auto& x = fine.mesh->cells()[k].center;
    EXPECT_GT(x[0], c.lower[0]);
    EXPECT_LT(x[0], c.upper[0]);
    EXPECT_GT(x[1], c.lower[1]);
    EXPECT_LT(x[1], c.upper[1]);
  }
  EXPECT_THROW(nesting_map(*unit_mesh(2, 3), *unit_mesh(2, 4)), GeometryError);
}

TEST(Mesh, InjectionIsExact) {
  const auto coarse = unit_mesh(2, 3);
  const auto fine = refine(*coarse);
  CellField c(coarse);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = 0.1 * static_cast<double>(k * k);
  const CellField f = inject(c, fine.mesh, fine.parent);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(f[k], c[fine.parent[k]]);
}

TEST(Mesh, Locate) {
  const auto mesh = unit_mesh(2, 4);
  EXPECT_EQ(mesh->locate({0.1, 0.1, 0.0}), 0u);
  EXPECT_EQ(mesh->locate({0.9, 0.1, 0.0}), 3u);
  EXPECT_EQ(mesh->locate({0.1, 0.9, 0.0}), 12u);
  EXPECT_THROW(mesh->locate({1.5, 0.5, 0.0}), GeometryError);
}

TEST(Mesh, JitterIsDeterministicAndBounded) {
  const auto a = jittered_tensor_mesh(Box::unit(2), {8, 8}, 0.3, 5);
  const auto b = jittered_tensor_mesh(Box::unit(2), {8, 8}, 0.3, 5);
  for (std::size_t k = 0; k < a->cell_count(); ++k) EXPECT_EQ(a->cells()[k].measure, b->cells()[k].measure);
  EXPECT_NEAR(total_measure(*a), 1.0, 1e-14);
  EXPECT_THROW(jittered_tensor_mesh(Box::unit(2), {8, 8}, 1.0, 5), GeometryError);
}
