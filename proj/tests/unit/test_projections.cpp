#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sfv/projections.hpp"

using namespace sfv;

namespace {

constexpr double pi = std::numbers::pi;

SmoothFunctionSpec constant_function(double c) {
  return {"constant", [c](const Point&) { return c; }, [](const Point&) { return 0.0; }, true};
}

SmoothFunctionSpec affine_function() {
  return {"affine", [](const Point& x) { return 0.3 + 2.0 * x[0] - x[1]; }, [](const Point&) { return 0.0; }, false};
}

SmoothFunctionSpec square_function() {
  return {"x1^2", [](const Point& x) { return x[0] * x[0]; }, [](const Point&) { return 2.0; }, false};
}

}  // namespace

TEST(Projections, ConstantIsReproduced) {
  const auto mesh = unit_mesh(2, 5);
  const auto p = elliptic_projection(constant_function(3.0), mesh);
  for (double v : p.field.values()) EXPECT_NEAR(v, 3.0, 1e-13);
  EXPECT_FALSE(p.compatibility_warning);
}

TEST(Projections, AffineCollapsesToMean) {
  const auto mesh = unit_mesh(2, 6);
  const auto p = elliptic_projection(affine_function(), mesh);
  // mean of 0.3 + 2 x1 - x2 over the unit square
  for (double v : p.field.values()) EXPECT_NEAR(v, 0.8, 1e-12);
  EXPECT_NEAR(p.mass_defect, 0.0, 1e-13);
}

TEST(Projections, IncompatibleDataWarns) {
  const auto p = elliptic_projection(square_function(), unit_mesh(2, 4));
  EXPECT_TRUE(p.compatibility_warning);
  EXPECT_GT(p.compatibility_defect, 0.5);
}

TEST(Projections, CosineResidualAndMass) {
  for (std::size_t n : {4, 8, 16}) {
    const auto p = elliptic_projection(cosine_function(2), unit_mesh(2, n));
    EXPECT_LE(p.balance_residual, 1e-11) << n;
    EXPECT_LE(p.mass_defect, 1e-12) << n;
    EXPECT_FALSE(p.compatibility_warning);
  }
}

TEST(Projections, CosineOnJitteredMesh) {
  const auto mesh = jittered_tensor_mesh(Box::unit(2), {9, 7}, 0.4, 8);
  const auto p = elliptic_projection(cosine_function(2), mesh);
  EXPECT_LE(p.balance_residual, 1e-11);
  EXPECT_LE(p.mass_defect, 1e-12);
}

TEST(Projections, CenteredHandExample) {
  const auto mesh = unit_mesh(2, 2);
  const CellField c = centered_projection([](const Point& x) { return x[0]; }, mesh);
  EXPECT_DOUBLE_EQ(c[0], 0.25);
  EXPECT_DOUBLE_EQ(c[1], 0.75);
  EXPECT_DOUBLE_EQ(c[2], 0.25);
  EXPECT_DOUBLE_EQ(c[3], 0.75);
}

TEST(Projections, L2DistanceOfAffine) {
  const auto mesh = unit_mesh(2, 1);
  // ||x1 - 1/2||^2 = 1/12 on the unit square
  EXPECT_NEAR(l2_distance([](const Point& x) { return x[0]; }, CellField(mesh, 0.5)), std::sqrt(1.0 / 12.0), 1e-14);
}

TEST(Projections, LaplacianSelfCheck) {
  const Box unit = Box::unit(2);
  EXPECT_LT(laplacian_self_check(cosine_function(2), unit), 1e-4);
  EXPECT_LT(laplacian_self_check(square_function(), unit), 1e-4);
  SmoothFunctionSpec wrong = cosine_function(2);
  wrong.laplacian = [](const Point& x) { return -pi * pi * std::cos(pi * x[0]) * std::cos(pi * x[1]); };
  EXPECT_GT(laplacian_self_check(wrong, unit), 0.1);
}

TEST(Projections, Linearity) {
  const auto mesh = jittered_tensor_mesh(Box::unit(2), {6, 6}, 0.3, 4);
  const auto cosine = cosine_function(2);
  SmoothFunctionSpec combo{"combo", [&](const Point& x) { return 2.0 * cosine.value(x) + 5.0; },
                           [&](const Point& x) { return 2.0 * cosine.laplacian(x); }, true};
  const auto a = elliptic_projection(cosine, mesh);
  const auto b = elliptic_projection(combo, mesh);
  for (std::size_t k = 0; k < a.field.size(); ++k) EXPECT_NEAR(b.field[k], 2.0 * a.field[k] + 5.0, 1e-11);
}

TEST(Projections, ReportOnJitteredFamily) {
  std::vector<MeshPtr> meshes{jittered_tensor_mesh(Box::unit(2), {8, 8}, 0.3, 1)};
  for (int l = 0; l < 2; ++l) meshes.push_back(refine(*meshes.back()).mesh);
  const auto report = projection_error_report(cosine_function(2), meshes);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_TRUE(report.all_decreasing);
  EXPECT_NEAR(report.elliptic_fit.slope, 1.0, 0.1);
  EXPECT_NEAR(report.centered_fit.slope, 1.0, 0.1);
  EXPECT_GT(report.seminorm_fit.slope, 0.9);
  EXPECT_THROW(projection_error_report(cosine_function(2), {meshes[0], meshes[1]}), DomainError);
}

TEST(Projections, DisconnectedMeshThrows) {
  const auto good = build_tensor_mesh(Box::unit(2), {2, 1});
  auto cells = good->cells();
  for (auto& c : cells) c.interior_edges.clear();
  const auto split = std::make_shared<const AdmissibleMesh>(good->domain(), cells, std::vector<InteriorEdge>{},
                                                            good->boundary_edges(), good->vertices());
  EXPECT_THROW(elliptic_projection(cosine_function(2), split), ConvergenceError);
}
