#include <cosserat_dem/mesh.hpp>
#include <cosserat_dem/mesh_io.hpp>

#include <gtest/gtest.h>

#include <sstream>

#include "support/fixtures.hpp"

using namespace cosserat_dem;

namespace {

void expect_closed_cells(const Mesh& m) {
  for (Index c = 0; c < m.num_cells(); ++c) {
    double scale = 0.0;
    for (Index f : m.cell(c).facets) scale = std::max(scale, m.facet(f).measure);
    EXPECT_LT(m.closure_defect(c).norm(), 1e-12 * scale) << "cell " << c;
  }
}

void expect_oriented(const Mesh& m) {
  for (const auto& F : m.facets()) {
    if (F.is_boundary()) {
      EXPECT_GT(F.normal.dot(F.barycenter - m.cell(F.cells[0]).barycenter), 0.0);
    } else {
      EXPECT_GT(F.normal.dot(m.cell(F.cells[1]).barycenter - m.cell(F.cells[0]).barycenter), 0.0);
      EXPECT_EQ(F.orientation(F.cells[0]), 1);
      EXPECT_EQ(F.orientation(F.cells[1]), -1);
    }
    EXPECT_NEAR(F.normal.norm(), 1.0, 1e-14);
    EXPECT_GT(F.measure, 0.0);
  }
}

const char* kTriangleMsh = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
1
1 7 "edge"
$EndPhysicalNames
$Nodes
3
1 0 0 0
2 1 0 0
3 0 1 0
$EndNodes
$Elements
4
1 1 2 7 1 1 2
2 1 2 7 1 2 3
3 1 2 7 1 3 1
4 2 2 1 1 1 2 3
$EndElements
)";

}  // namespace

TEST(Mesh, SingleTriangleFromGmsh) {
  std::istringstream in(kTriangleMsh);
  const Mesh m = read_gmsh(in);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_EQ(m.num_cells(), 1u);
  EXPECT_EQ(m.boundary_facets().size(), 3u);
  EXPECT_NEAR(m.cell(0).measure, 0.5, 1e-15);
  for (const auto& F : m.facets()) EXPECT_EQ(F.tag, "edge");
  expect_closed_cells(m);
}

TEST(Mesh, GmshUnnamedPhysicalTagUsesNumber) {
  std::string text = kTriangleMsh;
  const auto a = text.find("$PhysicalNames");
  const auto b = text.find("$EndPhysicalNames") + std::string("$EndPhysicalNames\n").size();
  text.erase(a, b - a);
  std::istringstream in(text);
  const Mesh m = read_gmsh(in);
  for (const auto& F : m.facets()) EXPECT_EQ(F.tag, "7");
}

TEST(Mesh, GmshRejectsBinaryAndWrongVersion) {
  std::istringstream bin("$MeshFormat\n2.2 1 8\n$EndMeshFormat\n");
  EXPECT_THROW(read_gmsh(bin), Error);
  std::istringstream v4("$MeshFormat\n4.1 0 8\n$EndMeshFormat\n");
  EXPECT_THROW(read_gmsh(v4), Error);
  std::istringstream junk("hello");
  EXPECT_THROW(read_gmsh(junk), Error);
}

TEST(Mesh, GmshTetrahedron) {
  const char* text = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
10 0 0 0
20 1 0 0
30 0 1 0
40 0 0 1
$EndNodes
$Elements
2
1 4 2 0 1 10 20 30 40
2 2 2 5 1 10 20 40
$EndElements
)";
  std::istringstream in(text);
  const Mesh m = read_gmsh(in);
  EXPECT_EQ(m.dim(), 3);
  EXPECT_NEAR(m.cell(0).measure, 1.0 / 6.0, 1e-15);
  EXPECT_EQ(m.facets_with_tag("5").size(), 1u);
  expect_closed_cells(m);
  expect_oriented(m);
}

TEST(Mesh, TwoTriangleSquare) {
  const Mesh m = generate_rect_mesh(1.0, 1.0, 1, 1);
  EXPECT_EQ(m.num_cells(), 2u);
  EXPECT_EQ(m.interior_facets().size(), 1u);
  EXPECT_EQ(m.boundary_facets().size(), 4u);
  expect_oriented(m);
}

TEST(Mesh, RectMeshCountsAndArea) {
  for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{50, 50}, {10, 50}, {3, 7}}) {
    const Mesh m = generate_rect_mesh(2.5, 1.5, nx, ny);
    EXPECT_EQ(m.num_cells(), 2 * nx * ny);
    EXPECT_EQ(m.boundary_facets().size(), 2 * (nx + ny));
    EXPECT_NEAR(m.total_measure(), 2.5 * 1.5, 1e-12);
  }
  const Mesh m = generate_rect_mesh(1.0, 1.0, 50, 50);
  EXPECT_EQ(m.num_cells(), 5000u);
}

TEST(Mesh, RectMeshTags) {
  const Mesh m = generate_rect_mesh(1.0, 2.0, 4, 3);
  EXPECT_EQ(m.facets_with_tag("left").size(), 3u);
  EXPECT_EQ(m.facets_with_tag("right").size(), 3u);
  EXPECT_EQ(m.facets_with_tag("bottom").size(), 4u);
  EXPECT_EQ(m.facets_with_tag("top").size(), 4u);
}

TEST(Mesh, ClosureAndOrientationOnJitteredMeshes) {
  const Mesh m2 = testing_support::square_mesh(8, 0.3);
  expect_closed_cells(m2);
  expect_oriented(m2);
  const Mesh m3 = testing_support::tet_mesh(3, 0.2);
  EXPECT_EQ(m3.num_cells(), 6u * 27u);
  EXPECT_NEAR(m3.total_measure(), 1.0 * 0.8 * 0.9, 1e-12);
  expect_closed_cells(m3);
  expect_oriented(m3);
  for (const char* t : {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"}) EXPECT_EQ(m3.facets_with_tag(t).size(), 18u);
}

TEST(Mesh, PolygonalCells) {
  // unit square split into a quad and a triangle sharing one edge
  std::vector<Point> X{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {2, 0.5, 0}};
  const Mesh m = Mesh::from_cells(2, X, {{0, 1, 2, 3}, {1, 4, 2}});
  EXPECT_EQ(m.interior_facets().size(), 1u);
  EXPECT_NEAR(m.cell(0).measure, 1.0, 1e-15);
  EXPECT_NEAR(m.cell(0).barycenter.x(), 0.5, 1e-15);
  expect_closed_cells(m);
  expect_oriented(m);
}

TEST(Mesh, HexahedronFromFacetLoops) {
  std::vector<Point> X;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) X.emplace_back(i, 2.0 * j, 3.0 * k);
  std::vector<std::vector<std::vector<Index>>> faces{
      {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}}};
  const Mesh m = Mesh::from_facet_loops(3, X, {{0, 1, 2, 3, 4, 5, 6, 7}}, faces);
  EXPECT_NEAR(m.cell(0).measure, 6.0, 1e-13);
  EXPECT_NEAR((m.cell(0).barycenter - Point(0.5, 1.0, 1.5)).norm(), 0.0, 1e-14);
  expect_closed_cells(m);
}

TEST(Mesh, RejectsNonPlanarFacet) {
  std::vector<Point> X;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) X.emplace_back(i, j, k);
  X[7].z() += 0.1;
  std::vector<std::vector<std::vector<Index>>> faces{
      {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}}};
  EXPECT_THROW(Mesh::from_facet_loops(3, X, {{0, 1, 2, 3, 4, 5, 6, 7}}, faces), Error);
}

TEST(Mesh, RejectsZeroMeasureCell) {
  std::vector<Point> X{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  EXPECT_THROW(Mesh::from_cells(2, X, {{0, 1, 2}}), Error);
}

TEST(Mesh, JsonRoundTrip) {
  const Mesh m = testing_support::square_mesh(3, 0.2);
  const Mesh back = mesh_from_json(mesh_to_json(m));
  ASSERT_EQ(back.num_cells(), m.num_cells());
  ASSERT_EQ(back.num_facets(), m.num_facets());
  for (Index c = 0; c < m.num_cells(); ++c)
    EXPECT_NEAR((back.cell(c).barycenter - m.cell(c).barycenter).norm(), 0.0, 1e-15);
  EXPECT_EQ(back.facets_with_tag("top").size(), 3u);
}

TEST(Mesh, JsonErrors) {
  EXPECT_THROW(mesh_from_json(nlohmann::json::parse(R"({"dim": 2})")), Error);
  auto j = mesh_to_json(generate_rect_mesh(1, 1, 1, 1));
  j["boundary_tags"]["bogus"] = {{0, 3}};  // the diagonal is an interior facet
  EXPECT_THROW(mesh_from_json(j), Error);
  EXPECT_THROW(load_mesh("/nonexistent/mesh.json"), Error);
}

TEST(Mesh, FacetClassification) {
  const Mesh m = generate_rect_mesh(1.0, 1.0, 1, 1);
  auto all_d = classify_facets(m, [](const std::string&) { return true; });
  EXPECT_TRUE(all_d.neumann.empty());
  EXPECT_EQ(all_d.dirichlet.size(), 4u);
  auto all_n = classify_facets(m, [](const std::string&) { return false; });
  EXPECT_TRUE(all_n.dirichlet.empty());
  auto bottom = classify_facets(m, [](const std::string& t) { return t == "bottom"; });
  EXPECT_EQ(bottom.dirichlet.size(), 1u);
  EXPECT_EQ(bottom.neumann.size(), 3u);
  EXPECT_EQ(bottom.interior.size(), 1u);

  Mesh untagged = Mesh::from_cells(2, m.vertices(), {{0, 1, 3}, {0, 3, 2}});
  EXPECT_THROW(classify_facets(untagged, [](const std::string&) { return true; }), Error);
}
