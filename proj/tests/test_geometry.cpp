#include "support.hpp"

#include "fluxlab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace fluxlab;
using testing::annulus;
using testing::code_of;
using testing::two_holes;

TEST_CASE("unit square without holes is the full 11 x 11 lattice") {
  GridDomain g = build_grid({Rect{{0, 0}, {1, 1}}, {}, 0.1});
  CHECK(g.num_vertices() == 121);
  CHECK(g.num_edges() == 2 * 11 * 10);
  CHECK(g.num_holes() == 0);
  CHECK(g.num_boundary_components() == 1);
  CHECK(g.num_cells() == 100);
  int boundary = 0;
  for (int v = 0; v < g.num_vertices(); ++v) boundary += g.is_boundary(v);
  CHECK(boundary == 40);
}

TEST_CASE("annulus vertex set matches a brute-force lattice count") {
  const double h = 0.02;
  GridDomain g = build_grid(annulus(h));
  int expected = 0;
  for (int i = -60; i <= 60; ++i)
    for (int j = -60; j <= 60; ++j) {
      const double r = std::hypot(i * h, j * h);
      if (r <= 1.0 + 1e-12 && r >= 0.3 - 1e-12) ++expected;
    }
  CHECK(g.num_vertices() == expected);
  CHECK(g.num_holes() == 1);
  CHECK(g.num_boundary_components() == 2);
}

TEST_CASE("boundary labels: outer 0, inner 1, each an 8-neighbor of its region") {
  GridDomain g = build_grid(annulus(0.05));
  std::set<int> labels;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!g.is_boundary(v)) continue;
    labels.insert(g.boundary_label(v));
    const LatticeIndex c = g.index(v);
    bool touches = false;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) touches = touches || g.inactive_region({c.i + di, c.j + dj}) == g.boundary_label(v);
    CHECK(touches);
    const double r = g.position(v).norm();
    if (g.boundary_label(v) == 0)
      CHECK(r > 0.85);
    else
      CHECK(r < 0.45);
  }
  CHECK(labels == std::set<int>{0, 1});
}

TEST_CASE("two-hole rectangle has three boundary components") {
  GridDomain g = build_grid(two_holes(0.02));
  CHECK(g.num_holes() == 2);
  std::set<int> labels;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.is_boundary(v)) labels.insert(g.boundary_label(v));
  CHECK(labels == std::set<int>{0, 1, 2});
  CHECK((g.hole_refs()[0] - Vec2(1.0, 0.5)).norm() < 1e-12);
  CHECK((g.hole_refs()[1] - Vec2(2.0, 0.5)).norm() < 1e-12);
}

TEST_CASE("edges join 4-neighbors at distance h") {
  GridDomain g = build_grid(annulus(0.05));
  for (const Edge& e : g.edges()) {
    CHECK((g.position(e.tail) - g.position(e.head)).norm() == doctest::Approx(0.05).epsilon(1e-12));
    auto de = g.edge_between(e.tail, e.head);
    REQUIRE(de);
    CHECK(de->sign == 1);
    CHECK(g.edge_between(e.head, e.tail)->sign == -1);
  }
}

TEST_CASE("cells list their corners counter-clockwise from the lower left") {
  GridDomain g = build_grid(annulus(0.1));
  for (int c = 0; c < g.num_cells(); ++c) {
    auto k = g.cell_corners(c);
    const LatticeIndex a = g.index(k[0]);
    CHECK(g.index(k[1]) == LatticeIndex{a.i + 1, a.j});
    CHECK(g.index(k[2]) == LatticeIndex{a.i + 1, a.j + 1});
    CHECK(g.index(k[3]) == LatticeIndex{a.i, a.j + 1});
    CHECK(g.cell_at(a) == c);
  }
}

TEST_CASE("z -> -z and quarter turns are lattice symmetries of the centered annulus") {
  GridDomain g = build_grid(annulus(0.02));
  for (int v = 0; v < g.num_vertices(); ++v) {
    const LatticeIndex c = g.index(v);
    const int w = g.vertex_at({-c.i, -c.j});
    REQUIRE(w >= 0);
    CHECK(g.boundary_label(w) == g.boundary_label(v));
    CHECK(g.vertex_at({-c.j, c.i}) >= 0);
  }
}

TEST_CASE("hole loops wind once about their own hole and not about the others") {
  GridDomain g = build_grid(two_holes(0.02));
  for (int i = 1; i <= 2; ++i) {
    LatticeLoop loop = hole_loop(g, i);
    const auto poly = loop_polygon(g, loop);
    CHECK(std::lround(winding_number(poly, g.hole_refs()[i - 1])) == 1);
    CHECK(std::lround(winding_number(poly, g.hole_refs()[2 - i])) == 0);
    // consecutive edges chain head to tail
    for (std::size_t k = 0; k < loop.edges.size(); ++k) {
      const DirectedEdge& de = loop.edges[k];
      const Edge& e = g.edges()[de.edge];
      const int head = de.sign > 0 ? e.head : e.tail;
      CHECK(head == loop.vertices[(k + 1) % loop.vertices.size()]);
    }
  }
  GridDomain a = build_grid(annulus(0.02));
  CHECK(std::lround(winding_number(loop_polygon(a, hole_loop(a, 1)), {0, 0})) == 1);
}

TEST_CASE("invalid specs and hole indices are rejected") {
  CHECK(code_of([] { build_grid({Disk{{0, 0}, 1}, {Disk{{2, 0}, 0.2}}, 0.05}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { build_grid({Disk{{0, 0}, 1}, {}, 0.0}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { build_grid({Disk{{0, 0}, -1}, {}, 0.1}); }) == ErrorCode::InvalidSpec);
  // hole rim 0.1 from the outer boundary with h = 0.05: gap of 2 cells
  CHECK(code_of([] { build_grid({Disk{{0, 0}, 1}, {Disk{{0.5, 0}, 0.4}}, 0.05}); }) == ErrorCode::SpecTooCoarse);
  // hole smaller than a cell holds no lattice point
  CHECK(code_of([] { build_grid({Disk{{0, 0}, 1}, {Disk{{0.05, 0.05}, 0.02}}, 0.1}); }) == ErrorCode::SpecTooCoarse);
  GridDomain g = build_grid(two_holes(0.05));
  CHECK(code_of([&] { hole_loop(g, 3); }) == ErrorCode::NoSuchHole);
  CHECK(code_of([&] { hole_loop(g, 0); }) == ErrorCode::NoSuchHole);
}

TEST_CASE("build_grid is deterministic") {
  GridDomain a = build_grid(two_holes(0.05));
  GridDomain b = build_grid(two_holes(0.05));
  std::ostringstream sa, sb;
  write_geometry(sa, a);
  write_geometry(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("v 0 ") != std::string::npos);
}

TEST_CASE("angle increments are wrapped into (-pi, pi]") {
  const Vec2 c(0, 0);
  CHECK(angle_increment({1, 0}, {0, 1}, c) == doctest::Approx(std::numbers::pi / 2));
  CHECK(angle_increment({0, 1}, {1, 0}, c) == doctest::Approx(-std::numbers::pi / 2));
  CHECK(angle_increment({-1, 1e-9}, {-1, -1e-9}, c) == doctest::Approx(2e-9).epsilon(1e-3));
  CHECK(angle_increment({1, 0}, {-1, 0}, c) == doctest::Approx(std::numbers::pi));
}
