#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stokesdarcy/mesh.hpp"

using namespace stokesdarcy;

namespace {

BoundarySpec case1_spec() {
  BoundarySpec spec;
  spec.stokes_extents = {0, 0, 1, 1};
  spec.darcy_extents = {0, -1, 1, 0};
  spec.stokes_tags = {BoundaryTag::Velocity, BoundaryTag::Velocity, BoundaryTag::Interface,
                      BoundaryTag::Stress};
  spec.darcy_tags = {BoundaryTag::Pressure, BoundaryTag::Pressure, BoundaryTag::Velocity,
                     BoundaryTag::Interface};
  return spec;
}

} // namespace

TEST_CASE("smallest mesh: unit square, nx=ny=1") {
  const auto spec = case1_spec();
  const auto m = build_rect_mesh(spec.stokes_extents, 1, 1, spec);
  CHECK(m.n_cells() == 2);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_edges() == 5);
}

TEST_CASE("counts follow 2*nx*ny cells and (nx+1)(ny+1) vertices") {
  const auto spec = case1_spec();
  const auto m = build_rect_mesh(spec.stokes_extents, 8, 8, spec);
  CHECK(m.n_cells() == 128);
  CHECK(m.n_vertices() == 81);
}

TEST_CASE("interface side carries nx interface-tagged boundary edges") {
  const auto spec = case1_spec();
  const auto d = build_rect_mesh(spec.darcy_extents, 8, 8, spec);
  int n_iface = 0;
  for (int e = 0; e < d.n_edges(); ++e)
    if (d.edge_tag[e] && *d.edge_tag[e] == BoundaryTag::Interface) ++n_iface;
  CHECK(n_iface == 8);
}

TEST_CASE("invalid subdivision counts and inconsistent specs are rejected") {
  auto spec = case1_spec();
  CHECK_THROWS_AS(build_rect_mesh(spec.stokes_extents, 0, 1, spec), std::invalid_argument);
  CHECK_THROWS_AS(build_rect_mesh(spec.stokes_extents, 1, -2, spec), std::invalid_argument);
  spec.stokes_tags.bottom = BoundaryTag::Velocity; // shared side no longer interface
  CHECK_THROWS_AS(build_rect_mesh(spec.stokes_extents, 4, 4, spec), std::invalid_argument);
  auto spec2 = case1_spec();
  spec2.stokes_tags.left = BoundaryTag::Stress; // Γ endpoint not on ∂_u
  CHECK_THROWS_AS(build_rect_mesh(spec2.stokes_extents, 4, 4, spec2), std::invalid_argument);
}

TEST_CASE("mesh invariants: orientation, areas, edge incidences, tags") {
  const auto spec = case1_spec();
  for (int n : {1, 3, 8}) {
    const auto m = build_rect_mesh(spec.darcy_extents, n, n, spec);
    for (int c = 0; c < m.n_cells(); ++c) CHECK(m.cell_area(c) > 0);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-12));
    int boundary = 0;
    for (int e = 0; e < m.n_edges(); ++e) {
      const bool is_boundary = m.edge_cells[e][1] < 0;
      CHECK(m.edge_tag[e].has_value() == is_boundary);
      if (is_boundary) ++boundary;
      else CHECK(m.edge_cells[e][0] != m.edge_cells[e][1]);
    }
    CHECK(boundary == 4 * n);
  }
}

TEST_CASE("divergence theorem sanity: constant fields have zero boundary sum per cell") {
  const auto spec = case1_spec();
  const auto m = build_rect_mesh(spec.stokes_extents, 5, 3, spec);
  const double cx = 0.3, cy = -1.7;
  for (int c = 0; c < m.n_cells(); ++c) {
    double sum = 0;
    for (int le = 0; le < 3; ++le) {
      const int e = m.cell_edges[c][le];
      const auto n = m.outward_normal(e, c);
      sum += m.edge_length(e) * (n[0] * cx + n[1] * cy);
    }
    CHECK(std::abs(sum) < 1e-12);
  }
}

TEST_CASE("extract_trace on matching grids") {
  const auto spec = case1_spec();
  const auto s = build_rect_mesh(spec.stokes_extents, 8, 8, spec);
  const auto d = build_rect_mesh(spec.darcy_extents, 8, 8, spec);
  const auto t = extract_trace(s, d);
  REQUIRE(t.n_segments() == 8);
  for (int k = 0; k < 8; ++k) {
    CHECK(t.segments[k].s0 == doctest::Approx(k / 8.0).epsilon(1e-13));
    CHECK(t.segments[k].s1 == doctest::Approx((k + 1) / 8.0).epsilon(1e-13));
  }
  // Normal points from the Stokes domain (above) into the Darcy domain.
  CHECK(t.normal[0] == doctest::Approx(0.0));
  CHECK(t.normal[1] == doctest::Approx(-1.0));
  // Parent edges coincide geometrically.
  for (const auto& seg : t.segments) {
    const auto ms = s.edge_midpoint(seg.stokes_edge);
    const auto md = d.edge_midpoint(seg.darcy_edge);
    CHECK(std::abs(ms[0] - md[0]) < 1e-12);
    CHECK(std::abs(ms[1] - md[1]) < 1e-12);
  }
}

TEST_CASE("non-matching interfaces are rejected") {
  const auto spec = case1_spec();
  const auto s = build_rect_mesh(spec.stokes_extents, 8, 8, spec);
  const auto d = build_rect_mesh(spec.darcy_extents, 16, 16, spec);
  CHECK_THROWS_WITH_AS(extract_trace(s, d),
                       doctest::Contains("non-matching interface"), std::invalid_argument);
}

TEST_CASE("single-cell subdomains share one segment") {
  const auto spec = case1_spec();
  const auto s = build_rect_mesh(spec.stokes_extents, 1, 1, spec);
  const auto d = build_rect_mesh(spec.darcy_extents, 1, 1, spec);
  CHECK(extract_trace(s, d).n_segments() == 1);
}

TEST_CASE("csv dump emits all sections") {
  const auto spec = case1_spec();
  const auto m = build_rect_mesh(spec.stokes_extents, 2, 2, spec);
  std::ostringstream os;
  dump_mesh_csv(m, os);
  const auto text = os.str();
  CHECK(text.find("# vertices") != std::string::npos);
  CHECK(text.find("# cells") != std::string::npos);
  CHECK(text.find("interface") != std::string::npos);
  CHECK(text.find("stress") != std::string::npos);
}
