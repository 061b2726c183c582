#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stokesdarcy/cases.hpp"
#include "stokesdarcy/spaces.hpp"

using namespace stokesdarcy;

TEST_CASE("interface space dimension n_lambda = 2*segments - 1") {
  CHECK(define_case1(8).spaces.n_lambda() == 15);
  CHECK(define_case1(64).spaces.n_lambda() == 127);
  CHECK(define_case1(1).spaces.n_lambda() == 1); // single midpoint dof
}

TEST_CASE("interface dofs are ordered by arclength with endpoints dropped") {
  const auto cs = define_case1(4);
  const auto& ifc = cs.spaces.iface;
  REQUIRE(ifc.n_lambda == 7);
  for (int j = 1; j < ifc.n_lambda; ++j) CHECK(ifc.dof_s[j] > ifc.dof_s[j - 1]);
  CHECK(ifc.dof_s.front() == doctest::Approx(1.0 / 8));
  CHECK(ifc.dof_s.back() == doctest::Approx(7.0 / 8));
  CHECK(ifc.segments.front().v_left == -1);
  CHECK(ifc.segments.back().v_right == -1);
}

TEST_CASE("essential and interface masks partition the Stokes dofs") {
  const auto cs = define_case1(8);
  const auto& sp = cs.spaces;
  int essential = 0, interface = 0;
  for (int d = 0; d < sp.stokes_u.n_dofs; ++d) {
    if (sp.stokes_u.kind[d] == DofKind::Essential) ++essential;
    if (sp.stokes_u.kind[d] == DofKind::Interface) {
      ++interface;
      CHECK(sp.stokes_lambda_of_dof[d] >= 0);
    }
  }
  // Left/right walls: 2 sides x 17 nodes x 2 components.
  CHECK(essential == 68);
  // Interface normal dofs away from the endpoints.
  CHECK(interface == 15);
  CHECK(sp.stokes_u.n_interior() == sp.stokes_u.n_dofs - essential - interface);
}

TEST_CASE("interface tangential dofs stay free unless no-slip is requested") {
  const auto free_cs = define_case1(4);
  const auto& ifc = free_cs.spaces.iface;
  const int tc = 1 - ifc.normal_comp;
  for (const auto& seg : ifc.segments) {
    CHECK(free_cs.spaces.stokes_u.kind[2 * seg.stokes_node_mid + tc] == DofKind::Interior);
    CHECK(free_cs.spaces.stokes_u.kind[2 * seg.stokes_node_mid + ifc.normal_comp] ==
          DofKind::Interface);
  }
  const auto clamped = define_manufactured(4, PhysicalParams{});
  const auto& ifc2 = clamped.spaces.iface;
  const int tc2 = 1 - ifc2.normal_comp;
  for (const auto& seg : ifc2.segments)
    CHECK(clamped.spaces.stokes_u.kind[2 * seg.stokes_node_mid + tc2] == DofKind::Essential);
}

TEST_CASE("Darcy masks: no-flux edges essential, interface edges tracked with signs") {
  const auto cs = define_case2(8);
  const auto& sp = cs.spaces;
  const auto& mesh = *cs.darcy;
  int essential = 0, iface = 0;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (sp.darcy_u.kind[e] == DofKind::Essential) ++essential;
    if (sp.darcy_u.kind[e] == DofKind::Interface) {
      ++iface;
      CHECK(std::abs(sp.darcy_edge_sign[e]) == 1.0);
    }
  }
  CHECK(essential == 24); // bottom + two sides, 8 edges each
  CHECK(iface == 8);
}

TEST_CASE("with_interface_free renumbers interface dofs as interior") {
  const auto cs = define_case1(4);
  const auto freed = with_interface_free(cs.spaces.stokes_u);
  CHECK(freed.n_interior() == cs.spaces.stokes_u.n_interior() + cs.spaces.n_lambda());
}

TEST_CASE("boundary modes are detected from the tags") {
  CHECK(define_case1(2).mode == CouplingMode::both_dirichlet);
  CHECK(define_case2(2).mode == CouplingMode::single_neumann_darcy);
  CHECK(define_coupled_neumann(2).mode == CouplingMode::coupled_neumann);
}
