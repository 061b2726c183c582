#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "stokesdarcy/mesh.hpp"

namespace stokesdarcy {

enum class DofKind : std::uint8_t {
  Interior,  ///< unknown of the subdomain saddle-point system
  Essential, ///< fixed by boundary data on ∂_u (or no-slip on Γ)
  Interface  ///< carried by the interface flux variable φ
};

/// Classification and interior numbering of one velocity space.
struct DofMap {
  int n_dofs = 0;
  std::vector<DofKind> kind;
  std::vector<int> interior_index; ///< dense index among Interior dofs, else -1
  std::vector<int> interior_dofs;  ///< global ids in interior order
  int n_interior() const { return static_cast<int>(interior_dofs.size()); }
};

/// Returns a copy in which Interface dofs are renumbered as Interior
/// (used by the Neumann-Neumann auxiliary systems).
DofMap with_interface_free(const DofMap& dofs);

/// Dof layout of the interface space Λ_h: quadratic Lagrange functions on
/// the trace mesh with both endpoint values constrained to zero. Dofs are
/// ordered along arclength (midpoint, vertex, midpoint, ...), n_Λ = 2n-1.
struct InterfaceSpace {
  struct SegmentDofs {
    int v_left, mid, v_right; ///< Λ indices; -1 for the constrained endpoints
    double h;                 ///< segment length
    int stokes_node_vl, stokes_node_mid, stokes_node_vr; ///< scalar P2 nodes
    int darcy_edge;   ///< interface edge id in the Darcy mesh
    double darcy_sign; ///< +1 if the global RT0 edge normal equals n, else -1
  };
  int n_lambda = 0;
  std::vector<SegmentDofs> segments;
  std::vector<double> dof_s;          ///< arclength coordinate per Λ dof
  std::vector<std::uint8_t> dof_is_midpoint;
  int normal_comp = 1;   ///< component index of the interface normal n
  double normal_sign = -1.0; ///< n = normal_sign * e_{normal_comp}
};

struct SpaceOptions {
  /// Clamp the tangential Stokes velocity on Γ to zero (replaces the BJS
  /// condition by no-slip, as in the manufactured-solution setup).
  bool no_slip_interface = false;
};

/// All discrete spaces on a matching pair of subdomain meshes.
///
/// Stokes velocity: vector quadratic Lagrange (P2); scalar nodes are the
/// vertices followed by the edge midpoints, dof id = 2*node + component.
/// Darcy velocity: lowest-order Raviart-Thomas (RT0); one dof per edge
/// holding the signed net flux for the global edge orientation (normal is
/// the lower-to-higher-vertex tangent rotated by -90 degrees).
/// Pressures: piecewise constants (P0), one dof per cell per subdomain.
struct SpaceSet {
  const TriMesh* stokes_mesh = nullptr;
  const TriMesh* darcy_mesh = nullptr;
  const TraceMesh* trace = nullptr;

  int stokes_n_nodes = 0; ///< scalar P2 nodes (vertices + edge midpoints)
  std::vector<std::array<double, 2>> stokes_node_xy;
  DofMap stokes_u;
  std::vector<int> stokes_lambda_of_dof; ///< Λ index of Interface dofs, else -1

  DofMap darcy_u;                       ///< one dof per Darcy edge
  std::vector<double> darcy_edge_sign;  ///< interface edges: n·n_edge, else 0

  int n_p_stokes = 0, n_p_darcy = 0;
  InterfaceSpace iface;

  int n_lambda() const { return iface.n_lambda; }
};

SpaceSet build_spaces(const TriMesh& stokes, const TriMesh& darcy,
                      const TraceMesh& trace, const SpaceOptions& opts = {});

} // namespace stokesdarcy
