#include "stokesdarcy/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace stokesdarcy {

namespace {

void number_interior(DofMap& map) {
  map.interior_index.assign(map.n_dofs, -1);
  map.interior_dofs.clear();
  for (int d = 0; d < map.n_dofs; ++d)
    if (map.kind[d] == DofKind::Interior) {
      map.interior_index[d] = static_cast<int>(map.interior_dofs.size());
      map.interior_dofs.push_back(d);
    }
}

} // namespace

DofMap with_interface_free(const DofMap& dofs) {
  DofMap out = dofs;
  for (auto& k : out.kind)
    if (k == DofKind::Interface) k = DofKind::Interior;
  number_interior(out);
  return out;
}

SpaceSet build_spaces(const TriMesh& stokes, const TriMesh& darcy,
                      const TraceMesh& trace, const SpaceOptions& opts) {
  SpaceSet s;
  s.stokes_mesh = &stokes;
  s.darcy_mesh = &darcy;
  s.trace = &trace;

  // --- Stokes P2 scalar nodes: vertices then edge midpoints.
  const int nv = stokes.n_vertices();
  s.stokes_n_nodes = nv + stokes.n_edges();
  s.stokes_node_xy.resize(s.stokes_n_nodes);
  for (int v = 0; v < nv; ++v) s.stokes_node_xy[v] = stokes.vertices[v];
  for (int e = 0; e < stokes.n_edges(); ++e)
    s.stokes_node_xy[nv + e] = stokes.edge_midpoint(e);

  s.stokes_u.n_dofs = 2 * s.stokes_n_nodes;
  s.stokes_u.kind.assign(s.stokes_u.n_dofs, DofKind::Interior);
  s.stokes_lambda_of_dof.assign(s.stokes_u.n_dofs, -1);

  // --- Interface space Λ_h, ordered along arclength with endpoints dropped.
  const int nseg = trace.n_segments();
  if (nseg < 1) throw std::invalid_argument("build_spaces: empty trace mesh");
  auto& ifc = s.iface;
  ifc.normal_comp = std::abs(trace.normal[1]) > 0.5 ? 1 : 0;
  ifc.normal_sign = trace.normal[ifc.normal_comp] > 0 ? 1.0 : -1.0;
  ifc.n_lambda = 2 * nseg - 1;
  ifc.dof_s.assign(ifc.n_lambda, 0.0);
  ifc.dof_is_midpoint.assign(ifc.n_lambda, 0);
  ifc.segments.resize(nseg);
  const int axis = trace.tangent_axis;
  for (int k = 0; k < nseg; ++k) {
    const auto& seg = trace.segments[k];
    auto& sd = ifc.segments[k];
    sd.h = seg.s1 - seg.s0;
    sd.mid = 2 * k;
    sd.v_left = (k == 0) ? -1 : 2 * k - 1;
    sd.v_right = (k == nseg - 1) ? -1 : 2 * k + 1;
    ifc.dof_s[sd.mid] = 0.5 * (seg.s0 + seg.s1);
    ifc.dof_is_midpoint[sd.mid] = 1;
    if (sd.v_right >= 0) ifc.dof_s[sd.v_right] = seg.s1;

    const auto& ev = stokes.edges[seg.stokes_edge];
    const bool first_is_left =
        stokes.vertices[ev[0]][axis] <= stokes.vertices[ev[1]][axis];
    sd.stokes_node_vl = first_is_left ? ev[0] : ev[1];
    sd.stokes_node_vr = first_is_left ? ev[1] : ev[0];
    sd.stokes_node_mid = nv + seg.stokes_edge;

    sd.darcy_edge = seg.darcy_edge;
    const auto& ed = darcy.edges[seg.darcy_edge];
    const auto& a = darcy.vertices[ed[0]];
    const auto& b = darcy.vertices[ed[1]];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double nex = (b[1] - a[1]) / len, ney = -(b[0] - a[0]) / len;
    sd.darcy_sign = nex * trace.normal[0] + ney * trace.normal[1] > 0 ? 1.0 : -1.0;
  }

  // --- Stokes dof classification. Essential velocity first, so that the
  // interface endpoint nodes (touching ∂_u) stay fully constrained.
  for (int e = 0; e < stokes.n_edges(); ++e) {
    if (!stokes.edge_tag[e] || *stokes.edge_tag[e] != BoundaryTag::Velocity) continue;
    const int nodes[3] = {stokes.edges[e][0], stokes.edges[e][1], nv + e};
    for (int n : nodes) {
      s.stokes_u.kind[2 * n] = DofKind::Essential;
      s.stokes_u.kind[2 * n + 1] = DofKind::Essential;
    }
  }
  const int nc = ifc.normal_comp;
  for (int k = 0; k < nseg; ++k) {
    const auto& sd = ifc.segments[k];
    const int nodes[3] = {sd.stokes_node_vl, sd.stokes_node_mid, sd.stokes_node_vr};
    const int lambda[3] = {sd.v_left, sd.mid, sd.v_right};
    for (int j = 0; j < 3; ++j) {
      const int nd = 2 * nodes[j] + nc;
      const int td = 2 * nodes[j] + (1 - nc);
      if (s.stokes_u.kind[nd] != DofKind::Essential) {
        s.stokes_u.kind[nd] = DofKind::Interface;
        s.stokes_lambda_of_dof[nd] = lambda[j];
      }
      if (opts.no_slip_interface && s.stokes_u.kind[td] != DofKind::Essential)
        s.stokes_u.kind[td] = DofKind::Essential;
    }
  }
  number_interior(s.stokes_u);

  // --- Darcy dof classification: one dof per edge.
  s.darcy_u.n_dofs = darcy.n_edges();
  s.darcy_u.kind.assign(s.darcy_u.n_dofs, DofKind::Interior);
  s.darcy_edge_sign.assign(s.darcy_u.n_dofs, 0.0);
  for (int e = 0; e < darcy.n_edges(); ++e) {
    if (!darcy.edge_tag[e]) continue;
    if (*darcy.edge_tag[e] == BoundaryTag::Velocity)
      s.darcy_u.kind[e] = DofKind::Essential;
    else if (*darcy.edge_tag[e] == BoundaryTag::Interface)
      s.darcy_u.kind[e] = DofKind::Interface;
  }
  for (int k = 0; k < nseg; ++k)
    s.darcy_edge_sign[ifc.segments[k].darcy_edge] = ifc.segments[k].darcy_sign;
  number_interior(s.darcy_u);

  s.n_p_stokes = stokes.n_cells();
  s.n_p_darcy = darcy.n_cells();
  return s;
}

} // namespace stokesdarcy
