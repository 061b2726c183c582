#include "stokesdarcy/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace stokesdarcy {

namespace {

constexpr double kGeomTol = 1e-12;

bool close(double a, double b) { return std::abs(a - b) <= kGeomTol; }

const char* tag_name(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Interface: return "interface";
    case BoundaryTag::Velocity: return "velocity";
    case BoundaryTag::Stress: return "stress";
    case BoundaryTag::Pressure: return "pressure";
  }
  return "?";
}

BoundaryTag side_tag(const SideTags& tags, int side) {
  switch (side) {
    case 0: return tags.left;
    case 1: return tags.right;
    case 2: return tags.bottom;
    case 3: return tags.top;
  }
  throw std::logic_error("bad side index");
}

// Side of `r` shared with `o`: 0=left,1=right,2=bottom,3=top, or -1.
int shared_side(const Rect& r, const Rect& o) {
  const bool same_x = close(r.x0, o.x0) && close(r.x1, o.x1);
  const bool same_y = close(r.y0, o.y0) && close(r.y1, o.y1);
  if (same_x && close(r.y0, o.y1)) return 2;
  if (same_x && close(r.y1, o.y0)) return 3;
  if (same_y && close(r.x0, o.x1)) return 0;
  if (same_y && close(r.x1, o.x0)) return 1;
  return -1;
}

} // namespace

void BoundarySpec::validate() const {
  const int side_s = shared_side(stokes_extents, darcy_extents);
  if (side_s < 0)
    throw std::invalid_argument("BoundarySpec: subdomains do not share a full side");
  const int side_d = shared_side(darcy_extents, stokes_extents);
  if (side_tag(stokes_tags, side_s) != BoundaryTag::Interface ||
      side_tag(darcy_tags, side_d) != BoundaryTag::Interface)
    throw std::invalid_argument("BoundarySpec: shared side not tagged interface");
  // The interface endpoints must touch essential Stokes boundary
  // (standing assumption ∂Γ ⊆ closure of ∂_u Ω_S).
  const bool horizontal = (side_s == 2 || side_s == 3);
  const BoundaryTag adj0 = horizontal ? stokes_tags.left : stokes_tags.bottom;
  const BoundaryTag adj1 = horizontal ? stokes_tags.right : stokes_tags.top;
  if (adj0 != BoundaryTag::Velocity || adj1 != BoundaryTag::Velocity)
    throw std::invalid_argument(
        "BoundarySpec: Stokes sides adjacent to the interface must be velocity-tagged");
  for (int side = 0; side < 4; ++side) {
    if (side != side_s && side_tag(stokes_tags, side) == BoundaryTag::Interface)
      throw std::invalid_argument("BoundarySpec: interface tag on a non-shared Stokes side");
    if (side != side_d && side_tag(darcy_tags, side) == BoundaryTag::Interface)
      throw std::invalid_argument("BoundarySpec: interface tag on a non-shared Darcy side");
    if (side_tag(stokes_tags, side) == BoundaryTag::Pressure)
      throw std::invalid_argument("BoundarySpec: pressure tag on a Stokes side");
    if (side_tag(darcy_tags, side) == BoundaryTag::Stress)
      throw std::invalid_argument("BoundarySpec: stress tag on a Darcy side");
  }
}

int BoundarySpec::shared_side_of_stokes() const {
  return shared_side(stokes_extents, darcy_extents);
}

double TriMesh::cell_area(int c) const {
  const auto& t = cells[c];
  const auto& a = vertices[t[0]];
  const auto& b = vertices[t[1]];
  const auto& d = vertices[t[2]];
  return 0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]));
}

double TriMesh::edge_length(int e) const {
  const auto& a = vertices[edges[e][0]];
  const auto& b = vertices[edges[e][1]];
  return std::hypot(b[0] - a[0], b[1] - a[1]);
}

std::array<double, 2> TriMesh::edge_midpoint(int e) const {
  const auto& a = vertices[edges[e][0]];
  const auto& b = vertices[edges[e][1]];
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
}

std::array<double, 2> TriMesh::outward_normal(int e, int c) const {
  const auto& a = vertices[edges[e][0]];
  const auto& b = vertices[edges[e][1]];
  const double len = edge_length(e);
  // Rotate the (a->b) tangent by -90 degrees, then orient away from the
  // opposite vertex of the cell.
  std::array<double, 2> n = {(b[1] - a[1]) / len, -(b[0] - a[0]) / len};
  int opp = -1;
  for (int v : cells[c])
    if (v != edges[e][0] && v != edges[e][1]) opp = v;
  const auto& p = vertices[opp];
  const double d = (p[0] - a[0]) * n[0] + (p[1] - a[1]) * n[1];
  if (d > 0) { n[0] = -n[0]; n[1] = -n[1]; }
  return n;
}

double TriMesh::total_area() const {
  double s = 0;
  for (int c = 0; c < n_cells(); ++c) s += cell_area(c);
  return s;
}

TriMesh build_rect_mesh(const Rect& extents, int nx, int ny, const BoundarySpec& spec) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_rect_mesh: subdivision counts must be positive");
  spec.validate();

  const Rect& rs = spec.stokes_extents;
  const Rect& rd = spec.darcy_extents;
  const bool is_stokes = close(extents.x0, rs.x0) && close(extents.x1, rs.x1) &&
                         close(extents.y0, rs.y0) && close(extents.y1, rs.y1);
  const bool is_darcy = close(extents.x0, rd.x0) && close(extents.x1, rd.x1) &&
                        close(extents.y0, rd.y0) && close(extents.y1, rd.y1);
  if (!is_stokes && !is_darcy)
    throw std::invalid_argument("build_rect_mesh: extents match neither subdomain in spec");
  const SideTags tags = is_stokes ? spec.stokes_tags : spec.darcy_tags;

  TriMesh m;
  const double hx = extents.width() / nx;
  const double hy = extents.height() / ny;
  m.vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({extents.x0 + i * hx, extents.y0 + j * hy});
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  m.cells.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      m.cells.push_back({a, b, c});
      m.cells.push_back({a, c, d});
    }

  std::map<std::array<int, 2>, int> edge_id;
  auto get_edge = [&](int u, int v) {
    std::array<int, 2> key = {std::min(u, v), std::max(u, v)};
    auto it = edge_id.find(key);
    if (it != edge_id.end()) return it->second;
    const int id = m.n_edges();
    edge_id.emplace(key, id);
    m.edges.push_back(key);
    m.edge_cells.push_back({-1, -1});
    return id;
  };
  m.cell_edges.resize(m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& t = m.cells[c];
    for (int k = 0; k < 3; ++k) {
      const int e = get_edge(t[k], t[(k + 1) % 3]);
      m.cell_edges[c][k] = e;
      if (m.edge_cells[e][0] < 0) m.edge_cells[e][0] = c;
      else m.edge_cells[e][1] = c;
    }
  }

  m.edge_tag.resize(m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) {
    if (m.edge_cells[e][1] >= 0) continue; // interior
    const auto mid = m.edge_midpoint(e);
    BoundaryTag tag;
    if (close(mid[0], extents.x0)) tag = tags.left;
    else if (close(mid[0], extents.x1)) tag = tags.right;
    else if (close(mid[1], extents.y0)) tag = tags.bottom;
    else if (close(mid[1], extents.y1)) tag = tags.top;
    else throw std::logic_error("boundary edge not on any rectangle side");
    m.edge_tag[e] = tag;
  }
  return m;
}

TraceMesh extract_trace(const TriMesh& stokes, const TriMesh& darcy) {
  struct GammaEdge {
    double lo, hi; // interval along the tangent axis
    int edge;
  };
  auto collect = [](const TriMesh& m, int& axis, double& coord) {
    std::vector<GammaEdge> out;
    axis = -1;
    for (int e = 0; e < m.n_edges(); ++e) {
      if (!m.edge_tag[e] || *m.edge_tag[e] != BoundaryTag::Interface) continue;
      const auto& a = m.vertices[m.edges[e][0]];
      const auto& b = m.vertices[m.edges[e][1]];
      const int ax = close(a[1], b[1]) ? 0 : 1;
      if (axis < 0) { axis = ax; coord = a[1 - ax]; }
      else if (ax != axis || !close(a[1 - ax], coord))
        throw std::invalid_argument("extract_trace: interface edges not collinear");
      out.push_back({std::min(a[ax], b[ax]), std::max(a[ax], b[ax]), e});
    }
    std::sort(out.begin(), out.end(), [](const GammaEdge& l, const GammaEdge& r) { return l.lo < r.lo; });
    return out;
  };

  int axis_s = -1, axis_d = -1;
  double coord_s = 0, coord_d = 0;
  const auto gs = collect(stokes, axis_s, coord_s);
  const auto gd = collect(darcy, axis_d, coord_d);
  if (gs.empty() || gd.empty())
    throw std::invalid_argument("extract_trace: no interface-tagged edges");
  if (gs.size() != gd.size())
    throw std::invalid_argument("extract_trace: non-matching interface (edge counts " +
                                std::to_string(gs.size()) + " vs " + std::to_string(gd.size()) + ")");
  if (axis_s != axis_d || !close(coord_s, coord_d))
    throw std::invalid_argument("extract_trace: non-matching interface (different lines)");

  TraceMesh t;
  t.tangent_axis = axis_s;
  t.gamma_coord = coord_s;
  t.start = gs.front().lo;
  for (std::size_t k = 0; k < gs.size(); ++k) {
    if (!close(gs[k].lo, gd[k].lo) || !close(gs[k].hi, gd[k].hi))
      throw std::invalid_argument("extract_trace: non-matching interface (segment coordinates differ)");
    t.segments.push_back({gs[k].lo - t.start, gs[k].hi - t.start, gs[k].edge, gd[k].edge});
  }
  for (std::size_t k = 1; k < t.segments.size(); ++k)
    if (!close(t.segments[k - 1].s1, t.segments[k].s0))
      throw std::invalid_argument("extract_trace: interface segments have gaps or overlaps");

  // Normal from Ω_S into Ω_D: outward from the Stokes cell adjacent to Γ.
  const int e0 = t.segments.front().stokes_edge;
  t.normal = stokes.outward_normal(e0, stokes.edge_cells[e0][0]);
  return t;
}

void dump_mesh_csv(const TriMesh& mesh, std::ostream& os) {
  os << "# vertices: id,x,y\n";
  for (int v = 0; v < mesh.n_vertices(); ++v)
    os << v << ',' << mesh.vertices[v][0] << ',' << mesh.vertices[v][1] << '\n';
  os << "# cells: id,v0,v1,v2\n";
  for (int c = 0; c < mesh.n_cells(); ++c)
    os << c << ',' << mesh.cells[c][0] << ',' << mesh.cells[c][1] << ',' << mesh.cells[c][2] << '\n';
  os << "# boundary_edges: edge,v0,v1,tag\n";
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge_tag[e])
      os << e << ',' << mesh.edges[e][0] << ',' << mesh.edges[e][1] << ','
         << tag_name(*mesh.edge_tag[e]) << '\n';
}

} // namespace stokesdarcy
