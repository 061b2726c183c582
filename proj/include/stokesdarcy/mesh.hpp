#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace stokesdarcy {

enum class BoundaryTag : std::uint8_t {
  Interface, ///< shared Stokes-Darcy interface Γ
  Velocity,  ///< essential: u = g on ∂_u Ω_S, n·u = 0 on ∂_u Ω_D
  Stress,    ///< natural: n·σ = g on ∂_σ Ω_S
  Pressure   ///< natural: p = g_p on ∂_p Ω_D
};

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// Tags for the four sides of an axis-aligned rectangle.
struct SideTags {
  BoundaryTag left, right, bottom, top;
};

/// Geometry of the coupled problem: two rectangles sharing one full side.
struct BoundarySpec {
  Rect stokes_extents, darcy_extents;
  SideTags stokes_tags, darcy_tags;

  /// Throws std::invalid_argument unless the rectangles share exactly one
  /// full side, that side carries the Interface tag on both subdomains, and
  /// the Stokes sides touching the interface endpoints are Velocity-tagged.
  void validate() const;

  /// Side index (0=left,1=right,2=bottom,3=top) of the shared side as seen
  /// from the Stokes rectangle.
  int shared_side_of_stokes() const;
};

/// Conforming triangulation of a rectangle into uniform right triangles,
/// every square split along the same (lower-left to upper-right) diagonal.
struct TriMesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> cells; ///< vertex triples, counterclockwise
  /// Unique undirected edges as (a,b) with a < b.
  std::vector<std::array<int, 2>> edges;
  /// Per cell, the edge ids of local edges (v0,v1), (v1,v2), (v2,v0).
  std::vector<std::array<int, 3>> cell_edges;
  /// Cells incident to each edge; second entry -1 on the boundary.
  std::vector<std::array<int, 2>> edge_cells;
  /// Tag per boundary edge, empty for interior edges.
  std::vector<std::optional<BoundaryTag>> edge_tag;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  double cell_area(int c) const;
  double edge_length(int e) const;
  std::array<double, 2> edge_midpoint(int e) const;
  /// Unit normal of edge e pointing out of cell c (c must be incident to e).
  std::array<double, 2> outward_normal(int e, int c) const;
  double total_area() const;
};

/// The 1D interface mesh shared by both subdomain meshes. Segments are
/// ordered by arclength; the stored normal points from Ω_S into Ω_D.
struct TraceMesh {
  struct Segment {
    double s0, s1;   ///< arclength interval along Γ
    int stokes_edge; ///< boundary edge id in the Stokes mesh
    int darcy_edge;  ///< boundary edge id in the Darcy mesh
  };
  std::vector<Segment> segments;
  std::array<double, 2> normal; ///< from Ω_S into Ω_D
  int tangent_axis = 0;         ///< 0: Γ parallel to x-axis, 1: to y-axis
  double gamma_coord = 0;       ///< fixed coordinate of the interface line
  double start = 0;             ///< coordinate where arclength s = 0

  int n_segments() const { return static_cast<int>(segments.size()); }
  double length() const {
    return segments.empty() ? 0.0 : segments.back().s1 - segments.front().s0;
  }
};

/// Uniform mesh of 2*nx*ny right triangles over `extents`, which must equal
/// one of the rectangles in `spec` (that subdomain's side tags are applied).
TriMesh build_rect_mesh(const Rect& extents, int nx, int ny, const BoundarySpec& spec);

/// Matches the interface-tagged edges of both meshes (tolerance 1e-12) and
/// builds the coinciding trace mesh. Throws on non-matching interfaces.
TraceMesh extract_trace(const TriMesh& stokes, const TriMesh& darcy);

/// Plain-text CSV dump (vertices, cells, boundary tags) for debugging.
void dump_mesh_csv(const TriMesh& mesh, std::ostream& os);

} // namespace stokesdarcy
