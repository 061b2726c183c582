#include "stokesdarcy/assemble.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fe_detail.hpp"

namespace stokesdarcy {

namespace {

using fe::gauss3;
using fe::tri_quad_deg4;

struct StokesCellLocal {
  std::array<int, 6> nodes;
  double eps[12][12];   // (ε(u),ε(v)) on the 12 local vector dofs
  double div_row[12];   // -∫ ∇·(N_i e_a)
  double load[12];      // ∫ f_S · (N_i e_a)
  double p_load;        // -∫ f_stokes_mass
  double area;
};

struct DarcyCellLocal {
  std::array<int, 3> edges;
  double mass[3][3]; // (ψ_E, ψ_F)
  double div_row[3]; // -∫ ∇·ψ_E = -σ_E
  double p_load;     // -∫ f_darcy
  double area;
};

// RT0 basis data for one cell: ψ_E(x) = σ_E (x - p_opp) / (2|T|), the basis
// dual to signed net fluxes through the globally oriented edges.
struct RT0Cell {
  std::array<double, 3> sigma;              // global-vs-outward orientation
  std::array<std::array<double, 2>, 3> opp; // opposite vertex per local edge
  double area;
};

RT0Cell rt0_cell(const TriMesh& mesh, int c) {
  RT0Cell r;
  r.area = mesh.cell_area(c);
  const auto& t = mesh.cells[c];
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.cell_edges[c][le];
    const int va = mesh.edges[e][0], vb = mesh.edges[e][1];
    const auto& a = mesh.vertices[va];
    const auto& b = mesh.vertices[vb];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double nex = (b[1] - a[1]) / len, ney = -(b[0] - a[0]) / len;
    const auto nout = mesh.outward_normal(e, c);
    r.sigma[le] = (nex * nout[0] + ney * nout[1]) > 0 ? 1.0 : -1.0;
    const int opp = t[(le + 2) % 3]; // vertex not on local edge (le, le+1)
    r.opp[le] = mesh.vertices[opp];
  }
  return r;
}

void compute_stokes_cell(const TriMesh& mesh, const ProblemData& data, int c,
                         StokesCellLocal& out) {
  const auto& t = mesh.cells[c];
  const int nv = mesh.n_vertices();
  out.nodes = {t[0], t[1], t[2],
               nv + mesh.cell_edges[c][0], nv + mesh.cell_edges[c][1], nv + mesh.cell_edges[c][2]};
  const auto& p0 = mesh.vertices[t[0]];
  const auto& p1 = mesh.vertices[t[1]];
  const auto& p2 = mesh.vertices[t[2]];
  const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
  const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
  const double det = j00 * j11 - j01 * j10;
  out.area = 0.5 * det;
  // J^{-T} rows for mapping reference gradients.
  const double it00 = j11 / det, it01 = -j10 / det;
  const double it10 = -j01 / det, it11 = j00 / det;

  for (auto& row : out.eps) for (double& v : row) v = 0;
  for (double& v : out.div_row) v = 0;
  for (double& v : out.load) v = 0;
  out.p_load = 0;

  for (const auto& qp : tri_quad_deg4) {
    const double w = qp.w * out.area;
    const auto refg = fe::p2_ref_gradients(qp.l0, qp.l1, qp.l2);
    double gx[6], gy[6];
    for (int i = 0; i < 6; ++i) {
      gx[i] = it00 * refg[i][0] + it01 * refg[i][1];
      gy[i] = it10 * refg[i][0] + it11 * refg[i][1];
    }
    // ε(N_i e_a) : ε(N_j e_b) = 0.5 (δ_ab ∇N_i·∇N_j + ∂_b N_i ∂_a N_j)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const double gg = gx[i] * gx[j] + gy[i] * gy[j];
        const double g_i[2] = {gx[i], gy[i]};
        const double g_j[2] = {gx[j], gy[j]};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const double val = 0.5 * ((a == b ? gg : 0.0) + g_i[b] * g_j[a]);
            out.eps[2 * i + a][2 * j + b] += w * val;
          }
      }
    const double x = p0[0] + j00 * qp.l1 + j01 * qp.l2;
    const double y = p0[1] + j10 * qp.l1 + j11 * qp.l2;
    const auto fs = ProblemData::eval(data.f_stokes, x, y);
    const auto vals = fe::p2_values(qp.l0, qp.l1, qp.l2);
    for (int i = 0; i < 6; ++i) {
      out.div_row[2 * i] -= w * gx[i];
      out.div_row[2 * i + 1] -= w * gy[i];
      out.load[2 * i] += w * fs[0] * vals[i];
      out.load[2 * i + 1] += w * fs[1] * vals[i];
    }
    out.p_load -= w * ProblemData::eval(data.f_stokes_mass, x, y);
  }
}

void compute_darcy_cell(const TriMesh& mesh, const ProblemData& data, int c,
                        DarcyCellLocal& out) {
  out.edges = mesh.cell_edges[c];
  const auto rt = rt0_cell(mesh, c);
  out.area = rt.area;
  for (auto& row : out.mass) for (double& v : row) v = 0;
  out.p_load = 0;
  for (int le = 0; le < 3; ++le) out.div_row[le] = -rt.sigma[le];

  const auto& t = mesh.cells[c];
  const auto& p0 = mesh.vertices[t[0]];
  const auto& p1 = mesh.vertices[t[1]];
  const auto& p2 = mesh.vertices[t[2]];
  for (const auto& qp : tri_quad_deg4) {
    const double w = qp.w * rt.area;
    const double x = qp.l0 * p0[0] + qp.l1 * p1[0] + qp.l2 * p2[0];
    const double y = qp.l0 * p0[1] + qp.l1 * p1[1] + qp.l2 * p2[1];
    double bx[3], by[3];
    for (int le = 0; le < 3; ++le) {
      const double s = rt.sigma[le] / (2.0 * rt.area);
      bx[le] = s * (x - rt.opp[le][0]);
      by[le] = s * (y - rt.opp[le][1]);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.mass[i][j] += w * (bx[i] * bx[j] + by[i] * by[j]);
    out.p_load -= w * ProblemData::eval(data.f_darcy, x, y);
  }
}

} // namespace

Vec restrict_interior(const DofMap& dofs, const Vec& full) {
  Vec out(dofs.n_interior());
  for (int i = 0; i < dofs.n_interior(); ++i) out[i] = full[dofs.interior_dofs[i]];
  return out;
}

Vec embed_interior(const DofMap& dofs, const Vec& interior) {
  Vec out = Vec::Zero(dofs.n_dofs);
  for (int i = 0; i < dofs.n_interior(); ++i) out[dofs.interior_dofs[i]] = interior[i];
  return out;
}

std::pair<SpMat, SpMat> assemble_interface_matrices(const SpaceSet& spaces) {
  const auto& ifc = spaces.iface;
  std::vector<Triplet> tm, ta;
  for (const auto& seg : ifc.segments) {
    const auto mass = fe::p2_line_mass(seg.h);
    const auto stiff = fe::p2_line_stiffness(seg.h);
    const int idx[3] = {seg.v_left, seg.mid, seg.v_right};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (idx[i] < 0 || idx[j] < 0) continue;
        tm.emplace_back(idx[i], idx[j], mass[i][j]);
        ta.emplace_back(idx[i], idx[j], stiff[i][j]);
      }
  }
  SpMat M(ifc.n_lambda, ifc.n_lambda), A(ifc.n_lambda, ifc.n_lambda);
  M.setFromTriplets(tm.begin(), tm.end());
  A.setFromTriplets(ta.begin(), ta.end());
  return {std::move(M), std::move(A)};
}

AssembledForms AssembledForms::with_params(const PhysicalParams& p) const {
  AssembledForms out = *this;
  out.params = p;
  out.A_S = p.mu * stokes_eps;
  if (p.beta() != 0.0) out.A_S += p.beta() * stokes_bjs;
  out.A_D = (1.0 / p.K) * darcy_mass_unit;
  return out;
}

AssembledForms assemble_forms(const SpaceSet& spaces, const PhysicalParams& params,
                              const ProblemData& data, Parallelism par) {
  const TriMesh& ms = *spaces.stokes_mesh;
  const TriMesh& md = *spaces.darcy_mesh;
  AssembledForms f;
  f.params = params;

  // --- Cell integrals. The per-cell work is independent, so it may run in
  // parallel; the scatter below keeps a fixed order either way.
  std::vector<StokesCellLocal> sloc(ms.n_cells());
  std::vector<DarcyCellLocal> dloc(md.n_cells());
  if (par == Parallelism::openmp) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < ms.n_cells(); ++c) compute_stokes_cell(ms, data, c, sloc[c]);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < md.n_cells(); ++c) compute_darcy_cell(md, data, c, dloc[c]);
  } else {
    for (int c = 0; c < ms.n_cells(); ++c) compute_stokes_cell(ms, data, c, sloc[c]);
    for (int c = 0; c < md.n_cells(); ++c) compute_darcy_cell(md, data, c, dloc[c]);
  }

  const int n_us = spaces.stokes_u.n_dofs;
  const int n_ud = spaces.darcy_u.n_dofs;
  f.load_stokes_u = Vec::Zero(n_us);
  f.load_darcy_u = Vec::Zero(n_ud);
  f.load_p_stokes = Vec::Zero(spaces.n_p_stokes);
  f.load_p_darcy = Vec::Zero(spaces.n_p_darcy);
  f.cell_measure_stokes = Vec::Zero(spaces.n_p_stokes);
  f.cell_measure_darcy = Vec::Zero(spaces.n_p_darcy);

  std::vector<Triplet> t_eps, t_bs, t_md, t_bd;
  t_eps.reserve(static_cast<std::size_t>(ms.n_cells()) * 144);
  t_bs.reserve(static_cast<std::size_t>(ms.n_cells()) * 12);
  t_md.reserve(static_cast<std::size_t>(md.n_cells()) * 9);
  t_bd.reserve(static_cast<std::size_t>(md.n_cells()) * 3);
  for (int c = 0; c < ms.n_cells(); ++c) {
    const auto& lc = sloc[c];
    int dof[12];
    for (int i = 0; i < 6; ++i) {
      dof[2 * i] = 2 * lc.nodes[i];
      dof[2 * i + 1] = 2 * lc.nodes[i] + 1;
    }
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) t_eps.emplace_back(dof[i], dof[j], lc.eps[i][j]);
      t_bs.emplace_back(c, dof[i], lc.div_row[i]);
      f.load_stokes_u[dof[i]] += lc.load[i];
    }
    f.load_p_stokes[c] += lc.p_load;
    f.cell_measure_stokes[c] = lc.area;
  }
  for (int c = 0; c < md.n_cells(); ++c) {
    const auto& lc = dloc[c];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t_md.emplace_back(lc.edges[i], lc.edges[j], lc.mass[i][j]);
      t_bd.emplace_back(c, lc.edges[i], lc.div_row[i]);
    }
    f.load_p_darcy[c] += lc.p_load;
    f.cell_measure_darcy[c] = lc.area;
  }
  f.stokes_eps.resize(n_us, n_us);
  f.stokes_eps.setFromTriplets(t_eps.begin(), t_eps.end());
  f.B_S.resize(spaces.n_p_stokes, n_us);
  f.B_S.setFromTriplets(t_bs.begin(), t_bs.end());
  f.darcy_mass_unit.resize(n_ud, n_ud);
  f.darcy_mass_unit.setFromTriplets(t_md.begin(), t_md.end());
  f.B_D.resize(spaces.n_p_darcy, n_ud);
  f.B_D.setFromTriplets(t_bd.begin(), t_bd.end());

  // --- Boundary terms (serial; the boundary is lower-dimensional).
  const auto& ifc = spaces.iface;
  const int tc = 1 - ifc.normal_comp; // tangential component index
  std::vector<Triplet> t_bjs;
  f.w_gamma = Vec::Zero(ifc.n_lambda);
  for (const auto& seg : ifc.segments) {
    const auto mass = fe::p2_line_mass(seg.h);
    const int nodes[3] = {seg.stokes_node_vl, seg.stokes_node_mid, seg.stokes_node_vr};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t_bjs.emplace_back(2 * nodes[i] + tc, 2 * nodes[j] + tc, mass[i][j]);
    const int lam[3] = {seg.v_left, seg.mid, seg.v_right};
    const double wseg[3] = {seg.h / 6.0, 2.0 * seg.h / 3.0, seg.h / 6.0};
    for (int i = 0; i < 3; ++i)
      if (lam[i] >= 0) f.w_gamma[lam[i]] += wseg[i];
  }
  f.stokes_bjs.resize(n_us, n_us);
  f.stokes_bjs.setFromTriplets(t_bjs.begin(), t_bjs.end());

  // Traction datum on ∂_σ Ω_S: (g_traction, v).
  if (data.g_traction) {
    const int nv = ms.n_vertices();
    for (int e = 0; e < ms.n_edges(); ++e) {
      if (!ms.edge_tag[e] || *ms.edge_tag[e] != BoundaryTag::Stress) continue;
      const int va = ms.edges[e][0], vb = ms.edges[e][1];
      const auto& a = ms.vertices[va];
      const auto& b = ms.vertices[vb];
      const double len = ms.edge_length(e);
      const int nodes[3] = {va, nv + e, vb}; // (left, mid, right) along a->b
      for (const auto& gp : gauss3) {
        const double x = a[0] + gp.t * (b[0] - a[0]);
        const double y = a[1] + gp.t * (b[1] - a[1]);
        const auto g = ProblemData::eval(data.g_traction, x, y);
        const auto vals = fe::p2_line_values(gp.t);
        for (int i = 0; i < 3; ++i) {
          f.load_stokes_u[2 * nodes[i]] += gp.w * len * g[0] * vals[i];
          f.load_stokes_u[2 * nodes[i] + 1] += gp.w * len * g[1] * vals[i];
        }
      }
    }
  }

  // Pressure datum on ∂_p Ω_D: the load is -(g_p, n_out·v).
  if (data.g_pressure) {
    for (int e = 0; e < md.n_edges(); ++e) {
      if (!md.edge_tag[e] || *md.edge_tag[e] != BoundaryTag::Pressure) continue;
      const int cell = md.edge_cells[e][0];
      const auto nout = md.outward_normal(e, cell);
      const auto& a = md.vertices[md.edges[e][0]];
      const auto& b = md.vertices[md.edges[e][1]];
      const double len = md.edge_length(e);
      const double nex = (b[1] - a[1]) / len, ney = -(b[0] - a[0]) / len;
      const double sigma = (nex * nout[0] + ney * nout[1]) > 0 ? 1.0 : -1.0;
      double gint = 0; // ∫_e g_p ds
      for (const auto& gp : gauss3)
        gint += gp.w * len *
                ProblemData::eval(data.g_pressure, a[0] + gp.t * (b[0] - a[0]),
                                  a[1] + gp.t * (b[1] - a[1]));
      // n_out·ψ_e = sigma/|e| on e.
      f.load_darcy_u[e] -= sigma * gint / len;
    }
  }

  // Essential lift: nodal interpolation of g_velocity on ∂_u Ω_S. Dofs that
  // are Essential for other reasons (interface no-slip) stay zero.
  f.lift_stokes = Vec::Zero(n_us);
  if (data.g_velocity) {
    const int nv = ms.n_vertices();
    for (int e = 0; e < ms.n_edges(); ++e) {
      if (!ms.edge_tag[e] || *ms.edge_tag[e] != BoundaryTag::Velocity) continue;
      const int nodes[3] = {ms.edges[e][0], ms.edges[e][1], nv + e};
      for (int n : nodes) {
        const auto& xy = spaces.stokes_node_xy[n];
        const auto g = data.g_velocity(xy[0], xy[1]);
        f.lift_stokes[2 * n] = g[0];
        f.lift_stokes[2 * n + 1] = g[1];
      }
    }
  }

  auto [M, A] = assemble_interface_matrices(spaces);
  f.M_gamma = std::move(M);
  f.A_gamma = std::move(A);

  f.A_S = params.mu * f.stokes_eps;
  if (params.beta() != 0.0) f.A_S += params.beta() * f.stokes_bjs;
  f.A_D = (1.0 / params.K) * f.darcy_mass_unit;
  return f;
}

} // namespace stokesdarcy
