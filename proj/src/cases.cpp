#include "stokesdarcy/cases.hpp"

#include <cmath>

#include "fe_detail.hpp"

namespace stokesdarcy {

namespace {

CaseSetup make_setup(std::string name, const BoundarySpec& spec, int nx_s, int ny_s,
                     int nx_d, int ny_d, const PhysicalParams& params,
                     const SpaceOptions& opts = {}) {
  CaseSetup cs;
  cs.name = std::move(name);
  cs.spec = spec;
  cs.stokes = std::make_unique<TriMesh>(build_rect_mesh(spec.stokes_extents, nx_s, ny_s, spec));
  cs.darcy = std::make_unique<TriMesh>(build_rect_mesh(spec.darcy_extents, nx_d, ny_d, spec));
  cs.trace = std::make_unique<TraceMesh>(extract_trace(*cs.stokes, *cs.darcy));
  cs.spaces = build_spaces(*cs.stokes, *cs.darcy, *cs.trace, opts);
  cs.params = params;
  cs.mode = detect_mode(*cs.stokes, *cs.darcy);
  return cs;
}

} // namespace

CaseSetup define_case1(int resolution, const PhysicalParams& params) {
  BoundarySpec spec;
  spec.stokes_extents = {0, 0, 1, 1};
  spec.darcy_extents = {0, -1, 1, 0};
  spec.stokes_tags = {BoundaryTag::Velocity, BoundaryTag::Velocity, BoundaryTag::Interface,
                      BoundaryTag::Stress};
  spec.darcy_tags = {BoundaryTag::Pressure, BoundaryTag::Pressure, BoundaryTag::Velocity,
                     BoundaryTag::Interface};
  auto cs = make_setup("case1", spec, resolution, resolution, resolution, resolution, params);
  cs.data.g_pressure = [](double, double y) { return y; };
  return cs;
}

CaseSetup define_case2(int resolution, const PhysicalParams& params) {
  BoundarySpec spec;
  spec.stokes_extents = {0, 0, 1, 1};
  spec.darcy_extents = {0, -1, 1, 0};
  spec.stokes_tags = {BoundaryTag::Velocity, BoundaryTag::Velocity, BoundaryTag::Interface,
                      BoundaryTag::Stress};
  spec.darcy_tags = {BoundaryTag::Velocity, BoundaryTag::Velocity, BoundaryTag::Velocity,
                     BoundaryTag::Interface};
  auto cs = make_setup("case2", spec, resolution, resolution, resolution, resolution, params);
  cs.data.g_velocity = [](double, double y) {
    return std::array<double, 2>{0.0, y * (2.0 - y)};
  };
  return cs;
}

CaseSetup define_manufactured(int resolution, const PhysicalParams& params) {
  BoundarySpec spec;
  spec.stokes_extents = {0, 1, 1, 2};
  spec.darcy_extents = {0, 0, 1, 1};
  spec.stokes_tags = {BoundaryTag::Velocity, BoundaryTag::Velocity, BoundaryTag::Interface,
                      BoundaryTag::Stress};
  spec.darcy_tags = {BoundaryTag::Pressure, BoundaryTag::Pressure, BoundaryTag::Pressure,
                     BoundaryTag::Interface};
  SpaceOptions opts;
  opts.no_slip_interface = true; // no-slip replaces BJS on Γ
  auto cs = make_setup("manufactured", spec, resolution, resolution, resolution, resolution,
                       params, opts);

  const double mu = params.mu, K = params.K;
  ExactSolution ex;
  ex.u_S = [](double x, double y) {
    return std::array<double, 2>{(y - 1) * (y - 1), x * (x - 1)};
  };
  ex.p_S = [mu, K](double x, double y) { return mu * (x + y - 1) + 1.0 / (3.0 * K); };
  ex.p_D = [mu, K](double x, double y) {
    return (x * (1 - x) * (y - 1) + y * y * y / 3.0 - y * y + y) / K + mu * x;
  };
  // u_D = -K ∇p_D = ( -(1-2x)(y-1) - K mu, -x(1-x) - (y-1)² )
  ex.u_D = [mu, K](double x, double y) {
    return std::array<double, 2>{-(1 - 2 * x) * (y - 1) - K * mu,
                                 -x * (1 - x) - (y - 1) * (y - 1)};
  };
  cs.exact = ex;

  cs.data.g_velocity = [ex](double x, double y) { return ex.u_S(x, y); };
  cs.data.g_pressure = [ex](double x, double y) { return ex.p_D(x, y); };
  // Exact traction on the top boundary (outward normal (0,1)):
  // n·σ = (mu ε12, mu ε22 - p_S) with ε12 = (2(y-1) + 2x - 1)/2, ε22 = 0.
  cs.data.g_traction = [mu, ex](double x, double y) {
    const double eps12 = 0.5 * (2 * (y - 1) + 2 * x - 1);
    return std::array<double, 2>{mu * eps12, -ex.p_S(x, y)};
  };
  return cs;
}

CaseSetup define_coupled_neumann(int resolution, const PhysicalParams& params) {
  BoundarySpec spec;
  spec.stokes_extents = {0, 0, 1, 1};
  spec.darcy_extents = {0, -1, 1, 0};
  spec.stokes_tags = {BoundaryTag::Velocity, BoundaryTag::Velocity, BoundaryTag::Interface,
                      BoundaryTag::Velocity};
  spec.darcy_tags = {BoundaryTag::Velocity, BoundaryTag::Velocity, BoundaryTag::Velocity,
                     BoundaryTag::Interface};
  auto cs = make_setup("coupled_neumann", spec, resolution, resolution, resolution, resolution,
                       params);
  cs.data.f_darcy = [](double, double) { return 1.0; };
  cs.data.f_stokes_mass = [](double, double) { return -1.0; };
  return cs;
}

ErrorNorms compute_errors(const ReconstructedSolution& sol, const CaseSetup& setup) {
  ErrorNorms err;
  if (!setup.exact) return err;
  const auto& ex = *setup.exact;
  const auto& ms = *setup.stokes;
  const auto& md = *setup.darcy;
  const int nv_s = ms.n_vertices();

  double vel2 = 0, p2 = 0, flux2 = 0, div2 = 0;
  for (int c = 0; c < ms.n_cells(); ++c) {
    const auto& t = ms.cells[c];
    const auto& p0 = ms.vertices[t[0]];
    const auto& p1 = ms.vertices[t[1]];
    const auto& p2v = ms.vertices[t[2]];
    const int nodes[6] = {t[0], t[1], t[2], nv_s + ms.cell_edges[c][0],
                          nv_s + ms.cell_edges[c][1], nv_s + ms.cell_edges[c][2]};
    const double area = ms.cell_area(c);
    for (const auto& qp : fe::tri_quad_deg4) {
      const double x = qp.l0 * p0[0] + qp.l1 * p1[0] + qp.l2 * p2v[0];
      const double y = qp.l0 * p0[1] + qp.l1 * p1[1] + qp.l2 * p2v[1];
      const auto vals = fe::p2_values(qp.l0, qp.l1, qp.l2);
      double uh[2] = {0, 0};
      for (int i = 0; i < 6; ++i) {
        uh[0] += vals[i] * sol.u_S[2 * nodes[i]];
        uh[1] += vals[i] * sol.u_S[2 * nodes[i] + 1];
      }
      const auto ue = ex.u_S(x, y);
      const double w = qp.w * area;
      vel2 += w * ((uh[0] - ue[0]) * (uh[0] - ue[0]) + (uh[1] - ue[1]) * (uh[1] - ue[1]));
      const double pd = sol.p_S[c] - ex.p_S(x, y);
      p2 += w * pd * pd;
    }
  }
  for (int c = 0; c < md.n_cells(); ++c) {
    const auto& t = md.cells[c];
    const auto& p0 = md.vertices[t[0]];
    const auto& p1 = md.vertices[t[1]];
    const auto& p2v = md.vertices[t[2]];
    const double area = md.cell_area(c);
    // RT0 basis bookkeeping (signed net-flux dofs on globally oriented edges).
    double sigma[3];
    std::array<double, 2> opp[3];
    double divh = 0;
    for (int le = 0; le < 3; ++le) {
      const int e = md.cell_edges[c][le];
      const auto& a = md.vertices[md.edges[e][0]];
      const auto& b = md.vertices[md.edges[e][1]];
      const double len = md.edge_length(e);
      const double nex = (b[1] - a[1]) / len, ney = -(b[0] - a[0]) / len;
      const auto nout = md.outward_normal(e, c);
      sigma[le] = (nex * nout[0] + ney * nout[1]) > 0 ? 1.0 : -1.0;
      const int ov = t[(le + 2) % 3];
      opp[le] = md.vertices[ov];
      divh += sigma[le] * sol.u_D[e] / area;
    }
    for (const auto& qp : fe::tri_quad_deg4) {
      const double x = qp.l0 * p0[0] + qp.l1 * p1[0] + qp.l2 * p2v[0];
      const double y = qp.l0 * p0[1] + qp.l1 * p1[1] + qp.l2 * p2v[1];
      double uh[2] = {0, 0};
      for (int le = 0; le < 3; ++le) {
        const double s = sigma[le] * sol.u_D[md.cell_edges[c][le]] / (2.0 * area);
        uh[0] += s * (x - opp[le][0]);
        uh[1] += s * (y - opp[le][1]);
      }
      const auto ue = ex.u_D(x, y);
      const double w = qp.w * area;
      flux2 += w * ((uh[0] - ue[0]) * (uh[0] - ue[0]) + (uh[1] - ue[1]) * (uh[1] - ue[1]));
      const double pd = sol.p_D[c] - ex.p_D(x, y);
      p2 += w * pd * pd;
      const double dive = ex.div_u_D ? ex.div_u_D(x, y) : 0.0;
      div2 += w * (divh - dive) * (divh - dive);
    }
  }
  err.velocity_S_l2 = std::sqrt(vel2);
  err.pressure_l2 = std::sqrt(p2);
  err.flux_D_l2 = std::sqrt(flux2);
  err.flux_D_hdiv = std::sqrt(flux2 + div2);
  return err;
}

} // namespace stokesdarcy
