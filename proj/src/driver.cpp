#include "stokesdarcy/driver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace stokesdarcy {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long monolithic_size(const SpaceSet& sp) {
  return static_cast<long>(sp.stokes_u.n_interior()) + sp.n_p_stokes +
         sp.darcy_u.n_interior() + sp.n_p_darcy + sp.n_lambda();
}

} // namespace

Solver::Solver(const CaseSetup& setup, bool with_nn, Parallelism par)
    : setup_(&setup),
      forms_([&] {
        const auto t0 = std::chrono::steady_clock::now();
        auto f = assemble_forms(setup.spaces, setup.params, setup.data, par);
        t_assemble_ = seconds_since(t0);
        return f;
      }()),
      ext_(build_extensions(setup.spaces)),
      op_([&] {
        const auto t0 = std::chrono::steady_clock::now();
        InterfaceOperator op(setup.spaces, forms_, ext_, setup.mode);
        t_factorize_ = seconds_since(t0);
        return op;
      }()),
      dec_([&] {
        const auto t0 = std::chrono::steady_clock::now();
        auto d = generalized_eig(forms_.A_gamma, forms_.M_gamma);
        t_eig_ = seconds_since(t0);
        return d;
      }()) {
  if (with_nn) nn_.emplace(setup.spaces, forms_, setup.mode);
}

RunResult Solver::run(const PhysicalParams& params, const RunConfig& cfg) const {
  RunResult out;
  auto& rep = out.report;
  rep.n_lambda = setup_->spaces.n_lambda();
  rep.n_total = monolithic_size(setup_->spaces);
  rep.timings.assemble = t_assemble_;
  rep.timings.factorize = t_factorize_;
  rep.timings.eig = t_eig_;

  const AssembledForms forms_p = forms_.with_params(params);
  const bool same = params.mu == forms_.params.mu && params.K == forms_.params.K &&
                    params.alpha == forms_.params.alpha;
  InterfaceOperator op = same ? op_ : op_.rebind(forms_p);
  const AssembledForms& forms_run = same ? forms_ : forms_p;

  std::function<Vec(const Vec&)> apply_P;
  std::optional<SpectralPreconditioner> spectral;
  std::optional<NNPreconditioner> nn;
  switch (cfg.precond) {
    case PrecondKind::spectral:
      spectral = build_spectral_precond(dec_, params);
      apply_P = [&](const Vec& v) {
        return op.project_primal(spectral->apply(op.project_dual(v)));
      };
      break;
    case PrecondKind::nn:
      if (!nn_) throw std::logic_error("Solver built without the NN preconditioner");
      nn = nn_->rebind(forms_run);
      apply_P = [&](const Vec& v) { return nn->apply(v); };
      break;
    case PrecondKind::none:
      apply_P = [&](const Vec& v) { return op.project_primal(op.project_dual(v)); };
      break;
  }

  auto t0 = std::chrono::steady_clock::now();
  const InterfaceVector chi = op.assemble_chi();
  rep.timings.chi = seconds_since(t0);

  KrylovConfig kcfg;
  kcfg.tol = cfg.tol;
  kcfg.max_iter = cfg.max_iter;
  t0 = std::chrono::steady_clock::now();
  const auto krep = gmres([&](const Vec& v) { return op.apply_sigma(v); }, apply_P,
                          op.solver_rhs(chi), Vec::Zero(op.n_lambda()), kcfg);
  rep.timings.gmres = seconds_since(t0);
  rep.iterations = krep.iterations;
  rep.converged = krep.converged;
  rep.history = krep.history;

  t0 = std::chrono::steady_clock::now();
  out.solution = op.reconstruct(krep.x);
  rep.timings.reconstruct = seconds_since(t0);
  rep.max_multiplier = std::max(std::abs(out.solution.multiplier_stokes),
                                std::abs(out.solution.multiplier_darcy));
  rep.conservation = check_conservation(out.solution, setup_->spaces, forms_run);
  if (cfg.compute_error_norms && setup_->exact)
    rep.errors = compute_errors(out.solution, *setup_);
  return out;
}

std::vector<Table1Row> run_table1(const std::vector<int>& resolutions, double tol) {
  std::vector<Table1Row> rows;
  for (int res : resolutions) {
    Table1Row row;
    row.inv_h = res;
    RunConfig cfg;
    cfg.tol = tol;
    {
      const auto c1 = define_case1(res);
      Solver s1(c1);
      const auto r1 = s1.run(cfg);
      row.n_total = r1.report.n_total;
      row.n_lambda = r1.report.n_lambda;
      row.iters_case1 = r1.report.iterations;
    }
    {
      const auto c2 = define_case2(res);
      Solver s2(c2);
      row.iters_case2 = s2.run(cfg).report.iterations;
    }
    rows.push_back(row);
  }
  return rows;
}

Table2Result run_table2(int case_id, int resolution, double tol) {
  Table2Result out;
  out.kappa_values = {1e4, 1e2, 1e0, 1e-2, 1e-4};
  out.mu_values = {1e-4, 1e-2, 1e0, 1e2, 1e4};
  const auto setup =
      case_id == 1 ? define_case1(resolution) : define_case2(resolution);
  Solver solver(setup);
  RunConfig cfg;
  cfg.tol = tol;
  cfg.compute_error_norms = false;
  for (double kappa : out.kappa_values) {
    std::vector<int> row;
    for (double mu : out.mu_values) {
      PhysicalParams p;
      p.mu = mu;
      p.K = kappa / mu;
      row.push_back(solver.run(p, cfg).report.iterations);
    }
    out.iterations.push_back(std::move(row));
  }
  return out;
}

Table3Result run_table3(const std::vector<double>& mu_values,
                        const std::vector<double>& k_values, int levels, double tol) {
  Table3Result out;
  for (int l = 0; l < levels; ++l) out.resolutions.push_back(7 << l);
  for (double mu : mu_values)
    for (double K : k_values)
      out.rows.push_back({mu, K, {}, {}});

  for (int res : out.resolutions) {
    PhysicalParams base; // factorizations are parameter-independent (alpha = 0)
    const auto setup = define_manufactured(res, base);
    Solver solver(setup, /*with_nn=*/true);
    for (auto& row : out.rows) {
      PhysicalParams p;
      p.mu = row.mu;
      p.K = row.K;
      RunConfig cfg;
      cfg.tol = tol;
      cfg.compute_error_norms = false;
      cfg.precond = PrecondKind::nn;
      row.nn_iters.push_back(solver.run(p, cfg).report.iterations);
      cfg.precond = PrecondKind::spectral;
      row.alg1_iters.push_back(solver.run(p, cfg).report.iterations);
    }
  }
  return out;
}

void print_table1(const std::vector<Table1Row>& rows, std::ostream& os) {
  os << std::setw(6) << "1/h" << std::setw(10) << "n_total" << std::setw(10) << "n_lambda"
     << std::setw(8) << "case1" << std::setw(8) << "case2" << '\n';
  for (const auto& r : rows)
    os << std::setw(6) << r.inv_h << std::setw(10) << r.n_total << std::setw(10) << r.n_lambda
       << std::setw(8) << r.iters_case1 << std::setw(8) << r.iters_case2 << '\n';
}

void print_table2(const Table2Result& t, std::ostream& os) {
  os << std::setw(12) << "kappa\\mu";
  for (double mu : t.mu_values) os << std::setw(10) << mu;
  os << '\n';
  for (std::size_t i = 0; i < t.kappa_values.size(); ++i) {
    os << std::setw(12) << t.kappa_values[i];
    for (int it : t.iterations[i]) os << std::setw(10) << it;
    os << '\n';
  }
}

void print_table3(const Table3Result& t, std::ostream& os) {
  os << std::setw(8) << "mu" << std::setw(8) << "K" << "   NN:";
  for (int r : t.resolutions) os << std::setw(6) << ("1/" + std::to_string(r));
  os << "   Alg1:";
  for (int r : t.resolutions) os << std::setw(6) << ("1/" + std::to_string(r));
  os << '\n';
  for (const auto& row : t.rows) {
    os << std::setw(8) << row.mu << std::setw(8) << row.K << "      ";
    for (int it : row.nn_iters) os << std::setw(6) << it;
    os << "        ";
    for (int it : row.alg1_iters) os << std::setw(6) << it;
    os << '\n';
  }
}

void write_table1_csv(const std::vector<Table1Row>& rows, std::ostream& os) {
  os << "inv_h,n_total,n_lambda,iters_case1,iters_case2\n";
  for (const auto& r : rows)
    os << r.inv_h << ',' << r.n_total << ',' << r.n_lambda << ',' << r.iters_case1 << ','
       << r.iters_case2 << '\n';
}

void write_table2_csv(const Table2Result& t, std::ostream& os) {
  os << "kappa,mu,iterations\n";
  for (std::size_t i = 0; i < t.kappa_values.size(); ++i)
    for (std::size_t j = 0; j < t.mu_values.size(); ++j)
      os << t.kappa_values[i] << ',' << t.mu_values[j] << ',' << t.iterations[i][j] << '\n';
}

void write_table3_csv(const Table3Result& t, std::ostream& os) {
  os << "mu,K,method";
  for (int r : t.resolutions) os << ",h_1_" << r;
  os << '\n';
  for (const auto& row : t.rows) {
    os << row.mu << ',' << row.K << ",nn";
    for (int it : row.nn_iters) os << ',' << it;
    os << '\n' << row.mu << ',' << row.K << ",spectral";
    for (int it : row.alg1_iters) os << ',' << it;
    os << '\n';
  }
}

void write_vtk(const std::string& path_prefix, const CaseSetup& setup,
               const ReconstructedSolution& sol) {
  const auto& ms = *setup.stokes;
  const auto& sp = setup.spaces;
  {
    std::ofstream os(path_prefix + "_stokes.vtk");
    if (!os) throw std::runtime_error("cannot open " + path_prefix + "_stokes.vtk");
    os << "# vtk DataFile Version 3.0\nstokes subdomain\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << sp.stokes_n_nodes << " double\n";
    for (const auto& xy : sp.stokes_node_xy) os << xy[0] << ' ' << xy[1] << " 0\n";
    os << "CELLS " << ms.n_cells() << ' ' << 7 * ms.n_cells() << '\n';
    const int nv = ms.n_vertices();
    for (int c = 0; c < ms.n_cells(); ++c) {
      const auto& t = ms.cells[c];
      os << "6 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << nv + ms.cell_edges[c][0] << ' '
         << nv + ms.cell_edges[c][1] << ' ' << nv + ms.cell_edges[c][2] << '\n';
    }
    os << "CELL_TYPES " << ms.n_cells() << '\n';
    for (int c = 0; c < ms.n_cells(); ++c) os << "22\n"; // quadratic triangle
    os << "POINT_DATA " << sp.stokes_n_nodes << "\nVECTORS velocity double\n";
    for (int n = 0; n < sp.stokes_n_nodes; ++n)
      os << sol.u_S[2 * n] << ' ' << sol.u_S[2 * n + 1] << " 0\n";
    os << "CELL_DATA " << ms.n_cells() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int c = 0; c < ms.n_cells(); ++c) os << sol.p_S[c] << '\n';
  }
  {
    const auto& md = *setup.darcy;
    std::ofstream os(path_prefix + "_darcy.vtk");
    if (!os) throw std::runtime_error("cannot open " + path_prefix + "_darcy.vtk");
    os << "# vtk DataFile Version 3.0\ndarcy subdomain\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << md.n_vertices() << " double\n";
    for (const auto& xy : md.vertices) os << xy[0] << ' ' << xy[1] << " 0\n";
    os << "CELLS " << md.n_cells() << ' ' << 4 * md.n_cells() << '\n';
    for (const auto& t : md.cells) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "CELL_TYPES " << md.n_cells() << '\n';
    for (int c = 0; c < md.n_cells(); ++c) os << "5\n";
    os << "CELL_DATA " << md.n_cells() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int c = 0; c < md.n_cells(); ++c) os << sol.p_D[c] << '\n';
    os << "VECTORS velocity double\n";
    for (int c = 0; c < md.n_cells(); ++c) {
      // RT0 value at the cell centroid
      const auto& t = md.cells[c];
      const double cx = (md.vertices[t[0]][0] + md.vertices[t[1]][0] + md.vertices[t[2]][0]) / 3;
      const double cy = (md.vertices[t[0]][1] + md.vertices[t[1]][1] + md.vertices[t[2]][1]) / 3;
      const double area = md.cell_area(c);
      double ux = 0, uy = 0;
      for (int le = 0; le < 3; ++le) {
        const int e = md.cell_edges[c][le];
        const auto& a = md.vertices[md.edges[e][0]];
        const auto& b = md.vertices[md.edges[e][1]];
        const double len = md.edge_length(e);
        const double nex = (b[1] - a[1]) / len, ney = -(b[0] - a[0]) / len;
        const auto nout = md.outward_normal(e, c);
        const double sigma = (nex * nout[0] + ney * nout[1]) > 0 ? 1.0 : -1.0;
        const int ov = t[(le + 2) % 3];
        const double s = sigma * sol.u_D[e] / (2.0 * area);
        ux += s * (cx - md.vertices[ov][0]);
        uy += s * (cy - md.vertices[ov][1]);
      }
      os << ux << ' ' << uy << " 0\n";
    }
  }
}

void write_report_csv(const RunReport& rep, std::ostream& os) {
  os << "iterations,converged,n_lambda,n_total,conservation_worst,conservation_scale,"
        "max_multiplier,err_velocity,err_pressure,err_flux,err_flux_hdiv,"
        "t_assemble,t_factorize,t_eig,t_chi,t_gmres,t_reconstruct\n";
  os << rep.iterations << ',' << (rep.converged ? 1 : 0) << ',' << rep.n_lambda << ','
     << rep.n_total << ',' << rep.conservation.worst() << ',' << rep.conservation.scale << ','
     << rep.max_multiplier << ',';
  if (rep.errors)
    os << rep.errors->velocity_S_l2 << ',' << rep.errors->pressure_l2 << ','
       << rep.errors->flux_D_l2 << ',' << rep.errors->flux_D_hdiv << ',';
  else
    os << ",,,,";
  os << rep.timings.assemble << ',' << rep.timings.factorize << ',' << rep.timings.eig << ','
     << rep.timings.chi << ',' << rep.timings.gmres << ',' << rep.timings.reconstruct << '\n';
}

void write_spectrum_csv(const SpectralDecomposition& dec, std::ostream& os) {
  os << "index,lambda\n";
  for (int i = 0; i < dec.lambda.size(); ++i) os << i << ',' << dec.lambda[i] << '\n';
}

} // namespace stokesdarcy
