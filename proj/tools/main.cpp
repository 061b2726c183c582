#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "stokesdarcy/driver.hpp"

using namespace stokesdarcy;

namespace {

struct CommonOpts {
  int resolution = 8;
  double mu = 1.0;
  double k = 1.0;
  double kappa = -1.0; // when set, K = kappa / mu
  double alpha = 0.0;
  double tol = 1e-6;
  int max_iter = 200;
  std::string precond = "spectral";
  std::string csv_path, vtk_path, mesh_dump, spectrum_csv;
  long seed = 0; // accepted for interface uniformity; the solver is deterministic
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--resolution", o.resolution, "cells per unit length (1/h)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mu", o.mu, "viscosity")->check(CLI::PositiveNumber);
  cmd->add_option("--k", o.k, "hydraulic conductivity K")->check(CLI::PositiveNumber);
  cmd->add_option("--kappa", o.kappa, "permeability kappa = mu*K (overrides --k)");
  cmd->add_option("--alpha", o.alpha, "BJS proportionality constant");
  cmd->add_option("--tol", o.tol, "relative preconditioned-residual tolerance");
  cmd->add_option("--max-iter", o.max_iter, "GMRes iteration cap");
  cmd->add_option("--precond", o.precond, "preconditioner")
      ->check(CLI::IsMember({"spectral", "nn", "none"}));
  cmd->add_option("--csv", o.csv_path, "write the run report as CSV");
  cmd->add_option("--vtk", o.vtk_path, "write VTK files with this path prefix");
  cmd->add_option("--dump-mesh", o.mesh_dump, "write the subdomain meshes as CSV");
  cmd->add_option("--spectrum-csv", o.spectrum_csv, "dump the generalized eigenvalues");
  cmd->add_option("--seed", o.seed, "unused; runs are deterministic");
}

PhysicalParams params_of(const CommonOpts& o) {
  PhysicalParams p;
  p.mu = o.mu;
  p.K = o.kappa > 0 ? o.kappa / o.mu : o.k;
  p.alpha = o.alpha;
  for (const auto& w : p.validate()) std::cerr << "warning: " << w << '\n';
  return p;
}

PrecondKind precond_of(const CommonOpts& o) {
  if (o.precond == "nn") return PrecondKind::nn;
  if (o.precond == "none") return PrecondKind::none;
  return PrecondKind::spectral;
}

int run_case(const CaseSetup& setup, const CommonOpts& o) {
  Solver solver(setup, precond_of(o) == PrecondKind::nn);
  RunConfig cfg;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.precond = precond_of(o);
  const auto result = solver.run(setup.params, cfg);
  const auto& rep = result.report;

  std::cout << setup.name << ": " << (rep.converged ? "converged" : "NOT converged") << " in "
            << rep.iterations << " iterations (n_lambda = " << rep.n_lambda
            << ", n_total = " << rep.n_total << ")\n";
  std::cout << "  conservation: worst residual " << rep.conservation.worst() << " (scale "
            << rep.conservation.scale << ")\n";
  if (rep.errors)
    std::cout << "  errors: |u_S| " << rep.errors->velocity_S_l2 << ", |p| "
              << rep.errors->pressure_l2 << ", |u_D| " << rep.errors->flux_D_l2 << ", |u_D|_Hdiv "
              << rep.errors->flux_D_hdiv << '\n';
  std::cout << "  timings [s]: assemble " << rep.timings.assemble << ", factorize "
            << rep.timings.factorize << ", eig " << rep.timings.eig << ", chi "
            << rep.timings.chi << ", gmres " << rep.timings.gmres << ", reconstruct "
            << rep.timings.reconstruct << '\n';

  if (!o.csv_path.empty()) {
    std::ofstream os(o.csv_path);
    write_report_csv(rep, os);
  }
  if (!o.vtk_path.empty()) write_vtk(o.vtk_path, setup, result.solution);
  if (!o.mesh_dump.empty()) {
    std::ofstream os_s(o.mesh_dump + "_stokes.csv"), os_d(o.mesh_dump + "_darcy.csv");
    dump_mesh_csv(*setup.stokes, os_s);
    dump_mesh_csv(*setup.darcy, os_d);
  }
  if (!o.spectrum_csv.empty()) {
    std::ofstream os(o.spectrum_csv);
    write_spectrum_csv(solver.decomposition(), os);
  }
  if (!rep.conservation.pass())
    std::cerr << "warning: conservation check above tolerance\n";
  return rep.converged ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Stokes-Darcy solver via the interface flux Schur complement"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string neumann_mode = "auto";
  auto* c1 = app.add_subcommand("case1", "pressure-driven infiltration");
  auto* c2 = app.add_subcommand("case2", "parallel flow over a porous medium (Neumann Darcy)");
  auto* cm = app.add_subcommand("manufactured", "manufactured-solution verification run");
  auto* cc = app.add_subcommand("custom", "configurable geometry/sources");
  auto* t1 = app.add_subcommand("table1", "mesh-robustness iteration counts");
  auto* t2 = app.add_subcommand("table2", "parameter-robustness grids");
  auto* t3 = app.add_subcommand("table3", "Neumann-Neumann comparison sweep");
  for (auto* cmd : {c1, c2, cm, cc, t1, t2, t3}) add_common(cmd, o);
  cc->add_option("--neumann", neumann_mode, "boundary mode for custom runs")
      ->check(CLI::IsMember({"auto", "none", "darcy", "both"}));
  bool include_128 = false;
  t1->add_flag("--with-128", include_128, "include the 1/h = 128 level");

  try {
    app.parse(argc, argv);

    if (c1->parsed()) return run_case(define_case1(o.resolution, params_of(o)), o);
    if (c2->parsed()) return run_case(define_case2(o.resolution, params_of(o)), o);
    if (cm->parsed()) return run_case(define_manufactured(o.resolution, params_of(o)), o);
    if (cc->parsed()) {
      const auto p = params_of(o);
      if (neumann_mode == "both") return run_case(define_coupled_neumann(o.resolution, p), o);
      if (neumann_mode == "darcy") return run_case(define_case2(o.resolution, p), o);
      return run_case(define_case1(o.resolution, p), o);
    }

    if (t1->parsed()) {
      std::vector<int> res = {8, 16, 32, 64};
      if (include_128) res.push_back(128);
      const auto rows = run_table1(res, o.tol);
      print_table1(rows, std::cout);
      if (!o.csv_path.empty()) {
        std::ofstream os(o.csv_path);
        write_table1_csv(rows, os);
      }
      return 0;
    }
    if (t2->parsed()) {
      for (int case_id : {1, 2}) {
        const auto t = run_table2(case_id, o.resolution == 8 ? 64 : o.resolution, o.tol);
        std::cout << "case " << case_id << ":\n";
        print_table2(t, std::cout);
        if (!o.csv_path.empty()) {
          std::ofstream os(o.csv_path + (case_id == 1 ? ".case1" : ".case2"));
          write_table2_csv(t, os);
        }
      }
      return 0;
    }
    if (t3->parsed()) {
      const auto t = run_table3({1.0, 0.1, 0.01}, {1.0, 0.1, 0.01}, 5, o.tol);
      print_table3(t, std::cout);
      if (!o.csv_path.empty()) {
        std::ofstream os(o.csv_path);
        write_table3_csv(t, os);
      }
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
