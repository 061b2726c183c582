#include "support/monolithic.hpp"

#include <Eigen/SparseLU>
#include <stdexcept>
#include <vector>

namespace stokesdarcy::testing {

MonolithicSolution solve_monolithic(const SpaceSet& spaces, const AssembledForms& forms,
                                    const ExtensionOps& ext, CouplingMode mode) {
  const DofMap& ds = spaces.stokes_u;
  const DofMap& dd = spaces.darcy_u;
  const int n_us = ds.n_interior();
  const int n_ps = spaces.n_p_stokes;
  const int n_ud = dd.n_interior();
  const int n_pd = spaces.n_p_darcy;
  const int n_l = spaces.n_lambda();
  const int o_us = 0, o_ps = n_us, o_ud = o_ps + n_ps, o_pd = o_ud + n_ud, o_phi = o_pd + n_pd;
  const bool coupled = mode == CouplingMode::coupled_neumann;
  const int n = o_phi + n_l + (coupled ? 1 : 0);

  std::vector<Triplet> trip;
  auto add = [&](const SpMat& M, const std::vector<int>* rowsel, int ro,
                 const std::vector<int>* colsel, int co, bool also_transposed) {
    for (int k = 0; k < M.outerSize(); ++k)
      for (SpMat::InnerIterator it(M, k); it; ++it) {
        const int r = rowsel ? (*rowsel)[it.row()] : static_cast<int>(it.row());
        const int c = colsel ? (*colsel)[it.col()] : static_cast<int>(it.col());
        if (r < 0 || c < 0) continue;
        trip.emplace_back(ro + r, co + c, it.value());
        if (also_transposed) trip.emplace_back(co + c, ro + r, it.value());
      }
  };

  // Stokes blocks.
  add(forms.A_S, &ds.interior_index, o_us, &ds.interior_index, o_us, false);
  add(forms.B_S, nullptr, o_ps, &ds.interior_index, o_us, true);
  const SpMat ASRS = forms.A_S * ext.R_S;
  const SpMat BSRS = forms.B_S * ext.R_S;
  add(ASRS, &ds.interior_index, o_us, nullptr, o_phi, true);
  add(BSRS, nullptr, o_ps, nullptr, o_phi, true);
  // Darcy blocks.
  add(forms.A_D, &dd.interior_index, o_ud, &dd.interior_index, o_ud, false);
  add(forms.B_D, nullptr, o_pd, &dd.interior_index, o_ud, true);
  const SpMat ADRD = forms.A_D * ext.R_D;
  const SpMat BDRD = forms.B_D * ext.R_D;
  add(ADRD, &dd.interior_index, o_ud, nullptr, o_phi, true);
  add(BDRD, nullptr, o_pd, nullptr, o_phi, true);
  // Interface diagonal block.
  const SpMat SLL = SpMat(ext.R_S.transpose() * ASRS) + SpMat(ext.R_D.transpose() * ADRD);
  add(SLL, nullptr, o_phi, nullptr, o_phi, false);
  if (coupled) {
    const double area = forms.cell_measure_stokes.sum() + forms.cell_measure_darcy.sum();
    for (int c = 0; c < n_ps; ++c) {
      trip.emplace_back(n - 1, o_ps + c, forms.cell_measure_stokes[c] / area);
      trip.emplace_back(o_ps + c, n - 1, forms.cell_measure_stokes[c] / area);
    }
    for (int c = 0; c < n_pd; ++c) {
      trip.emplace_back(n - 1, o_pd + c, forms.cell_measure_darcy[c] / area);
      trip.emplace_back(o_pd + c, n - 1, forms.cell_measure_darcy[c] / area);
    }
  }

  SpMat M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();

  const Vec load_s_eff = forms.load_stokes_u - forms.A_S * forms.lift_stokes;
  const Vec load_ps_eff = forms.load_p_stokes - forms.B_S * forms.lift_stokes;
  Vec rhs = Vec::Zero(n);
  rhs.segment(o_us, n_us) = restrict_interior(ds, load_s_eff);
  rhs.segment(o_ps, n_ps) = load_ps_eff;
  rhs.segment(o_ud, n_ud) = restrict_interior(dd, forms.load_darcy_u);
  rhs.segment(o_pd, n_pd) = forms.load_p_darcy;
  rhs.segment(o_phi, n_l) =
      ext.R_S.transpose() * load_s_eff + ext.R_D.transpose() * forms.load_darcy_u;

  Eigen::SparseLU<SpMat> lu(M);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_monolithic: factorization failed");
  const Vec x = lu.solve(rhs);
  if ((M * x - rhs).norm() > 1e-9 * std::max(1.0, rhs.norm()))
    throw std::runtime_error("solve_monolithic: residual check failed");

  MonolithicSolution sol;
  sol.phi = x.segment(o_phi, n_l);
  sol.u_S = embed_interior(ds, x.segment(o_us, n_us)) + ext.R_S * sol.phi + forms.lift_stokes;
  sol.p_S = x.segment(o_ps, n_ps);
  sol.u_D = embed_interior(dd, x.segment(o_ud, n_ud)) + ext.R_D * sol.phi;
  sol.p_D = x.segment(o_pd, n_pd);
  return sol;
}

void remove_global_pressure_mean(const AssembledForms& forms, Vec& p_S, Vec& p_D) {
  const double area = forms.cell_measure_stokes.sum() + forms.cell_measure_darcy.sum();
  const double mean = (forms.cell_measure_stokes.dot(p_S) + forms.cell_measure_darcy.dot(p_D)) /
                      area;
  p_S.array() -= mean;
  p_D.array() -= mean;
}

} // namespace stokesdarcy::testing
