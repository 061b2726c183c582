#include "stokesdarcy/precond.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "stokesdarcy/extension.hpp"

namespace stokesdarcy {

SpectralDecomposition generalized_eig(const SpMat& A_gamma, const SpMat& M_gamma) {
  const Mat A(A_gamma), M(M_gamma);
  Eigen::LLT<Mat> mllt(M);
  if (mllt.info() != Eigen::Success)
    throw std::runtime_error("generalized_eig: interface mass matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A, M,
                                                   Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("generalized_eig: eigensolver failed");
  SpectralDecomposition dec;
  dec.V = es.eigenvectors();
  dec.lambda = es.eigenvalues();
  const double lmax = dec.lambda.maxCoeff();
  if (dec.lambda.minCoeff() <= 1e-14 * lmax)
    throw std::runtime_error(
        "generalized_eig: near-zero eigenvalue on the endpoint-constrained space "
        "(assembly error)");
  dec.MV = M * dec.V;
  return dec;
}

Mat h_matrix(const SpectralDecomposition& dec, double s) {
  return dec.MV * dec.lambda.array().pow(s).matrix().asDiagonal() * dec.MV.transpose();
}

Mat h_matrix_inverse(const SpectralDecomposition& dec, double s) {
  return dec.V * dec.lambda.array().pow(-s).matrix().asDiagonal() * dec.V.transpose();
}

SpectralPreconditioner build_spectral_precond(const SpectralDecomposition& dec,
                                              const PhysicalParams& params) {
  if (params.mu <= 0 || params.K <= 0)
    throw std::invalid_argument("build_spectral_precond: mu and K must be positive");
  const Vec diag = (params.mu * dec.lambda.array().sqrt() +
                    (1.0 / params.K) / dec.lambda.array().sqrt())
                       .inverse()
                       .matrix();
  SpectralPreconditioner pre;
  pre.params = params;
  pre.P = dec.V * diag.asDiagonal() * dec.V.transpose();
  return pre;
}

NNPreconditioner::NNPreconditioner(const SpaceSet& spaces, const AssembledForms& forms,
                                   CouplingMode mode)
    : spaces_(&spaces), forms_(&forms), mode_(mode) {
  unit_scaled_ = forms.params.beta() == 0.0;
  stokes_dofs_ = with_interface_free(spaces.stokes_u);
  darcy_dofs_ = with_interface_free(spaces.darcy_u);
  const bool stokes_neumann = mode == CouplingMode::coupled_neumann;
  const bool darcy_neumann = mode != CouplingMode::both_dirichlet;
  stokes_full_ = SaddleSystem::factorize(unit_scaled_ ? forms.stokes_eps : forms.A_S, forms.B_S,
                                         stokes_dofs_, forms.cell_measure_stokes, stokes_neumann);
  darcy_full_ = SaddleSystem::factorize(forms.darcy_mass_unit, forms.B_D, darcy_dofs_,
                                        forms.cell_measure_darcy, darcy_neumann);
  auto ext = build_extensions(spaces);
  R_S_ = std::move(ext.R_S);
  R_D_ = std::move(ext.R_D);
  auto mass = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
  mass->compute(forms.M_gamma);
  if (mass->info() != Eigen::Success)
    throw std::runtime_error("NNPreconditioner: interface mass matrix not SPD");
  mass_solver_ = std::move(mass);
  minv_w_ = mass_solver_->solve(forms.w_gamma);
  w_minv_w_ = forms.w_gamma.dot(minv_w_);
}

NNPreconditioner NNPreconditioner::rebind(const AssembledForms& f) const {
  if (!unit_scaled_ || f.params.beta() != 0.0)
    throw std::invalid_argument("NNPreconditioner::rebind requires alpha == 0");
  NNPreconditioner out = *this;
  out.forms_ = &f;
  return out;
}

Vec NNPreconditioner::apply(const Vec& residual) const {
  const bool neumann = mode_ != CouplingMode::both_dirichlet;
  Vec r = residual;
  if (neumann) {
    const double c = minv_w_.dot(r);
    r -= (c / w_minv_w_) * forms_->w_gamma;
  }

  // Σ_S^{-1} r: the residual acts as a normal stress datum <r, n·v>_Γ, which
  // in the P2 trace basis is exactly the load R_S r.
  const double scale_s = unit_scaled_ ? forms_->params.mu : 1.0;
  const Vec load_s = R_S_ * r;
  const auto sol_s = stokes_full_.solve(scale_s, restrict_interior(stokes_dofs_, load_s),
                                        Vec::Zero(forms_->B_S.rows()));
  const Vec phi_s = R_S_.transpose() * embed_interior(stokes_dofs_, sol_s.u_interior);

  // Σ_D^{-1} r: the Riesz representative ρ = M_Γ^{-1} r acts as a pressure
  // datum; the resulting flux is projected back into Λ_h through M_Γ.
  const Vec rho = mass_solver_->solve(r);
  Vec load_d = Vec::Zero(spaces_->darcy_u.n_dofs);
  const auto& ifc = spaces_->iface;
  for (const auto& seg : ifc.segments) {
    const int lam[3] = {seg.v_left, seg.mid, seg.v_right};
    const double wseg[3] = {seg.h / 6.0, 2.0 * seg.h / 3.0, seg.h / 6.0};
    double integral = 0; // ∫_seg ρ ds
    for (int i = 0; i < 3; ++i)
      if (lam[i] >= 0) integral += wseg[i] * rho[lam[i]];
    load_d[seg.darcy_edge] = seg.darcy_sign * integral / seg.h;
  }
  const auto sol_d = darcy_full_.solve(1.0 / forms_->params.K,
                                       restrict_interior(darcy_dofs_, load_d),
                                       Vec::Zero(forms_->B_D.rows()));
  const Vec u_d = embed_interior(darcy_dofs_, sol_d.u_interior);
  Vec q = Vec::Zero(ifc.n_lambda);
  for (const auto& seg : ifc.segments) {
    const double trace = seg.darcy_sign * u_d[seg.darcy_edge] / seg.h; // n·u on the segment
    const int lam[3] = {seg.v_left, seg.mid, seg.v_right};
    const double wseg[3] = {seg.h / 6.0, 2.0 * seg.h / 3.0, seg.h / 6.0};
    for (int i = 0; i < 3; ++i)
      if (lam[i] >= 0) q[lam[i]] += wseg[i] * trace;
  }
  const Vec phi_d = mass_solver_->solve(q);

  Vec out = phi_s + phi_d;
  if (neumann) {
    const double mean = forms_->w_gamma.dot(out);
    out -= (mean / w_minv_w_) * minv_w_;
  }
  return out;
}

} // namespace stokesdarcy
