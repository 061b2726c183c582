#pragma once

#include <memory>

#include "stokesdarcy/assemble.hpp"
#include "stokesdarcy/interface_op.hpp"
#include "stokesdarcy/params.hpp"
#include "stokesdarcy/types.hpp"

namespace stokesdarcy {

/// Generalized eigendecomposition A v_i = λ_i M v_i with V^T M V = I.
struct SpectralDecomposition {
  Mat V;      ///< M-orthonormal eigenvectors as columns
  Vec lambda; ///< ascending eigenvalues, all positive
  Mat MV;     ///< cached M*V
};

/// Dense generalized eigensolve of the interface pair (A_Γ, M_Γ). Throws on
/// an indefinite mass matrix or on eigenvalues below 1e-14 * λ_max, either of
/// which indicates an assembly bug.
SpectralDecomposition generalized_eig(const SpMat& A_gamma, const SpMat& M_gamma);

/// H(s) = (MV) Λ^s (MV)^T, norm-equivalent to H^s(Γ) on Λ_h.
Mat h_matrix(const SpectralDecomposition& dec, double s);
/// H(s)^{-1} = V Λ^{-s} V^T.
Mat h_matrix_inverse(const SpectralDecomposition& dec, double s);

/// The fractional-norm interface preconditioner
///   P = V (mu Λ^{1/2} + K^{-1} Λ^{-1/2})^{-1} V^T = (mu H(1/2) + K^{-1} H(-1/2))^{-1}.
struct SpectralPreconditioner {
  Mat P;
  PhysicalParams params;
  Vec apply(const Vec& r) const { return P * r; }
};

SpectralPreconditioner build_spectral_precond(const SpectralDecomposition& dec,
                                              const PhysicalParams& params);

/// Neumann-Neumann comparison preconditioner P_NN = Σ_{S,h}^{-1} + Σ_{D,h}^{-1}.
///
/// Each term solves the subdomain saddle system over the full velocity space
/// (interface dofs unknown) with the residual imposed as a normal stress /
/// pressure datum on Γ, then reads the normal trace back as a Λ_h vector
/// (L²-projection via M_Γ). Costs two subdomain solves per application.
class NNPreconditioner {
 public:
  NNPreconditioner(const SpaceSet& spaces, const AssembledForms& forms, CouplingMode mode);

  /// Copy sharing the factorizations but reading parameters from `f`
  /// (alpha = 0 only), mirroring InterfaceOperator::rebind.
  NNPreconditioner rebind(const AssembledForms& f) const;

  Vec apply(const Vec& residual) const;
  long solve_count() const { return stokes_full_.solve_count() + darcy_full_.solve_count(); }

 private:
  const SpaceSet* spaces_;
  const AssembledForms* forms_;
  CouplingMode mode_;
  DofMap stokes_dofs_, darcy_dofs_; ///< interface dofs freed
  SaddleSystem stokes_full_, darcy_full_;
  bool unit_scaled_ = false;
  std::shared_ptr<const Eigen::SimplicialLDLT<SpMat>> mass_solver_;
  SpMat R_S_, R_D_;
  Vec minv_w_;
  double w_minv_w_ = 0;
};

} // namespace stokesdarcy
