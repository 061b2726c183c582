#pragma once

#include <memory>

#include "stokesdarcy/assemble.hpp"
#include "stokesdarcy/extension.hpp"
#include "stokesdarcy/spaces.hpp"
#include "stokesdarcy/subdomain.hpp"
#include "stokesdarcy/types.hpp"

namespace stokesdarcy {

enum class CouplingMode {
  both_dirichlet,      ///< |∂_σ Ω_S| > 0 and |∂_p Ω_D| > 0
  single_neumann_darcy, ///< |∂_p Ω_D| = 0, Darcy pressure defined up to a constant
  coupled_neumann       ///< flux data on the whole boundary
};

/// Derives the coupling mode from the boundary tags. A Stokes-only Neumann
/// configuration (no stress boundary but a pressure boundary) is rejected.
CouplingMode detect_mode(const TriMesh& stokes, const TriMesh& darcy);

/// Minimizer of the full H¹(Γ) norm subject to (ζ, 1)_Γ = 1, via the
/// bordered system [A+M, w; w^T, 0].
InterfaceVector build_zeta(const AssembledForms& forms);

/// Compensating flux φ* = ζ f_p(1_{Ω_D}) for the Neumann modes; returns zero
/// when the mode needs none. In coupled mode the source compatibility
/// f_p(1) = 0 is checked to 1e-10 (data error otherwise).
InterfaceVector build_phi_star(const InterfaceVector& zeta, const AssembledForms& forms,
                               CouplingMode mode);

/// Coefficient vectors of one reconstructed coupled solution.
struct ReconstructedSolution {
  Vec u_S, p_S; ///< P2-vector / P0 coefficients (lift included)
  Vec u_D, p_D; ///< RT0 / P0 coefficients
  InterfaceVector phi; ///< total interface flux φ0 + φ*
  double c_D = 0.0;    ///< recovered pressure shift (Neumann modes)
  double multiplier_stokes = 0.0, multiplier_darcy = 0.0;
};

struct ConservationReport {
  double max_stokes_residual = 0, max_darcy_residual = 0, max_interface_jump = 0;
  int worst_stokes_cell = -1, worst_darcy_cell = -1, worst_segment = -1;
  double scale = 1.0;
  double worst() const;
  bool pass(double tol = 1e-11) const { return worst() <= tol * scale; }
};

/// Matrix-free Steklov-Poincaré operator Σ_h and its right-hand side χ_h,
/// acting on interface flux coefficients. Holds the factorized subdomain
/// systems; each operator application costs exactly two subdomain solves.
/// Immutable after construction and safe for concurrent applications.
class InterfaceOperator {
 public:
  /// Factorizes both subdomain systems. When alpha = 0 the factorization is
  /// parameter-independent (unit scale) and can be reused via rebind().
  InterfaceOperator(const SpaceSet& spaces, const AssembledForms& forms,
                    const ExtensionOps& ext, CouplingMode mode);

  /// Copy sharing the factorizations but using the (rescaled) forms `f`.
  /// Requires alpha = 0 and identical meshes/data.
  InterfaceOperator rebind(const AssembledForms& f) const;

  int n_lambda() const { return spaces_->n_lambda(); }
  CouplingMode mode() const { return mode_; }
  bool neumann() const { return mode_ != CouplingMode::both_dirichlet; }

  /// Σφ as dual coefficients. In the Neumann modes the input is restricted
  /// to Λ_0 and the output re-projected onto the complement of constants.
  InterfaceVector apply_sigma(const InterfaceVector& phi) const;
  /// Σφ without the Λ_0 projections (used by the pressure-mean recovery).
  InterfaceVector apply_sigma_raw(const InterfaceVector& phi) const;
  /// Contribution of one subdomain alone (Σ_S or Σ_D), unprojected.
  InterfaceVector apply_sigma_one(const InterfaceVector& phi, bool stokes) const;

  /// χ (unprojected); costs two subdomain solves.
  InterfaceVector assemble_chi() const;
  /// Right-hand side handed to the Krylov solver (Λ_0-projected in Neumann modes).
  InterfaceVector solver_rhs(const InterfaceVector& chi_raw) const;

  /// c_D = <χ - Σφ0, ζ>; costs two subdomain solves.
  double recover_pressure_shift(const InterfaceVector& phi0, const InterfaceVector& chi_raw) const;

  /// Solves both subdomains with φ0 as interface data and applies the
  /// Neumann pressure-mean recovery; one solve per subdomain.
  ReconstructedSolution reconstruct(const InterfaceVector& phi0) const;

  /// Λ_0 projections (identity outside the Neumann modes).
  InterfaceVector project_primal(InterfaceVector v) const;
  InterfaceVector project_dual(InterfaceVector v) const;

  /// Dense Σ by basis sweep; test path, gated to n_Λ <= 256.
  Mat dense_sigma() const;

  const InterfaceVector& zeta() const { return zeta_; }
  const InterfaceVector& phi_star() const { return phi_star_; }
  long solve_count() const { return stokes_.solve_count() + darcy_.solve_count(); }
  const SaddleSystem& stokes_system() const { return stokes_; }
  const SaddleSystem& darcy_system() const { return darcy_; }

 private:
  const SpaceSet* spaces_;
  const AssembledForms* forms_;
  const ExtensionOps* ext_;
  CouplingMode mode_;
  SaddleSystem stokes_, darcy_;
  bool unit_scaled_ = false;
  std::shared_ptr<const Eigen::SimplicialLDLT<SpMat>> mass_solver_;
  Vec minv_w_;
  double w_minv_w_ = 0;
  InterfaceVector zeta_, phi_star_;

  double scale_S() const;
  double scale_D() const;
  InterfaceOperator() = default;
};

/// Per-cell mass residuals and per-segment interface flux jumps of a
/// reconstructed solution, measured against the assembled sources.
ConservationReport check_conservation(const ReconstructedSolution& sol,
                                      const SpaceSet& spaces, const AssembledForms& forms);

/// ∫_T ∇·u per Darcy cell, evaluated from the RT0 edge dofs and the mesh
/// geometry alone (no assembled matrix involved).
Vec darcy_cell_div(const TriMesh& mesh, const Vec& edge_dofs);

} // namespace stokesdarcy
