#pragma once

#include <utility>

#include "stokesdarcy/params.hpp"
#include "stokesdarcy/spaces.hpp"
#include "stokesdarcy/types.hpp"

namespace stokesdarcy {

enum class Parallelism { serial, openmp };

/// All matrices and load vectors of the coupled variational problem.
///
/// The velocity operators are kept in parameter-independent pieces so that a
/// parameter sweep can rescale them without re-running quadrature:
///   A_S = mu * stokes_eps + beta * stokes_bjs,   A_D = (1/K) * darcy_mass_unit.
struct AssembledForms {
  PhysicalParams params;

  SpMat stokes_eps;      ///< (ε(u), ε(v))_{Ω_S} over all P2-vector dofs
  SpMat stokes_bjs;      ///< (τ·u, τ·v)_Γ
  SpMat darcy_mass_unit; ///< (u, v)_{Ω_D} over all RT0 dofs
  SpMat A_S, A_D;        ///< parameter-applied operators

  SpMat B_S, B_D; ///< -(∇·u, w): one row per cell

  SpMat M_gamma, A_gamma; ///< interface mass and stiffness on Λ_h

  Vec load_stokes_u; ///< (f_S, v) + (g_traction, v)_{∂_σ}
  Vec load_darcy_u;  ///< pressure datum term from g_p on ∂_p
  Vec load_p_stokes; ///< -(f_stokes_mass, w)
  Vec load_p_darcy;  ///< -(f_darcy, w)
  Vec lift_stokes;   ///< nodal interpolation of g_velocity on essential dofs

  Vec w_gamma; ///< (ψ_j, 1)_Γ — pairing of the Λ basis with constants

  Vec cell_measure_stokes, cell_measure_darcy;

  /// Copy with the velocity operators rescaled to new parameters. Only valid
  /// because loads and divergence forms are parameter-independent.
  AssembledForms with_params(const PhysicalParams& p) const;
};

/// Assembles every form of the coupled problem. The cell loops run in
/// parallel under Parallelism::openmp; both settings produce bit-identical
/// matrices (per-cell contributions are scattered in a fixed order).
AssembledForms assemble_forms(const SpaceSet& spaces, const PhysicalParams& params,
                              const ProblemData& data,
                              Parallelism par = Parallelism::openmp);

/// Interface mass and stiffness matrices on the endpoint-constrained basis.
std::pair<SpMat, SpMat> assemble_interface_matrices(const SpaceSet& spaces);

/// Gather the Interior entries of a full-space vector.
Vec restrict_interior(const DofMap& dofs, const Vec& full);
/// Scatter an interior vector back to full size (zeros elsewhere).
Vec embed_interior(const DofMap& dofs, const Vec& interior);

} // namespace stokesdarcy
