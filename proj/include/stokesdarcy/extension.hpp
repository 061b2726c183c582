#pragma once

#include "stokesdarcy/spaces.hpp"
#include "stokesdarcy/types.hpp"

namespace stokesdarcy {

/// Discrete extension operators Λ_h -> V_{i,h}, supported only on dofs of
/// elements adjacent to Γ.
///
/// R_S copies each interface value into the matching Stokes normal dof, so
/// n·(R_S φ) = φ on Γ exactly. R_D sets each interface RT0 edge dof to the
/// signed integral of φ over the segment, i.e. n·(R_D φ) is the L²-projection
/// of φ onto edgewise constants. Both satisfy the discrete trace property
/// (φ - n·R_i φ, n·v)_Γ = 0 for all discrete v.
struct ExtensionOps {
  SpMat R_S; ///< (#Stokes velocity dofs) x n_Λ
  SpMat R_D; ///< (#Darcy edges) x n_Λ
};

ExtensionOps build_extensions(const SpaceSet& spaces);

struct KernelCheck {
  double smallest_singular_value = 0.0;
  bool ok = false; ///< false when the stacked extension has a (near-)kernel
};

/// Smallest singular value of [R_S; R_D], which must stay away from zero.
KernelCheck check_extension_kernel(const ExtensionOps& ext);

} // namespace stokesdarcy
