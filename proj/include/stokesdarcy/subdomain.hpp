#pragma once

#include <atomic>
#include <memory>

#include "stokesdarcy/spaces.hpp"
#include "stokesdarcy/types.hpp"

namespace stokesdarcy {

/// Direct factorization of one subdomain saddle-point system
///
///   [ c*A0   B0^T ] [u]   [rhs_u]
///   [ B0      0   ] [p] = [rhs_p]
///
/// where A0, B0 are the restrictions of the assembled forms to the Interior
/// velocity dofs. In Neumann mode a pressure mean constraint is bordered on
/// (column m/|Ω| against a scalar multiplier, row m^T/|Ω| against p), keeping
/// the system symmetric. The factorization is computed once at unit velocity
/// scale; solve() serves any positive scale c by rescaling rhs and pressure,
/// so one factorization covers a whole (mu, K) sweep when alpha = 0.
class SaddleSystem {
 public:
  /// A: full velocity operator (the part multiplied by the runtime scale),
  /// B: -(div) form with one row per cell, dofs: velocity classification.
  /// Throws when the factorization fails or the factored matrix turns out
  /// singular (e.g. a pure-Neumann subdomain without neumann_mode).
  static SaddleSystem factorize(const SpMat& A, const SpMat& B, const DofMap& dofs,
                                const Vec& cell_measures, bool neumann_mode);

  struct Solution {
    Vec u_interior;
    Vec p;
    double multiplier = 0.0; ///< mean-constraint multiplier r (0 when unused)
  };

  /// Solves with velocity scale c. rhs_u is indexed by Interior dofs, rhs_p by
  /// cells. Verifies the block residual to 1e-10 relative and throws on
  /// failure. Reentrant: concurrent solves share the read-only factors.
  Solution solve(double velocity_scale, const Vec& rhs_u, const Vec& rhs_p) const;

  int n_interior() const { return n_u_; }
  int n_pressure() const { return n_p_; }
  bool neumann_mode() const { return neumann_; }
  long solve_count() const;

 private:
  struct Factor; // hides Eigen::SparseLU
  std::shared_ptr<Factor> factor_;
  int n_u_ = 0, n_p_ = 0;
  bool neumann_ = false;
  double measure_ = 0.0; // |Ω_i|, normalizes the constraint border
};

} // namespace stokesdarcy
