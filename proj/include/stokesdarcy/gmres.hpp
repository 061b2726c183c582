#pragma once

#include <functional>
#include <vector>

#include "stokesdarcy/types.hpp"

namespace stokesdarcy {

struct KrylovConfig {
  double tol = 1e-6; ///< relative preconditioned-residual tolerance
  int max_iter = 200;
  bool record_history = true;
};

struct KrylovReport {
  Vec x;
  int iterations = 0; ///< number of operator applications after setup
  std::vector<double> history; ///< relative preconditioned residuals, h[0] = initial
  bool converged = false;
};

/// Left-preconditioned GMRes with full (unrestarted) Arnoldi and modified
/// Gram-Schmidt. Stops when ||P(b - Ax)|| / ||P b|| <= tol; an Arnoldi
/// breakdown is treated as exact convergence. Never throws on stagnation:
/// exceeding max_iter returns a non-converged report.
KrylovReport gmres(const std::function<Vec(const Vec&)>& apply_A,
                   const std::function<Vec(const Vec&)>& apply_P, const Vec& rhs,
                   const Vec& x0, const KrylovConfig& cfg);

} // namespace stokesdarcy
