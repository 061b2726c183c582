#include "stokesdarcy/subdomain.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokesdarcy {

struct SaddleSystem::Factor {
  SpMat S; ///< unit-scale bordered block matrix, kept for residual checks
  Eigen::SparseLU<SpMat> lu;
  std::atomic<long> solves{0};
};

long SaddleSystem::solve_count() const { return factor_ ? factor_->solves.load() : 0; }

SaddleSystem SaddleSystem::factorize(const SpMat& A, const SpMat& B, const DofMap& dofs,
                                     const Vec& cell_measures, bool neumann_mode) {
  SaddleSystem sys;
  sys.n_u_ = dofs.n_interior();
  sys.n_p_ = static_cast<int>(B.rows());
  sys.neumann_ = neumann_mode;
  sys.measure_ = cell_measures.sum();
  const int n = sys.n_u_ + sys.n_p_ + (neumann_mode ? 1 : 0);

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(A.nonZeros() + 2 * B.nonZeros()) + sys.n_p_ * 2);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int r = dofs.interior_index[it.row()];
      const int c = dofs.interior_index[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  for (int k = 0; k < B.outerSize(); ++k)
    for (SpMat::InnerIterator it(B, k); it; ++it) {
      const int c = dofs.interior_index[it.col()];
      if (c < 0) continue;
      trip.emplace_back(sys.n_u_ + static_cast<int>(it.row()), c, it.value());
      trip.emplace_back(c, sys.n_u_ + static_cast<int>(it.row()), it.value());
    }
  if (neumann_mode) {
    for (int c = 0; c < sys.n_p_; ++c) {
      const double m = cell_measures[c] / sys.measure_;
      trip.emplace_back(sys.n_u_ + sys.n_p_, sys.n_u_ + c, m);
      trip.emplace_back(sys.n_u_ + c, sys.n_u_ + sys.n_p_, m);
    }
  }

  auto factor = std::make_shared<Factor>();
  factor->S.resize(n, n);
  factor->S.setFromTriplets(trip.begin(), trip.end());
  factor->S.makeCompressed();
  factor->lu.compute(factor->S);
  if (factor->lu.info() != Eigen::Success)
    throw std::runtime_error(
        "SaddleSystem: factorization failed" +
        std::string(neumann_mode ? "" :
                    " (pure-Neumann subdomain requires the pressure mean constraint)"));

  // A zero pivot can slip through on structurally singular systems; probe.
  const Vec probe = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  const Vec x = factor->lu.solve(probe);
  if ((factor->S * x - probe).norm() > 1e-8)
    throw std::runtime_error(
        "SaddleSystem: factored matrix is singular" +
        std::string(neumann_mode ? "" :
                    " (pure-Neumann subdomain requires the pressure mean constraint)"));

  sys.factor_ = std::move(factor);
  return sys;
}

SaddleSystem::Solution SaddleSystem::solve(double velocity_scale, const Vec& rhs_u,
                                           const Vec& rhs_p) const {
  if (rhs_u.size() != n_u_ || rhs_p.size() != n_p_)
    throw std::invalid_argument("SaddleSystem::solve: rhs dimensions mismatch");
  const double c = velocity_scale;
  const int n = n_u_ + n_p_ + (neumann_ ? 1 : 0);
  Vec b = Vec::Zero(n);
  b.head(n_u_) = rhs_u / c;
  b.segment(n_u_, n_p_) = rhs_p;

  const Vec x = factor_->lu.solve(b);
  factor_->solves.fetch_add(1, std::memory_order_relaxed);

  // Residual of the velocity-scaled system: the first block row of the unit
  // system is 1/c times the true one.
  Vec res = factor_->S * x - b;
  res.head(n_u_) *= c;
  const double bnorm = std::hypot(rhs_u.norm(), rhs_p.norm());
  const double rel = res.norm() / (bnorm > 0 ? bnorm : 1.0);
  if (rel > 1e-10)
    throw std::runtime_error("SaddleSystem::solve: residual check failed, relative residual = " +
                             std::to_string(rel));

  Solution sol;
  sol.u_interior = x.head(n_u_);
  sol.p = c * x.segment(n_u_, n_p_);
  if (neumann_) sol.multiplier = x[n - 1] / measure_;
  return sol;
}

} // namespace stokesdarcy
