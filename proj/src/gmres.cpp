#include "stokesdarcy/gmres.hpp"

#include <cmath>
#include <stdexcept>

namespace stokesdarcy {

KrylovReport gmres(const std::function<Vec(const Vec&)>& apply_A,
                   const std::function<Vec(const Vec&)>& apply_P, const Vec& rhs,
                   const Vec& x0, const KrylovConfig& cfg) {
  if (cfg.tol <= 0 || cfg.max_iter < 1)
    throw std::invalid_argument("gmres: tol must be positive and max_iter >= 1");
  const int n = static_cast<int>(rhs.size());
  KrylovReport rep;
  rep.x = x0;

  const Vec pb = apply_P(rhs);
  const double bnorm = pb.norm();
  Vec r0 = (x0.norm() == 0.0) ? pb : Vec(apply_P(rhs - apply_A(x0)));
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.history = {0.0};
    return rep;
  }

  const double beta = r0.norm();
  if (cfg.record_history) rep.history.push_back(beta / bnorm);
  if (beta / bnorm <= cfg.tol) {
    rep.converged = true;
    return rep;
  }

  const int m = std::min(cfg.max_iter, n);
  Mat V(n, m + 1);
  Mat H = Mat::Zero(m + 1, m);
  Vec cs = Vec::Zero(m), sn = Vec::Zero(m);
  Vec g = Vec::Zero(m + 1);
  V.col(0) = r0 / beta;
  g[0] = beta;

  int k = 0;
  for (int j = 0; j < m; ++j) {
    Vec w = apply_P(apply_A(V.col(j)));
    ++rep.iterations;
    for (int i = 0; i <= j; ++i) { // modified Gram-Schmidt
      H(i, j) = V.col(i).dot(w);
      w -= H(i, j) * V.col(i);
    }
    const double hnorm = w.norm();

    for (int i = 0; i < j; ++i) { // apply stored Givens rotations
      const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
      H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
      H(i, j) = t;
    }
    const double denom = std::hypot(H(j, j), hnorm);
    cs[j] = denom > 0 ? H(j, j) / denom : 1.0;
    sn[j] = denom > 0 ? hnorm / denom : 0.0;
    H(j, j) = denom;
    g[j + 1] = -sn[j] * g[j];
    g[j] *= cs[j];

    const double res = std::abs(g[j + 1]);
    if (cfg.record_history) rep.history.push_back(res / bnorm);
    k = j + 1;
    if (res / bnorm <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (hnorm <= 1e-14 * beta) { // happy breakdown: Krylov space is invariant
      rep.converged = true;
      break;
    }
    V.col(j + 1) = w / hnorm;
  }

  // Solve the triangular system H(0:k,0:k) y = g and update x.
  Vec y = Vec::Zero(k);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int l = i + 1; l < k; ++l) s -= H(i, l) * y[l];
    y[i] = s / H(i, i);
  }
  rep.x = x0 + V.leftCols(k) * y;
  return rep;
}

} // namespace stokesdarcy
