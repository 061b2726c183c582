#include "stokesdarcy/extension.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

namespace stokesdarcy {

ExtensionOps build_extensions(const SpaceSet& spaces) {
  const auto& ifc = spaces.iface;
  ExtensionOps ext;

  std::vector<Triplet> ts;
  const int nc = ifc.normal_comp;
  for (const auto& seg : ifc.segments) {
    const int nodes[3] = {seg.stokes_node_vl, seg.stokes_node_mid, seg.stokes_node_vr};
    const int lam[3] = {seg.v_left, seg.mid, seg.v_right};
    for (int i = 0; i < 3; ++i) {
      if (lam[i] < 0) continue;
      // u_n·sign = φ at the node; vertices are shared by two segments, emit once.
      if (i == 0) continue;
      ts.emplace_back(2 * nodes[i] + nc, lam[i], ifc.normal_sign);
    }
  }
  ext.R_S.resize(spaces.stokes_u.n_dofs, ifc.n_lambda);
  ext.R_S.setFromTriplets(ts.begin(), ts.end());

  std::vector<Triplet> td;
  for (const auto& seg : ifc.segments) {
    const int lam[3] = {seg.v_left, seg.mid, seg.v_right};
    const double integral[3] = {seg.h / 6.0, 2.0 * seg.h / 3.0, seg.h / 6.0};
    for (int i = 0; i < 3; ++i)
      if (lam[i] >= 0)
        td.emplace_back(seg.darcy_edge, lam[i], seg.darcy_sign * integral[i]);
  }
  ext.R_D.resize(spaces.darcy_u.n_dofs, ifc.n_lambda);
  ext.R_D.setFromTriplets(td.begin(), td.end());
  return ext;
}

KernelCheck check_extension_kernel(const ExtensionOps& ext) {
  const Mat gram = Mat(ext.R_S.transpose() * ext.R_S) + Mat(ext.R_D.transpose() * ext.R_D);
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  const double lmin = es.eigenvalues().minCoeff();
  KernelCheck out;
  out.smallest_singular_value = lmin > 0 ? std::sqrt(lmin) : 0.0;
  out.ok = out.smallest_singular_value > 1e-12;
  return out;
}

} // namespace stokesdarcy
