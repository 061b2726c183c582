#include "stokesdarcy/interface_op.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace stokesdarcy {

namespace {

bool has_tag(const TriMesh& m, BoundaryTag tag) {
  for (const auto& t : m.edge_tag)
    if (t && *t == tag) return true;
  return false;
}

} // namespace

CouplingMode detect_mode(const TriMesh& stokes, const TriMesh& darcy) {
  const bool has_stress = has_tag(stokes, BoundaryTag::Stress);
  const bool has_pressure = has_tag(darcy, BoundaryTag::Pressure);
  if (has_pressure && has_stress) return CouplingMode::both_dirichlet;
  if (!has_pressure && has_stress) return CouplingMode::single_neumann_darcy;
  if (!has_pressure && !has_stress) return CouplingMode::coupled_neumann;
  throw std::invalid_argument(
      "detect_mode: pure-Neumann Stokes with a Darcy pressure boundary is not supported");
}

InterfaceVector build_zeta(const AssembledForms& forms) {
  const int n = static_cast<int>(forms.w_gamma.size());
  Mat bordered = Mat::Zero(n + 1, n + 1);
  bordered.topLeftCorner(n, n) = Mat(forms.A_gamma) + Mat(forms.M_gamma);
  bordered.block(0, n, n, 1) = forms.w_gamma;
  bordered.block(n, 0, 1, n) = forms.w_gamma.transpose();
  Vec rhs = Vec::Zero(n + 1);
  rhs[n] = 1.0;
  const Vec sol = bordered.partialPivLu().solve(rhs);
  return sol.head(n);
}

InterfaceVector build_phi_star(const InterfaceVector& zeta, const AssembledForms& forms,
                               CouplingMode mode) {
  if (mode == CouplingMode::both_dirichlet)
    return InterfaceVector::Zero(zeta.size());
  const double fp_darcy = forms.load_p_darcy.sum(); // f_p(1_{Ω_D})
  if (mode == CouplingMode::coupled_neumann) {
    const double fp_stokes =
        forms.load_p_stokes.sum() - (forms.B_S * forms.lift_stokes).sum();
    const double scale = std::max({1.0, std::abs(fp_darcy), std::abs(fp_stokes)});
    if (std::abs(fp_darcy + fp_stokes) > 1e-10 * scale)
      throw std::invalid_argument(
          "build_phi_star: incompatible sources in coupled-Neumann mode, f_p(1) != 0");
  }
  return zeta * fp_darcy;
}

InterfaceOperator::InterfaceOperator(const SpaceSet& spaces, const AssembledForms& forms,
                                     const ExtensionOps& ext, CouplingMode mode)
    : spaces_(&spaces), forms_(&forms), ext_(&ext), mode_(mode) {
  unit_scaled_ = forms.params.beta() == 0.0;
  const bool stokes_neumann = mode == CouplingMode::coupled_neumann;
  const bool darcy_neumann = mode != CouplingMode::both_dirichlet;
  stokes_ = SaddleSystem::factorize(unit_scaled_ ? forms.stokes_eps : forms.A_S, forms.B_S,
                                    spaces.stokes_u, forms.cell_measure_stokes, stokes_neumann);
  darcy_ = SaddleSystem::factorize(forms.darcy_mass_unit, forms.B_D, spaces.darcy_u,
                                   forms.cell_measure_darcy, darcy_neumann);

  auto mass = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
  mass->compute(forms.M_gamma);
  if (mass->info() != Eigen::Success)
    throw std::runtime_error("InterfaceOperator: interface mass matrix not SPD");
  mass_solver_ = std::move(mass);
  minv_w_ = mass_solver_->solve(forms.w_gamma);
  w_minv_w_ = forms.w_gamma.dot(minv_w_);

  if (neumann()) {
    zeta_ = build_zeta(forms);
    phi_star_ = build_phi_star(zeta_, forms, mode);
  } else {
    zeta_ = InterfaceVector::Zero(n_lambda());
    phi_star_ = InterfaceVector::Zero(n_lambda());
  }
}

InterfaceOperator InterfaceOperator::rebind(const AssembledForms& f) const {
  if (!unit_scaled_ || f.params.beta() != 0.0)
    throw std::invalid_argument("InterfaceOperator::rebind requires alpha == 0");
  InterfaceOperator out = *this; // factorizations shared
  out.forms_ = &f;
  return out;
}

double InterfaceOperator::scale_S() const {
  return unit_scaled_ ? forms_->params.mu : 1.0;
}
double InterfaceOperator::scale_D() const { return 1.0 / forms_->params.K; }

InterfaceVector InterfaceOperator::project_primal(InterfaceVector v) const {
  if (!neumann()) return v;
  const double mean = forms_->w_gamma.dot(v);
  return v - (mean / w_minv_w_) * minv_w_;
}

InterfaceVector InterfaceOperator::project_dual(InterfaceVector v) const {
  if (!neumann()) return v;
  const double c = minv_w_.dot(v);
  return v - (c / w_minv_w_) * forms_->w_gamma;
}

InterfaceVector InterfaceOperator::apply_sigma_raw(const InterfaceVector& phi) const {
  const Vec xS = ext_->R_S * phi;
  const Vec xD = ext_->R_D * phi;
  const Vec aS = forms_->A_S * xS;
  const Vec aD = forms_->A_D * xD;

  SaddleSystem::Solution solS, solD;
#pragma omp parallel sections
  {
#pragma omp section
    solS = stokes_.solve(scale_S(), -restrict_interior(spaces_->stokes_u, aS),
                         -(forms_->B_S * xS));
#pragma omp section
    solD = darcy_.solve(scale_D(), -restrict_interior(spaces_->darcy_u, aD),
                        -(forms_->B_D * xD));
  }

  const Vec yS = aS + forms_->A_S * embed_interior(spaces_->stokes_u, solS.u_interior) +
                 forms_->B_S.transpose() * solS.p;
  const Vec yD = aD + forms_->A_D * embed_interior(spaces_->darcy_u, solD.u_interior) +
                 forms_->B_D.transpose() * solD.p;
  return ext_->R_S.transpose() * yS + ext_->R_D.transpose() * yD;
}

InterfaceVector InterfaceOperator::apply_sigma(const InterfaceVector& phi) const {
  if (!neumann()) return apply_sigma_raw(phi);
  return project_dual(apply_sigma_raw(project_primal(phi)));
}

InterfaceVector InterfaceOperator::apply_sigma_one(const InterfaceVector& phi, bool stokes) const {
  const SpMat& R = stokes ? ext_->R_S : ext_->R_D;
  const SpMat& A = stokes ? forms_->A_S : forms_->A_D;
  const SpMat& B = stokes ? forms_->B_S : forms_->B_D;
  const DofMap& dofs = stokes ? spaces_->stokes_u : spaces_->darcy_u;
  const SaddleSystem& sys = stokes ? stokes_ : darcy_;
  const Vec x = R * phi;
  const Vec a = A * x;
  const auto sol = sys.solve(stokes ? scale_S() : scale_D(), -restrict_interior(dofs, a),
                             -(B * x));
  const Vec y = a + A * embed_interior(dofs, sol.u_interior) + B.transpose() * sol.p;
  return R.transpose() * y;
}

InterfaceVector InterfaceOperator::assemble_chi() const {
  // Star fields carry all the data: the essential lift and the compensating
  // flux φ* in the Neumann modes.
  const Vec xS = ext_->R_S * phi_star_ + forms_->lift_stokes;
  const Vec xD = ext_->R_D * phi_star_;
  const Vec aS = forms_->load_stokes_u - forms_->A_S * xS;
  const Vec aD = forms_->load_darcy_u - forms_->A_D * xD;
  const Vec bS = forms_->load_p_stokes - forms_->B_S * xS;
  const Vec bD = forms_->load_p_darcy - forms_->B_D * xD;

  SaddleSystem::Solution solS, solD;
#pragma omp parallel sections
  {
#pragma omp section
    solS = stokes_.solve(scale_S(), restrict_interior(spaces_->stokes_u, aS), bS);
#pragma omp section
    solD = darcy_.solve(scale_D(), restrict_interior(spaces_->darcy_u, aD), bD);
  }

  const Vec yS = aS - forms_->A_S * embed_interior(spaces_->stokes_u, solS.u_interior) -
                 forms_->B_S.transpose() * solS.p;
  const Vec yD = aD - forms_->A_D * embed_interior(spaces_->darcy_u, solD.u_interior) -
                 forms_->B_D.transpose() * solD.p;
  return ext_->R_S.transpose() * yS + ext_->R_D.transpose() * yD;
}

InterfaceVector InterfaceOperator::solver_rhs(const InterfaceVector& chi_raw) const {
  return project_dual(chi_raw);
}

double InterfaceOperator::recover_pressure_shift(const InterfaceVector& phi0,
                                                 const InterfaceVector& chi_raw) const {
  if (!neumann()) return 0.0;
  return zeta_.dot(chi_raw - apply_sigma_raw(phi0));
}

ReconstructedSolution InterfaceOperator::reconstruct(const InterfaceVector& phi0) const {
  ReconstructedSolution sol;
  sol.phi = phi0 + phi_star_;
  const Vec xS = ext_->R_S * sol.phi + forms_->lift_stokes;
  const Vec xD = ext_->R_D * sol.phi;
  const Vec aS = forms_->load_stokes_u - forms_->A_S * xS;
  const Vec aD = forms_->load_darcy_u - forms_->A_D * xD;
  const Vec bS = forms_->load_p_stokes - forms_->B_S * xS;
  const Vec bD = forms_->load_p_darcy - forms_->B_D * xD;

  SaddleSystem::Solution solS, solD;
#pragma omp parallel sections
  {
#pragma omp section
    solS = stokes_.solve(scale_S(), restrict_interior(spaces_->stokes_u, aS), bS);
#pragma omp section
    solD = darcy_.solve(scale_D(), restrict_interior(spaces_->darcy_u, aD), bD);
  }

  sol.u_S = xS + embed_interior(spaces_->stokes_u, solS.u_interior);
  sol.u_D = xD + embed_interior(spaces_->darcy_u, solD.u_interior);
  sol.p_S = solS.p;
  sol.p_D = solD.p;
  sol.multiplier_stokes = solS.multiplier;
  sol.multiplier_darcy = solD.multiplier;

  if (neumann()) {
    // c_D = <χ - Σφ0, ζ>, written via the Λ-residual of the merged solve.
    const Vec rS = aS - forms_->A_S * (sol.u_S - xS) - forms_->B_S.transpose() * sol.p_S;
    const Vec rD = aD - forms_->A_D * (sol.u_D - xD) - forms_->B_D.transpose() * sol.p_D;
    const Vec residual = ext_->R_S.transpose() * rS + ext_->R_D.transpose() * rD;
    sol.c_D = zeta_.dot(residual);
    if (mode_ == CouplingMode::single_neumann_darcy) {
      sol.p_D.array() += sol.c_D;
    } else {
      const double area_d = forms_->cell_measure_darcy.sum();
      const double area = area_d + forms_->cell_measure_stokes.sum();
      const double shift = sol.c_D * area_d / area;
      sol.p_D.array() += sol.c_D - shift;
      sol.p_S.array() -= shift;
    }
  }
  return sol;
}

Mat InterfaceOperator::dense_sigma() const {
  const int n = n_lambda();
  if (n > 256)
    throw std::logic_error("dense_sigma is a test-only path, gated to n_lambda <= 256");
  Mat S(n, n);
  for (int j = 0; j < n; ++j) {
    InterfaceVector e = InterfaceVector::Zero(n);
    e[j] = 1.0;
    S.col(j) = apply_sigma(e);
  }
  return S;
}

double ConservationReport::worst() const {
  return std::max({max_stokes_residual, max_darcy_residual, max_interface_jump});
}

Vec darcy_cell_div(const TriMesh& mesh, const Vec& edge_dofs) {
  Vec out = Vec::Zero(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.cell_edges[c][le];
      const auto& a = mesh.vertices[mesh.edges[e][0]];
      const auto& b = mesh.vertices[mesh.edges[e][1]];
      const double len = mesh.edge_length(e);
      const double nex = (b[1] - a[1]) / len, ney = -(b[0] - a[0]) / len;
      const auto nout = mesh.outward_normal(e, c);
      const double sigma = (nex * nout[0] + ney * nout[1]) > 0 ? 1.0 : -1.0;
      out[c] += sigma * edge_dofs[e];
    }
  }
  return out;
}

ConservationReport check_conservation(const ReconstructedSolution& sol,
                                      const SpaceSet& spaces, const AssembledForms& forms) {
  ConservationReport rep;
  rep.scale = std::max({1.0, sol.u_S.lpNorm<Eigen::Infinity>(), sol.u_D.lpNorm<Eigen::Infinity>(),
                        forms.load_p_stokes.lpNorm<Eigen::Infinity>(),
                        forms.load_p_darcy.lpNorm<Eigen::Infinity>()});

  // Stokes cells: -∫∇·u must match the assembled mass source row.
  const Vec rs = forms.B_S * sol.u_S - forms.load_p_stokes;
  for (int c = 0; c < rs.size(); ++c)
    if (std::abs(rs[c]) > rep.max_stokes_residual) {
      rep.max_stokes_residual = std::abs(rs[c]);
      rep.worst_stokes_cell = c;
    }

  // Darcy cells: geometric ∫∇·u against ∫ f_D (= -load_p_darcy).
  const Vec div_d = darcy_cell_div(*spaces.darcy_mesh, sol.u_D);
  for (int c = 0; c < div_d.size(); ++c) {
    const double r = std::abs(div_d[c] + forms.load_p_darcy[c]);
    if (r > rep.max_darcy_residual) {
      rep.max_darcy_residual = r;
      rep.worst_darcy_cell = c;
    }
  }

  // Interface: per segment, ∫ n·u_S must equal the RT0 edge flux.
  const auto& ifc = spaces.iface;
  for (int k = 0; k < static_cast<int>(ifc.segments.size()); ++k) {
    const auto& seg = ifc.segments[k];
    const int nc = ifc.normal_comp;
    const double uvl = sol.u_S[2 * seg.stokes_node_vl + nc];
    const double um = sol.u_S[2 * seg.stokes_node_mid + nc];
    const double uvr = sol.u_S[2 * seg.stokes_node_vr + nc];
    const double stokes_flux =
        ifc.normal_sign * (seg.h / 6.0 * uvl + 2.0 * seg.h / 3.0 * um + seg.h / 6.0 * uvr);
    const double darcy_flux = seg.darcy_sign * sol.u_D[seg.darcy_edge];
    const double jump = std::abs(stokes_flux - darcy_flux);
    if (jump > rep.max_interface_jump) {
      rep.max_interface_jump = jump;
      rep.worst_segment = k;
    }
  }
  return rep;
}

} // namespace stokesdarcy
