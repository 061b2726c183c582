#pragma once

#include <memory>
#include <optional>
#include <string>

#include "stokesdarcy/interface_op.hpp"
#include "stokesdarcy/mesh.hpp"
#include "stokesdarcy/params.hpp"
#include "stokesdarcy/spaces.hpp"

namespace stokesdarcy {

/// Closed-form reference fields for error measurement.
struct ExactSolution {
  VectorFn u_S;
  ScalarFn p_S;
  VectorFn u_D;
  ScalarFn p_D;
  ScalarFn div_u_D; ///< empty means zero
};

/// A fully meshed and tagged experiment: geometry, spaces and data.
/// Move-only; the SpaceSet points into the heap-allocated meshes.
struct CaseSetup {
  std::string name;
  BoundarySpec spec;
  std::unique_ptr<TriMesh> stokes, darcy;
  std::unique_ptr<TraceMesh> trace;
  SpaceSet spaces;
  ProblemData data;
  PhysicalParams params;
  CouplingMode mode = CouplingMode::both_dirichlet;
  std::optional<ExactSolution> exact;
};

/// Flow into the porous medium driven by the pressure datum g_p = x2:
/// Ω_S = (0,1)², Ω_D = (0,1)x(-1,0); top stress, Darcy bottom no-flow,
/// Darcy sides pressure. Both subproblems are well-posed.
CaseSetup define_case1(int resolution, const PhysicalParams& params = {});

/// Flow over the porous medium driven by the tangential wall profile
/// u = [0, x2(2-x2)]; the Darcy boundary is no-flux everywhere, so the
/// porous subproblem is a pure Neumann problem (single-Neumann mode).
CaseSetup define_case2(int resolution, const PhysicalParams& params = {});

/// Manufactured solution on Ω_S = (0,1)x(1,2), Ω_D = (0,1)², with the BJS
/// condition replaced by no-slip on Γ. `resolution` counts cells per unit
/// length. Exact fields are attached for error measurement.
CaseSetup define_manufactured(int resolution, const PhysicalParams& params);

/// Synthetic coupled-Neumann configuration: case-1 geometry with essential
/// data on the whole boundary and compatible mass sources f_D = 1 on Ω_D,
/// f_S = -1 on Ω_S.
CaseSetup define_coupled_neumann(int resolution, const PhysicalParams& params = {});

struct ErrorNorms {
  double velocity_S_l2 = 0; ///< L²(Ω_S) Stokes velocity error
  double pressure_l2 = 0;   ///< L²(Ω) pressure error
  double flux_D_l2 = 0;     ///< L²(Ω_D) Darcy flux error
  double flux_D_hdiv = 0;   ///< H(div, Ω_D) Darcy flux error
};

/// Degree-4 quadrature of the discrete-minus-exact fields.
ErrorNorms compute_errors(const ReconstructedSolution& sol, const CaseSetup& setup);

} // namespace stokesdarcy
