#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stokesdarcy/cases.hpp"
#include "stokesdarcy/gmres.hpp"
#include "stokesdarcy/precond.hpp"

namespace stokesdarcy {

enum class PrecondKind { spectral, nn, none };

struct RunConfig {
  double tol = 1e-6;
  int max_iter = 200;
  PrecondKind precond = PrecondKind::spectral;
  bool compute_error_norms = true; ///< when exact fields are available
};

struct StageTimings {
  double assemble = 0, factorize = 0, eig = 0, chi = 0, gmres = 0, reconstruct = 0;
};

struct RunReport {
  int iterations = 0;
  bool converged = false;
  int n_lambda = 0;
  long n_total = 0; ///< size of the equivalent monolithic system
  ConservationReport conservation;
  std::vector<double> history;
  double max_multiplier = 0; ///< largest |r| from the reconstruction solves
  std::optional<ErrorNorms> errors;
  StageTimings timings;
};

struct RunResult {
  RunReport report;
  ReconstructedSolution solution;
};

/// One meshed experiment with its factorizations and spectral decomposition
/// held ready; run() serves any parameter values (alpha = 0) and solver
/// configuration against the shared factorizations.
class Solver {
 public:
  explicit Solver(const CaseSetup& setup, bool with_nn = false,
                  Parallelism par = Parallelism::openmp);

  /// Executes Algorithm 1: off-line preconditioner, χ assembly, GMRes on
  /// Σφ = χ, field reconstruction and Neumann pressure-mean recovery. The
  /// emitted solution is conservation-checked whether or not GMRes converged.
  RunResult run(const PhysicalParams& params, const RunConfig& cfg) const;
  RunResult run(const RunConfig& cfg) const { return run(setup_->params, cfg); }

  const AssembledForms& forms() const { return forms_; }
  const ExtensionOps& extensions() const { return ext_; }
  const InterfaceOperator& interface_operator() const { return op_; }
  const SpectralDecomposition& decomposition() const { return dec_; }
  const CaseSetup& setup() const { return *setup_; }
  double assemble_seconds() const { return t_assemble_; }
  double factorize_seconds() const { return t_factorize_; }
  double eig_seconds() const { return t_eig_; }

 private:
  double t_assemble_ = 0, t_factorize_ = 0, t_eig_ = 0; // written during init below
  const CaseSetup* setup_;
  AssembledForms forms_;
  ExtensionOps ext_;
  InterfaceOperator op_;
  SpectralDecomposition dec_;
  std::optional<NNPreconditioner> nn_;
};

/// Mesh-robustness sweep (iteration counts over 1/h for both cases).
struct Table1Row {
  int inv_h;
  long n_total;
  int n_lambda;
  int iters_case1, iters_case2;
};
std::vector<Table1Row> run_table1(const std::vector<int>& resolutions, double tol = 1e-6);

/// Parameter-robustness grid at fixed resolution: iterations[kappa][mu].
struct Table2Result {
  std::vector<double> kappa_values, mu_values;
  std::vector<std::vector<int>> iterations;
};
Table2Result run_table2(int case_id, int resolution, double tol = 1e-6);

/// Neumann-Neumann comparison on the manufactured problem.
struct Table3Row {
  double mu, K;
  std::vector<int> nn_iters, alg1_iters; ///< one entry per mesh level
};
struct Table3Result {
  std::vector<int> resolutions;
  std::vector<Table3Row> rows;
};
Table3Result run_table3(const std::vector<double>& mu_values,
                        const std::vector<double>& k_values, int levels, double tol = 1e-6);

void print_table1(const std::vector<Table1Row>&, std::ostream&);
void print_table2(const Table2Result&, std::ostream&);
void print_table3(const Table3Result&, std::ostream&);
void write_table1_csv(const std::vector<Table1Row>&, std::ostream&);
void write_table2_csv(const Table2Result&, std::ostream&);
void write_table3_csv(const Table3Result&, std::ostream&);

/// Legacy ASCII VTK export (quadratic triangles for Stokes, linear for
/// Darcy); writes `<path>_stokes.vtk` and `<path>_darcy.vtk`.
void write_vtk(const std::string& path_prefix, const CaseSetup& setup,
               const ReconstructedSolution& sol);

/// One run summary as CSV (header + one row).
void write_report_csv(const RunReport& rep, std::ostream& os);

/// CSV dump of the generalized eigenvalues (diagnostics).
void write_spectrum_csv(const SpectralDecomposition& dec, std::ostream& os);

} // namespace stokesdarcy
