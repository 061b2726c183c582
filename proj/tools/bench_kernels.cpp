// Compares the serial reference kernels against the OpenMP ones: assembly
// over cells and the paired subdomain solves inside one Σ application.
// Usage: bench_kernels [resolution] [repeats]

#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "stokesdarcy/driver.hpp"

using namespace stokesdarcy;

int main(int argc, char** argv) {
  const int res = argc > 1 ? std::atoi(argv[1]) : 96;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const auto setup = define_case1(res);

  std::printf("# resolution 1/h = %d, %d repeats, %d OpenMP threads\n", res, repeats,
              omp_get_max_threads());

  double t_serial = 1e300, t_parallel = 1e300;
  AssembledForms serial_forms, parallel_forms;
  for (int r = 0; r < repeats; ++r) {
    double t0 = omp_get_wtime();
    serial_forms = assemble_forms(setup.spaces, setup.params, setup.data, Parallelism::serial);
    t_serial = std::min(t_serial, omp_get_wtime() - t0);
    t0 = omp_get_wtime();
    parallel_forms = assemble_forms(setup.spaces, setup.params, setup.data, Parallelism::openmp);
    t_parallel = std::min(t_parallel, omp_get_wtime() - t0);
  }
  const double diff = (Mat(serial_forms.stokes_eps) - Mat(parallel_forms.stokes_eps))
                          .cwiseAbs()
                          .maxCoeff();
  std::printf("assembly      serial %8.4f s   openmp %8.4f s   speedup %5.2fx   max|diff| %g\n",
              t_serial, t_parallel, t_serial / t_parallel, diff);

  const auto ext = build_extensions(setup.spaces);
  const InterfaceOperator op(setup.spaces, parallel_forms, ext, setup.mode);
  InterfaceVector phi = InterfaceVector::Ones(op.n_lambda());
  phi = op.project_primal(phi);

  double t_sig1 = 1e300, t_sigN = 1e300;
  const int nthreads = omp_get_max_threads();
  for (int r = 0; r < repeats; ++r) {
    omp_set_num_threads(1);
    double t0 = omp_get_wtime();
    InterfaceVector y1 = op.apply_sigma(phi);
    t_sig1 = std::min(t_sig1, omp_get_wtime() - t0);
    omp_set_num_threads(nthreads);
    t0 = omp_get_wtime();
    InterfaceVector yN = op.apply_sigma(phi);
    t_sigN = std::min(t_sigN, omp_get_wtime() - t0);
    const double sd = (y1 - yN).norm();
    if (sd != 0.0) std::printf("  (sigma serial-vs-parallel diff %g)\n", sd);
  }
  std::printf("sigma apply   serial %8.4f s   openmp %8.4f s   speedup %5.2fx\n", t_sig1,
              t_sigN, t_sig1 / t_sigN);
  return 0;
}
