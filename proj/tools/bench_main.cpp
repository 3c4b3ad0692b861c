#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <vector>

#include "ergolab/dense.hpp"
#include "ergolab/exec.hpp"
#include "ergolab/kernel/ops.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/sim/subsample.hpp"

namespace {

using ergolab::Exec;
using ergolab::Mat;

double ms_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report_row(const char* name, const char* size, double serial_ms, double openmp_ms,
                double max_diff) {
  std::printf("%-22s %-12s %10.2f %10.2f %8.2fx %12.3e\n", name, size, serial_ms, openmp_ms,
              serial_ms / openmp_ms, max_diff);
}

Mat random_matrix(int n, std::uint64_t seed) {
  ergolab::CounterRng rng(seed, 7);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform() - 0.5;
  return m;
}

ergolab::kernel::RateMatrix random_generator(int n, std::uint64_t seed) {
  ergolab::CounterRng rng(seed, 11);
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) m(i, j) = rng.uniform();
    }
  }
  m.diagonal() = -m.rowwise().sum();
  return ergolab::kernel::RateMatrix(std::move(m));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP timings for the row-sliced kernels"};
  int n_gemm = 384;
  int n_semigroup = 128;
  int replicas = 20000;
  int reps = 3;
  app.add_option("--gemm-size", n_gemm, "matrix size for the multiply kernel")
      ->capture_default_str();
  app.add_option("--semigroup-size", n_semigroup, "generator size for the semigroup")
      ->capture_default_str();
  app.add_option("--replicas", replicas, "subsampled replica count")->capture_default_str();
  app.add_option("--reps", reps, "repetitions (best-of timing)")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::printf("threads available under openmp policy: %d\n\n",
              ergolab::exec_threads(Exec::openmp));
  std::printf("%-22s %-12s %10s %10s %9s %12s\n", "kernel", "size", "serial", "openmp", "speedup",
              "max|diff|");

  {
    const Mat a = random_matrix(n_gemm, 1);
    const Mat b = random_matrix(n_gemm, 2);
    Mat c_serial, c_openmp;
    const double t_serial =
        ms_best_of(reps, [&] { ergolab::kernel::dense::gemm(a, b, c_serial, Exec::serial); });
    const double t_openmp =
        ms_best_of(reps, [&] { ergolab::kernel::dense::gemm(a, b, c_openmp, Exec::openmp); });
    char size[32];
    std::snprintf(size, sizeof(size), "%dx%d", n_gemm, n_gemm);
    report_row("gemm", size, t_serial, t_openmp, (c_serial - c_openmp).cwiseAbs().maxCoeff());
  }

  {
    const auto gen = random_generator(n_semigroup, 3);
    Mat p_serial, p_openmp;
    const double t_serial = ms_best_of(
        reps, [&] { p_serial = ergolab::kernel::semigroup(gen, 1.0, Exec::serial).p(); });
    const double t_openmp = ms_best_of(
        reps, [&] { p_openmp = ergolab::kernel::semigroup(gen, 1.0, Exec::openmp).p(); });
    char size[32];
    std::snprintf(size, sizeof(size), "n=%d", n_semigroup);
    report_row("semigroup", size, t_serial, t_openmp, (p_serial - p_openmp).cwiseAbs().maxCoeff());
  }

  {
    Mat rates(2, 2);
    rates << -1.0, 1.0, 2.0, -2.0;
    const ergolab::sim::ProcessSpec spec =
        ergolab::sim::FiniteCtmcSpec{ergolab::kernel::RateMatrix(rates), 0};
    const ergolab::sim::ExpSubsampleSpec sub{2.0, 4};
    std::vector<double> out_serial, out_openmp;
    const double t_serial = ms_best_of(reps, [&] {
      out_serial = ergolab::sim::exp_subsample_replicas(spec, sub, 42, replicas, Exec::serial);
    });
    const double t_openmp = ms_best_of(reps, [&] {
      out_openmp = ergolab::sim::exp_subsample_replicas(spec, sub, 42, replicas, Exec::openmp);
    });
    double max_diff = 0.0;
    for (std::size_t i = 0; i < out_serial.size(); ++i)
      max_diff = std::max(max_diff, std::abs(out_serial[i] - out_openmp[i]));
    char size[32];
    std::snprintf(size, sizeof(size), "%d runs", replicas);
    report_row("subsample replicas", size, t_serial, t_openmp, max_diff);
  }

  std::printf("\nmax|diff| must be exactly 0: both policies run the same per-item arithmetic.\n");
  return 0;
}
