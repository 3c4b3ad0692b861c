#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <vector>

#include "ergolab/dense.hpp"
#include "ergolab/diag.hpp"
#include "ergolab/exec.hpp"
#include "ergolab/kernel/ops.hpp"
#include "ergolab/lab/drift.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/sim/subsample.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

Mat random_mat(int rows, int cols, CounterRng& rng) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

// Bitwise agreement, not approximate: the parallel path must run the exact
// same per-item arithmetic as the serial one.
double max_abs_diff(const Mat& a, const Mat& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("execution policy plumbing") {
  CHECK(exec_threads(Exec::serial) == 1);
  CHECK(exec_threads(Exec::openmp) >= 1);
#ifdef ERGOLAB_HAVE_OPENMP
  CHECK(default_exec() == Exec::openmp);
#else
  CHECK(default_exec() == Exec::serial);
#endif
}

TEST_CASE("parallel_for covers every index exactly once") {
  for (Exec exec : {Exec::serial, Exec::openmp}) {
    std::vector<std::atomic<int>> hits(997);
    parallel_for(997, exec, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)]++; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));

    int ran = 0;
    parallel_for(0, exec, [&](std::int64_t) { ++ran; });
    CHECK(ran == 0);
  }
}

TEST_CASE("pairwise summation") {
  SUBCASE("fixed recursion order makes the result reproducible") {
    CounterRng rng(31, 0);
    std::vector<double> xs(1 << 20);
    for (auto& x : xs) x = rng.normal();
    const double first = pairwise_sum(xs);
    const double second = pairwise_sum(xs);
    CHECK(first == second);
  }
  SUBCASE("accuracy on an ill-conditioned sum") {
    // Left-to-right accumulation of 1/i drifts by ~1e-10 at this length;
    // pairwise stays within a few ulps of the long double reference.
    std::vector<double> xs(1000000);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 1.0 / static_cast<double>(i + 1);
    long double ref = 0.0L;
    for (double x : xs) ref += static_cast<long double>(x);
    CHECK(std::abs(pairwise_sum(xs) - static_cast<double>(ref)) < 1e-12);
  }
  SUBCASE("edge cases") {
    CHECK(pairwise_sum({}) == 0.0);
    const double one = 1.25;
    CHECK(pairwise_sum({&one, 1}) == 1.25);
    std::vector<double> xs{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(pairwise_mean(xs) == doctest::Approx(3.0).epsilon(1e-15));
  }
}

TEST_CASE("dense kernels match across policies") {
  CounterRng rng(7, 0);
  const Mat a = random_mat(97, 64, rng);
  const Mat b = random_mat(64, 53, rng);

  SUBCASE("gemm") {
    Mat serial(97, 53), openmp(97, 53);
    kernel::dense::gemm(a, b, serial, Exec::serial);
    kernel::dense::gemm(a, b, openmp, Exec::openmp);
    CHECK(max_abs_diff(serial, openmp) == 0.0);
    CHECK(max_abs_diff(serial, a * b) < 1e-10);
  }
  SUBCASE("add_scaled") {
    Mat s0 = random_mat(97, 64, rng);
    Mat s1 = s0;
    kernel::dense::add_scaled(s0, a, 0.37, Exec::serial);
    kernel::dense::add_scaled(s1, a, 0.37, Exec::openmp);
    CHECK(max_abs_diff(s0, s1) == 0.0);
  }
  SUBCASE("row_vec_mul") {
    const Mat p = random_mat(64, 64, rng);
    const Vec v = random_mat(64, 1, rng);
    const Vec serial = kernel::dense::row_vec_mul(v, p, Exec::serial);
    const Vec openmp = kernel::dense::row_vec_mul(v, p, Exec::openmp);
    CHECK((serial - openmp).cwiseAbs().maxCoeff() == 0.0);
    CHECK((serial - (p.transpose() * v)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("matrix function kernels match across policies") {
  CounterRng rng(12, 0);
  const kernel::RateMatrix gen(oracles::random_irreducible(24, rng));

  SUBCASE("semigroup") {
    const Mat serial = kernel::semigroup(gen, 1.3, Exec::serial).p();
    const Mat openmp = kernel::semigroup(gen, 1.3, Exec::openmp).p();
    CHECK(max_abs_diff(serial, openmp) == 0.0);
  }
  SUBCASE("resolvent") {
    const Mat serial = kernel::resolvent(gen, 0.7, Exec::serial).p();
    const Mat openmp = kernel::resolvent(gen, 0.7, Exec::openmp).p();
    CHECK(max_abs_diff(serial, openmp) == 0.0);
  }
  SUBCASE("skeleton cesaro average") {
    const Vec serial = kernel::skeleton_cesaro(gen, 0.5, 3, 64, Exec::serial).weights();
    const Vec openmp = kernel::skeleton_cesaro(gen, 0.5, 3, 64, Exec::openmp).weights();
    CHECK((serial - openmp).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("replica maps are schedule independent") {
  SUBCASE("map_replicas hands out every replica index once") {
    for (Exec exec : {Exec::serial, Exec::openmp}) {
      std::vector<std::atomic<int>> hits(64);
      sim::map_replicas(64, exec, [&](std::int64_t r) { hits[static_cast<std::size_t>(r)]++; });
      CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));
    }
  }
  SUBCASE("replica paths do not depend on the policy") {
    const sim::ProcessSpec spec{sim::FiniteCtmcSpec{kernel::RateMatrix(oracles::sym2()), 0}};
    const auto collect = [&](Exec exec) {
      std::vector<double> finals(32);
      sim::map_replicas(32, exec, [&](std::int64_t r) {
        const auto path = sim::simulate(spec, 5.0, 99, static_cast<std::uint64_t>(r));
        finals[static_cast<std::size_t>(r)] = path.states.back();
      });
      return finals;
    };
    CHECK(collect(Exec::serial) == collect(Exec::openmp));
  }
  SUBCASE("subsampled replicas agree bitwise") {
    const sim::ProcessSpec spec{sim::FiniteCtmcSpec{kernel::RateMatrix(oracles::sym2()), 0}};
    const sim::ExpSubsampleSpec sub{2.0, 4};
    const auto serial = sim::exp_subsample_replicas(spec, sub, 5, 256, Exec::serial);
    const auto openmp = sim::exp_subsample_replicas(spec, sub, 5, 256, Exec::openmp);
    CHECK(serial == openmp);
  }
}

TEST_CASE("drift check is policy independent") {
  const auto spec = sim::make_elliptic_preset("ou", 1, std::sqrt(2.0), 1e-3, {0.0});
  const auto v = [](std::span<const double> x) { return 1.0 + x[0] * x[0]; };
  const lab::SampleBox box{{-3.0}, {3.0}};
  lab::DriftCheckOptions opts;
  opts.fd_replicas = 2000;
  opts.samples_per_axis = 9;
  opts.exec = Exec::serial;
  const auto serial = lab::lyapunov_drift_check(spec, v, box, opts);
  opts.exec = Exec::openmp;
  const auto openmp = lab::lyapunov_drift_check(spec, v, box, opts);
  CHECK(serial.c == openmp.c);
  CHECK(serial.big_c == openmp.big_c);
  CHECK(serial.violations == openmp.violations);
}

TEST_CASE("diagnostics sink absorbs appends from parallel regions") {
  diag::enable(true);
  parallel_for(100, Exec::openmp, [&](std::int64_t i) {
    diag::append("note " + std::to_string(i));
  });
  auto notes = diag::drain();
  diag::enable(false);
  CHECK(notes.size() == 100);
  std::sort(notes.begin(), notes.end());
  CHECK(std::unique(notes.begin(), notes.end()) == notes.end());
  CHECK(diag::drain().empty());
}
