#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace ergolab {

// Execution policy for the data-parallel kernels.  Every kernel has a serial
// reference path; the OpenMP path must produce bitwise-identical results, so
// parallelism is only applied across independent work items (matrix rows,
// replica indices) whose per-item arithmetic is unchanged.
enum class Exec { serial, openmp };

// openmp when the library was built with OpenMP support, serial otherwise.
Exec default_exec();

// Number of threads the openmp policy would use (1 without OpenMP).
int exec_threads(Exec exec);

// Runs body(i) for i in [0, n).  Under Exec::openmp the iterations run in
// parallel; body must not touch state shared across iterations.
void parallel_for(std::int64_t n, Exec exec, const std::function<void(std::int64_t)>& body);

// Pairwise summation.  The result is independent of any parallel schedule
// because it is always evaluated in the same fixed recursion order.
double pairwise_sum(std::span<const double> xs);

double pairwise_mean(std::span<const double> xs);

}  // namespace ergolab
