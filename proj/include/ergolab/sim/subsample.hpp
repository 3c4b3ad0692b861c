#pragma once

#include "ergolab/sim/simulate.hpp"

namespace ergolab::sim {

// Exponential subsampling: observe the process at the partial sums of i.i.d.
// Exp(alpha) clocks.  The observed sequence is a Markov chain whose one-step
// kernel is the normalized resolvent at rate alpha.
struct ExpSubsampleSpec {
  double alpha = 1.0;
  std::int64_t count = 1;
};

// Simulates fresh and observes at clock times; clocks draw from a stream
// independent of the path noise.  Returns `count` samples, each of
// sample_dim(spec) coordinates, flattened row-major.
std::vector<double> exp_subsample(const ProcessSpec& spec, const ExpSubsampleSpec& sub,
                                  std::uint64_t seed, std::uint64_t replica = 0);

// Reads observations off an already recorded path.  Throws std::range_error
// once a clock time passes the recorded horizon.
std::vector<double> exp_subsample(const SamplePath& path, const ExpSubsampleSpec& sub,
                                  std::uint64_t seed, std::uint64_t replica = 0);

// Final observation (the count-th) of one subsampled replica per index in
// [0, replicas); rows flattened.  Replicas use disjoint substreams for both
// path noise and clocks, so the result is schedule-independent.
std::vector<double> exp_subsample_replicas(const ProcessSpec& spec, const ExpSubsampleSpec& sub,
                                           std::uint64_t seed, std::int64_t replicas,
                                           Exec exec = default_exec());

}  // namespace ergolab::sim
