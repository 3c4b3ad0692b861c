#pragma once

#include "ergolab/common.hpp"
#include "ergolab/exec.hpp"

namespace ergolab::kernel::dense {

// C = A * B.  Parallel over rows of C; each row is computed by the same
// serial expression under both policies, so results are bitwise identical.
void gemm(const Mat& a, const Mat& b, Mat& c, Exec exec);

// S += w * A, row-parallel.
void add_scaled(Mat& s, const Mat& a, double w, Exec exec);

// v^T P for a column vector v; parallel over output entries.
Vec row_vec_mul(const Vec& v, const Mat& p, Exec exec);

// Divides each row by its sum; rows must have positive sums.
void normalize_rows(Mat& p);

}  // namespace ergolab::kernel::dense
