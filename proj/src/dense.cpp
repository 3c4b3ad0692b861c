#include "ergolab/dense.hpp"

#ifdef ERGOLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace ergolab::kernel::dense {
namespace {

inline void gemm_row(const Mat& a, const Mat& b, Mat& c, Eigen::Index i) {
  c.row(i).noalias() = a.row(i) * b;
}

inline double dot_col(const Vec& v, const Mat& p, Eigen::Index j) {
  return p.col(j).dot(v);
}

}  // namespace

void gemm(const Mat& a, const Mat& b, Mat& c, Exec exec) {
  if (a.cols() != b.rows()) throw std::domain_error("gemm shape mismatch");
  c.resize(a.rows(), b.cols());
  const Eigen::Index n = a.rows();
#ifdef ERGOLAB_HAVE_OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) gemm_row(a, b, c, i);
    return;
  }
#else
  (void)exec;
#endif
  for (Eigen::Index i = 0; i < n; ++i) gemm_row(a, b, c, i);
}

void add_scaled(Mat& s, const Mat& a, double w, Exec exec) {
  if (s.rows() != a.rows() || s.cols() != a.cols()) throw std::domain_error("add_scaled shape mismatch");
  const Eigen::Index n = s.rows();
#ifdef ERGOLAB_HAVE_OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) s.row(i) += w * a.row(i);
    return;
  }
#else
  (void)exec;
#endif
  for (Eigen::Index i = 0; i < n; ++i) s.row(i) += w * a.row(i);
}

Vec row_vec_mul(const Vec& v, const Mat& p, Exec exec) {
  if (v.size() != p.rows()) throw std::domain_error("row_vec_mul shape mismatch");
  Vec out(p.cols());
  const Eigen::Index m = p.cols();
#ifdef ERGOLAB_HAVE_OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < m; ++j) out(j) = dot_col(v, p, j);
    return out;
  }
#else
  (void)exec;
#endif
  for (Eigen::Index j = 0; j < m; ++j) out(j) = dot_col(v, p, j);
  return out;
}

void normalize_rows(Mat& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double s = p.row(i).sum();
    if (!(s > 0.0)) throw numerical_error("row normalization hit a non-positive row sum");
    p.row(i) /= s;
  }
}

}  // namespace ergolab::kernel::dense
