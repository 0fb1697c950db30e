#include <algorithm>
#include <mutex>
#include <numeric>
#include <vector>

#include <lapacke.h>

#include "wsbm/error.hpp"
#include "wsbm/init.hpp"

extern "C" void openblas_set_num_threads(int);

namespace wsbm {

namespace {

// Eigenpairs il..iu (1-based, ascending order) of the tridiagonal (d, e).
void tridiagonal_range(const Eigen::VectorXd& d, const Eigen::VectorXd& e, int il, int iu,
                       std::vector<double>& values, Eigen::MatrixXd& vectors) {
  const lapack_int n = static_cast<lapack_int>(d.size());
  Eigen::VectorXd dd = d;
  Eigen::VectorXd ee(n);
  ee.setZero();
  if (n > 1) ee.head(n - 1) = e.head(n - 1);
  const lapack_int want = iu - il + 1;
  Eigen::VectorXd w(n);
  vectors.resize(n, want);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(want, 1)));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  const lapack_int info =
      LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, dd.data(), ee.data(), 0.0, 0.0, il, iu, &found,
                     w.data(), vectors.data(), n, want, support.data(), &tryrac);
  if (info != 0 || found != want)
    throw NumericalError("tridiagonal eigensolver (dstemr) failed: info=" + std::to_string(info) +
                         ", found " + std::to_string(found) + " of " + std::to_string(want) +
                         " eigenpairs");
  values.assign(w.data(), w.data() + want);
}

}  // namespace

EigenPairs top_abs_eigenpairs(const Eigen::MatrixXd& m, int k) {
  static std::once_flag blas_threads;
  std::call_once(blas_threads, [] { openblas_set_num_threads(1); });

  const lapack_int n = static_cast<lapack_int>(m.rows());
  if (m.cols() != n) throw InvalidArgument("eigensolver needs a square matrix");
  if (k < 1 || k > n) throw InvalidArgument("requested eigenpair count outside 1..n");

  Eigen::MatrixXd packed = m;
  Eigen::VectorXd d(n), e(std::max<lapack_int>(n, 1)), tau(std::max<lapack_int>(n, 1));
  lapack_int info =
      LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, packed.data(), n, d.data(), e.data(), tau.data());
  if (info != 0) throw NumericalError("tridiagonalization (dsytrd) failed: info=" + std::to_string(info));

  std::vector<double> values;
  Eigen::MatrixXd z;
  if (2 * k >= n) {
    tridiagonal_range(d, e, 1, n, values, z);
  } else {
    std::vector<double> lo_vals, hi_vals;
    Eigen::MatrixXd lo, hi;
    tridiagonal_range(d, e, 1, k, lo_vals, lo);
    tridiagonal_range(d, e, n - k + 1, n, hi_vals, hi);
    values = lo_vals;
    values.insert(values.end(), hi_vals.begin(), hi_vals.end());
    z.resize(n, 2 * k);
    z << lo, hi;
  }

  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const double ax = std::abs(values[x]), ay = std::abs(values[y]);
    if (ax != ay) return ax > ay;
    return values[x] > values[y];
  });

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int c = 0; c < k; ++c) {
    out.values(c) = values[order[c]];
    out.vectors.col(c) = z.col(order[c]);
  }
  if (n > 1) {
    info = LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', n, k, packed.data(), n, tau.data(),
                          out.vectors.data(), n);
    if (info != 0) throw NumericalError("back-transformation (dormtr) failed: info=" + std::to_string(info));
  }
  return out;
}

}  // namespace wsbm
