#pragma once

// Generators and brute-force oracles shared by the test binaries. Nothing
// here calls into the library code it is used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wsbm/model.hpp"

namespace testing {

using Gen = std::mt19937_64;

inline int uniform_int(Gen& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline double uniform_real(Gen& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

// Labels in 1..k, i.i.d. uniform.
inline std::vector<int> random_labels(Gen& g, int n, int k) {
  std::vector<int> v(n);
  for (auto& x : v) x = uniform_int(g, 1, k);
  return v;
}

// Balanced labels (n divisible by k not required), then shuffled.
inline std::vector<int> balanced_labels(Gen& g, int n, int k) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1 + i % k;
  std::shuffle(v.begin(), v.end(), g);
  return v;
}

inline Eigen::MatrixXd random_symmetric(Gen& g, int n, double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = uniform_real(g, lo, hi);
  return m;
}

// Planted-partition weights drawn by the test itself.
inline Eigen::MatrixXd planted_weights(Gen& g, const std::vector<int>& labels, double a, double b,
                                       double sigma) {
  const int n = static_cast<int>(labels.size());
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m(i, j) = m(j, i) = (labels[i] == labels[j] ? a : b) + sigma * z(g);
  return m;
}

// min over permutations of the fraction of disagreements, by enumeration.
inline double brute_force_loss(const std::vector<int>& est, const std::vector<int>& ref, int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  const int n = static_cast<int>(est.size());
  int best = n;
  do {
    int miss = 0;
    for (int i = 0; i < n; ++i) miss += est[i] != perm[ref[i] - 1];
    best = std::min(best, miss);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / n;
}

inline double brute_force_assignment(const Eigen::MatrixXd& cost) {
  const int k = static_cast<int>(cost.rows());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (int r = 0; r < k; ++r) c += cost(r, perm[r]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double std_error(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1.0) / v.size());
}

// Average ranks, ties share the mean rank.
inline std::vector<double> ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = (i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// log N(x; mu, var) computed directly.
inline long double log_normal(long double x, long double mu, long double var) {
  const long double pi = 3.141592653589793238462643383279502884L;
  return -0.5L * std::log(2.0L * pi * var) - (x - mu) * (x - mu) / (2.0L * var);
}

}  // namespace testing
