#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wsbm/model.hpp"

namespace wsbm {

// s(i, k): total weight from node i to nodes labeled k.
struct BlockSums {
  Eigen::MatrixXd s;
  Labeling source;
};

// r(k, l): fraction of nodes with estimated label k and reference label l.
struct ConfusionMatrix {
  Eigen::MatrixXd r;
};

// Gaussian mixture over block-sum rows. Row l of p_mean / lambda_var is the
// mean / variance vector of component l.
struct MixtureParams {
  Eigen::VectorXd pi;
  Eigen::MatrixXd p_mean;
  Eigen::MatrixXd lambda_var;

  int k() const { return static_cast<int>(pi.size()); }
};

struct Responsibilities {
  Eigen::MatrixXd tau;
  int uniform_rows = 0;  // rows with no finite log-weight, set to uniform
};

struct BlockEstimate {
  BlockParams params;
  std::vector<std::pair<int, int>> empty_blocks;  // 0-based (k, l), k <= l
  int clamped_variances = 0;
};

struct MixtureEstimate {
  MixtureParams params;
  int clamped_variances = 0;
  int empty_components = 0;
};

inline constexpr double kPiFloor = 1e-8;

// 1e-10 * (variance of the off-diagonal weights + 1e-30).
double variance_floor(const WeightedNetwork& w);

BlockSums block_sums(const WeightedNetwork& w, const Labeling& e);

ConfusionMatrix confusion_matrix(const Labeling& e, const Labeling& c);

// Closed-form maximizers of the complete likelihood for fixed labels.
// Off-diagonal blocks pool every unordered pair with label set {k, l}.
// A block without pairs gets mean 0 and the pooled variance of all weights.
BlockEstimate estimate_block_params(const WeightedNetwork& w, const Labeling& e);

// P = n (R B)^T, Lambda = n (R Sigma)^T; pi from the row sums of R.
// Lambda entries below `floor` are clamped.
MixtureEstimate mixture_params(const ConfusionMatrix& r, const BlockParams& bhat, int n,
                               double floor);

Responsibilities e_step(const BlockSums& s, const MixtureParams& m);

// Weighted-moment updates. A component whose responsibility mass is below
// 1e-12 n keeps its previous mean and variance rows and gets pi = kPiFloor.
MixtureEstimate m_step(const BlockSums& s, const Responsibilities& tau,
                       const MixtureParams& previous, double floor);

// Row-wise argmax, ties to the smallest index.
Labeling label_update(const Responsibilities& tau);

double complete_log_likelihood(const WeightedNetwork& w, const Labeling& e,
                               const BlockParams& params);

// Includes the -(nK/2) log(2 pi) constant.
double pseudo_log_likelihood(const BlockSums& s, const MixtureParams& m);

struct EmOptions {
  double tol = 1e-6;
  int max_iter = 100;
  double variance_floor = 0.0;
  bool record_trace = false;
};

struct EmResult {
  MixtureParams params;
  int iterations = 0;
  bool converged = false;
  int empty_components = 0;
  // Pseudo-log-likelihood at the starting point and after every M-step,
  // filled when EmOptions::record_trace is set.
  std::vector<double> trace;
};

// Alternates e_step / m_step on fixed block sums.
EmResult run_em(const BlockSums& s, MixtureParams start, const EmOptions& opts);

struct FitOptions {
  int outer_iters = 20;
  double inner_tol = 1e-6;
  int inner_max = 100;
};

struct FitResult {
  Labeling labels;
  BlockParams block_params;
  MixtureParams mixture_params;
  std::vector<double> pll_trace;
  std::vector<int> inner_iters;
  std::vector<bool> converged;
  std::vector<std::string> flags;
  double wall_seconds = 0.0;
};

// Initial mixture for labels e: closed-form block estimates with R = diag(pi(e)).
MixtureParams initial_mixture(const WeightedNetwork& w, const Labeling& e, double floor,
                              std::vector<std::string>* flags = nullptr);

FitResult pl_fit(const WeightedNetwork& w, const Labeling& e0, int k,
                 const FitOptions& opts = {});

}  // namespace wsbm
