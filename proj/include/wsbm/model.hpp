#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace wsbm {

// Symmetric, finite, zero-diagonal edge-weight matrix. Construction validates
// the invariants exactly; use `symmetrized` to accept near-symmetric input.
class WeightedNetwork {
 public:
  WeightedNetwork() = default;
  explicit WeightedNetwork(Eigen::MatrixXd weights);

  // Averages W and W^T after checking |W_ij - W_ji| <= tol. Throws
  // InvalidArgument naming the worst offending entry otherwise. The diagonal
  // is zeroed.
  static WeightedNetwork symmetrized(const Eigen::MatrixXd& weights, double tol);

  int n() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double operator()(int i, int j) const { return weights_(i, j); }

 private:
  Eigen::MatrixXd weights_;
};

// Community assignment with 1-based ids in 1..k.
class Labeling {
 public:
  Labeling() = default;
  Labeling(std::vector<int> labels, int k);

  // Builds from 0-based community indices.
  static Labeling from_zero_based(std::span<const int> idx, int k);

  int size() const { return static_cast<int>(labels_.size()); }
  int k() const { return k_; }
  // 1-based label of node i.
  int operator[](int i) const { return labels_[i]; }
  // 0-based community index of node i.
  int index(int i) const { return labels_[i] - 1; }
  const std::vector<int>& values() const { return labels_; }

  std::vector<int> counts() const;
  Eigen::VectorXd proportions() const;
  int occupied() const;

  friend bool operator==(const Labeling&, const Labeling&) = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

struct BlockParams {
  Eigen::VectorXd pi;
  Eigen::MatrixXd b_mean;
  Eigen::MatrixXd sigma2;

  int k() const { return static_cast<int>(pi.size()); }
  // Throws InvalidArgument if any invariant fails.
  void validate() const;
};

// Planted-partition means (a on the diagonal, b elsewhere) and constant variance.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> homogeneous_params(int k, double a, double b,
                                                               double sigma2);

struct GaussianGeneral {
  Eigen::MatrixXd b_mean;
  Eigen::MatrixXd sigma2;
};

struct GaussianHomogeneous {
  double a = 0.0;
  double b = 0.0;
  double sigma2 = 1.0;
};

// alpha N(mu, sigma2) + (1 - alpha) t_{mu, df}, mu = mu_within inside
// communities and mu_between across them.
struct HeavyTailMixture {
  double alpha = 1.0;
  double mu_within = 0.2;
  double mu_between = 0.0;
  double sigma2 = 0.25;
  double df = 4.0;
};

// Within: 0.5 N(low_mean, sigma2) + 0.5 N(b_param, sigma2). Between: N(0, sigma2).
struct Bimodal {
  double b_param = 0.3;
  double low_mean = -0.3;
  double sigma2 = 0.25;
};

using EdgeDistributionSpec =
    std::variant<GaussianGeneral, GaussianHomogeneous, HeavyTailMixture, Bimodal>;

void validate(const EdgeDistributionSpec& spec);

enum class LabelAssignment {
  kIid,          // labels drawn i.i.d. from pi
  kFixedCounts,  // exactly round(pi_k n) per community (largest remainder), random order
};

struct SampledNetwork {
  WeightedNetwork network;
  Labeling labels;
};

Labeling sample_labels(int n, const Eigen::VectorXd& pi, LabelAssignment mode, std::uint64_t seed);

SampledNetwork sample_wsbm(int n, const BlockParams& params, std::uint64_t seed,
                           LabelAssignment mode = LabelAssignment::kIid);

// Heavy-tail or bimodal generators; Gaussian variants are forwarded to sample_wsbm.
SampledNetwork sample_robustness_network(int n, const Eigen::VectorXd& pi,
                                         const EdgeDistributionSpec& spec, std::uint64_t seed,
                                         LabelAssignment mode = LabelAssignment::kIid);

// Largest-remainder apportionment of `total` items according to `weights`.
std::vector<int> apportion(int total, std::span<const double> weights);

Eigen::VectorXd balanced_pi(int k);

}  // namespace wsbm
