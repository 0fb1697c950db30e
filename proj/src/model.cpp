#include "wsbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wsbm/error.hpp"
#include "wsbm/rng.hpp"

namespace wsbm {

WeightedNetwork::WeightedNetwork(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) throw InvalidArgument("weight matrix is not square");
  if (weights_.rows() == 0) throw InvalidArgument("weight matrix is empty");
  const Eigen::Index n = weights_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) throw InvalidArgument("weight matrix has a nonzero diagonal entry");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(weights_(i, j))) throw InvalidArgument("weight matrix has a non-finite entry");
      if (weights_(i, j) != weights_(j, i)) throw InvalidArgument("weight matrix is not symmetric");
    }
  }
}

WeightedNetwork WeightedNetwork::symmetrized(const Eigen::MatrixXd& weights, double tol) {
  if (weights.rows() != weights.cols()) throw InvalidArgument("weight matrix is not square");
  const Eigen::Index n = weights.rows();
  double worst = 0.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = std::abs(weights(i, j) - weights(j, i));
      if (!(d <= worst)) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > tol || std::isnan(worst)) {
    std::ostringstream msg;
    msg << "weight matrix is not symmetric: |W(" << wi << "," << wj << ") - W(" << wj << ","
        << wi << ")| = " << worst << " exceeds tolerance " << tol;
    throw InvalidArgument(msg.str());
  }
  Eigen::MatrixXd sym = 0.5 * (weights + weights.transpose());
  sym.diagonal().setZero();
  return WeightedNetwork(std::move(sym));
}

Labeling::Labeling(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k_ < 1) throw InvalidArgument("community count must be at least 1");
  if (static_cast<int>(labels_.size()) < k_)
    throw InvalidArgument("labeling has fewer nodes than communities");
  for (int v : labels_) {
    if (v < 1 || v > k_) throw InvalidArgument("label outside 1..K: " + std::to_string(v));
  }
}

Labeling Labeling::from_zero_based(std::span<const int> idx, int k) {
  std::vector<int> labels(idx.begin(), idx.end());
  for (int& v : labels) ++v;
  return Labeling(std::move(labels), k);
}

std::vector<int> Labeling::counts() const {
  std::vector<int> c(k_, 0);
  for (int v : labels_) ++c[v - 1];
  return c;
}

Eigen::VectorXd Labeling::proportions() const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(k_);
  for (int v : labels_) p(v - 1) += 1.0;
  return p / static_cast<double>(labels_.size());
}

int Labeling::occupied() const {
  const auto c = counts();
  return static_cast<int>(std::count_if(c.begin(), c.end(), [](int x) { return x > 0; }));
}

void BlockParams::validate() const {
  const Eigen::Index k = pi.size();
  if (k < 1) throw InvalidArgument("block parameters need at least one community");
  if (b_mean.rows() != k || b_mean.cols() != k || sigma2.rows() != k || sigma2.cols() != k)
    throw InvalidArgument("block parameter dimensions disagree");
  if ((pi.array() < 0.0).any() || std::abs(pi.sum() - 1.0) > 1e-12)
    throw InvalidArgument("pi must be a probability vector");
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      if (b_mean(r, c) != b_mean(c, r) || sigma2(r, c) != sigma2(c, r))
        throw InvalidArgument("block mean and variance matrices must be symmetric");
      if (!(sigma2(r, c) > 0.0)) throw InvalidArgument("block variances must be positive");
    }
  }
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> homogeneous_params(int k, double a, double b,
                                                               double sigma2) {
  if (k < 1) throw InvalidArgument("K must be at least 1");
  if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
  Eigen::MatrixXd mean = Eigen::MatrixXd::Constant(k, k, b);
  mean.diagonal().setConstant(a);
  return {mean, Eigen::MatrixXd::Constant(k, k, sigma2)};
}

Eigen::VectorXd balanced_pi(int k) { return Eigen::VectorXd::Constant(k, 1.0 / k); }

std::vector<int> apportion(int total, std::span<const double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const std::size_t k = weights.size();
  std::vector<int> out(k, 0);
  std::vector<double> rem(k, 0.0);
  int assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = total * weights[i] / sum;
    out[i] = static_cast<int>(std::floor(exact));
    rem[i] = exact - out[i];
    assigned += out[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  // Largest remainder first; ties to the lowest index.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return rem[x] > rem[y]; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++out[order[r % k]];
  return out;
}

void validate(const EdgeDistributionSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianGeneral>) {
          if (s.b_mean.rows() != s.b_mean.cols() || s.sigma2.rows() != s.b_mean.rows() ||
              s.sigma2.cols() != s.b_mean.cols())
            throw InvalidArgument("general Gaussian spec has mismatched dimensions");
          if (!(s.sigma2.array() > 0.0).all()) throw InvalidArgument("variances must be positive");
        } else if constexpr (std::is_same_v<T, GaussianHomogeneous>) {
          if (!(s.sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
        } else if constexpr (std::is_same_v<T, HeavyTailMixture>) {
          if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0,1]");
          if (!(s.df > 2.0)) throw InvalidArgument("degrees of freedom must exceed 2");
          if (!(s.sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
        } else {
          if (!(s.sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
        }
      },
      spec);
}

Labeling sample_labels(int n, const Eigen::VectorXd& pi, LabelAssignment mode, std::uint64_t seed) {
  const int k = static_cast<int>(pi.size());
  if (k < 1) throw InvalidArgument("pi is empty");
  if (n < k) throw InvalidArgument("n must be at least K");
  if ((pi.array() < 0.0).any() || std::abs(pi.sum() - 1.0) > 1e-9)
    throw InvalidArgument("pi must be a probability vector");
  Rng rng = make_rng(seed);
  std::vector<int> idx(n);
  if (mode == LabelAssignment::kIid) {
    std::discrete_distribution<int> draw(pi.data(), pi.data() + k);
    for (int& v : idx) v = draw(rng);
  } else {
    const auto counts = apportion(n, std::span<const double>(pi.data(), k));
    int pos = 0;
    for (int c = 0; c < k; ++c)
      for (int t = 0; t < counts[c]; ++t) idx[pos++] = c;
    std::shuffle(idx.begin(), idx.end(), rng);
  }
  return Labeling::from_zero_based(idx, k);
}

namespace {

template <typename Draw>
WeightedNetwork fill_pairs(const Labeling& labels, Rng& rng, Draw&& draw) {
  const int n = labels.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double x = draw(labels.index(i), labels.index(j), rng);
      w(i, j) = x;
      w(j, i) = x;
    }
  }
  return WeightedNetwork(std::move(w));
}

// Noncentral t with df degrees of freedom: (Z + mu) / sqrt(V / df).
double noncentral_t(double mu, double df, Rng& rng) {
  std::normal_distribution<double> z;
  std::chi_squared_distribution<double> v(df);
  const double num = z(rng) + mu;
  return num / std::sqrt(v(rng) / df);
}

}  // namespace

SampledNetwork sample_wsbm(int n, const BlockParams& params, std::uint64_t seed,
                           LabelAssignment mode) {
  params.validate();
  Labeling labels = sample_labels(n, params.pi, mode, derive_seed(seed, 1));
  Rng rng = make_rng(derive_seed(seed, 2));
  const Eigen::MatrixXd sd = params.sigma2.cwiseSqrt();
  std::normal_distribution<double> z;
  auto net = fill_pairs(labels, rng, [&](int ci, int cj, Rng& g) {
    return params.b_mean(ci, cj) + sd(ci, cj) * z(g);
  });
  return {std::move(net), std::move(labels)};
}

SampledNetwork sample_robustness_network(int n, const Eigen::VectorXd& pi,
                                         const EdgeDistributionSpec& spec, std::uint64_t seed,
                                         LabelAssignment mode) {
  validate(spec);
  const int k = static_cast<int>(pi.size());
  if (const auto* g = std::get_if<GaussianGeneral>(&spec)) {
    return sample_wsbm(n, BlockParams{pi, g->b_mean, g->sigma2}, seed, mode);
  }
  if (const auto* h = std::get_if<GaussianHomogeneous>(&spec)) {
    auto [mean, var] = homogeneous_params(k, h->a, h->b, h->sigma2);
    return sample_wsbm(n, BlockParams{pi, mean, var}, seed, mode);
  }
  Labeling labels = sample_labels(n, pi, mode, derive_seed(seed, 1));
  Rng rng = make_rng(derive_seed(seed, 2));
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WeightedNetwork net;
  if (const auto* ht = std::get_if<HeavyTailMixture>(&spec)) {
    const double sd = std::sqrt(ht->sigma2);
    net = fill_pairs(labels, rng, [&](int ci, int cj, Rng& g) {
      const double mu = ci == cj ? ht->mu_within : ht->mu_between;
      if (u(g) < ht->alpha) return mu + sd * z(g);
      return noncentral_t(mu, ht->df, g);
    });
  } else {
    const auto& bm = std::get<Bimodal>(spec);
    const double sd = std::sqrt(bm.sigma2);
    net = fill_pairs(labels, rng, [&](int ci, int cj, Rng& g) {
      if (ci != cj) return sd * z(g);
      const double mu = u(g) < 0.5 ? bm.low_mean : bm.b_param;
      return mu + sd * z(g);
    });
  }
  return {std::move(net), std::move(labels)};
}

}  // namespace wsbm
