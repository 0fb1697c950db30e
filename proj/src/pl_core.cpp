#include "wsbm/pl_core.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "wsbm/error.hpp"

namespace wsbm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

void require_same_size(const WeightedNetwork& w, const Labeling& e) {
  if (e.size() != w.n())
    throw InvalidArgument("labeling length " + std::to_string(e.size()) +
                          " does not match network size " + std::to_string(w.n()));
}

// Upper-triangle mean and population variance.
std::pair<double, double> offdiag_moments(const Eigen::MatrixXd& w) {
  const Eigen::Index n = w.rows();
  if (n < 2) return {0.0, 0.0};
  double sum = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) sum += w.col(j).head(j).sum();
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double mean = sum / pairs;
  double ss = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) ss += (w.col(j).head(j).array() - mean).square().sum();
  return {mean, ss / pairs};
}

// Unnormalized log component weights for one row of block sums.
void row_log_weights(const Eigen::Ref<const Eigen::RowVectorXd>& s_row, const MixtureParams& m,
                     const Eigen::VectorXd& log_norm, Eigen::VectorXd& out) {
  const int k = m.k();
  for (int l = 0; l < k; ++l) {
    const double quad =
        ((s_row - m.p_mean.row(l)).array().square() / m.lambda_var.row(l).array()).sum();
    out(l) = log_norm(l) - 0.5 * quad;
  }
}

// log pi_l - 1/2 sum_k log Lambda_lk
Eigen::VectorXd component_log_norm(const MixtureParams& m) {
  Eigen::VectorXd v(m.k());
  for (int l = 0; l < m.k(); ++l)
    v(l) = std::log(m.pi(l)) - 0.5 * m.lambda_var.row(l).array().log().sum();
  return v;
}

void clamp_pi(Eigen::VectorXd& pi) {
  bool changed = false;
  for (Eigen::Index l = 0; l < pi.size(); ++l) {
    if (!(pi(l) >= kPiFloor)) {
      pi(l) = kPiFloor;
      changed = true;
    }
  }
  if (changed) pi /= pi.sum();
}

double max_change(const MixtureParams& a, const MixtureParams& b) {
  double d = (a.pi - b.pi).cwiseAbs().maxCoeff();
  d = std::max(d, ((a.p_mean - b.p_mean).array().abs() / (1.0 + a.p_mean.array().abs())).maxCoeff());
  d = std::max(d, ((a.lambda_var - b.lambda_var).array().abs() / (1.0 + a.lambda_var.array())).maxCoeff());
  return d;
}

}  // namespace

double variance_floor(const WeightedNetwork& w) {
  return 1e-10 * (offdiag_moments(w.weights()).second + 1e-30);
}

BlockSums block_sums(const WeightedNetwork& w, const Labeling& e) {
  require_same_size(w, e);
  const int n = w.n();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, e.k());
  for (int i = 0; i < n; ++i) z(i, e.index(i)) = 1.0;
  return BlockSums{w.weights() * z, e};
}

ConfusionMatrix confusion_matrix(const Labeling& e, const Labeling& c) {
  if (e.size() != c.size()) throw InvalidArgument("labelings differ in length");
  if (e.k() != c.k()) throw InvalidArgument("labelings differ in community count");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(e.k(), c.k());
  for (int i = 0; i < e.size(); ++i) r(e.index(i), c.index(i)) += 1.0;
  return ConfusionMatrix{r / static_cast<double>(e.size())};
}

BlockEstimate estimate_block_params(const WeightedNetwork& w, const Labeling& e) {
  require_same_size(w, e);
  const int n = w.n();
  const int k = e.k();
  const Eigen::MatrixXd& m = w.weights();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd cnt = Eigen::MatrixXd::Zero(k, k);
  for (int j = 1; j < n; ++j) {
    const int cj = e.index(j);
    for (int i = 0; i < j; ++i) {
      const int ci = e.index(i);
      sum(ci, cj) += m(i, j);
      cnt(ci, cj) += 1.0;
    }
  }
  // Pool both orientations of each unordered label pair.
  sum = (sum + sum.transpose()).eval();
  cnt = (cnt + cnt.transpose()).eval();
  sum.diagonal() *= 0.5;
  cnt.diagonal() *= 0.5;

  BlockEstimate out;
  BlockParams& p = out.params;
  p.pi = e.proportions();
  p.b_mean = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (cnt(a, b) > 0) p.b_mean(a, b) = sum(a, b) / cnt(a, b);

  Eigen::MatrixXd ss = Eigen::MatrixXd::Zero(k, k);
  for (int j = 1; j < n; ++j) {
    const int cj = e.index(j);
    for (int i = 0; i < j; ++i) {
      const int ci = e.index(i);
      const double d = m(i, j) - p.b_mean(ci, cj);
      ss(ci, cj) += d * d;
    }
  }
  ss = (ss + ss.transpose()).eval();
  ss.diagonal() *= 0.5;

  const auto [mean_all, var_all] = offdiag_moments(m);
  (void)mean_all;
  const double floor = 1e-10 * (var_all + 1e-30);
  p.sigma2 = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      double v;
      if (cnt(a, b) > 0) {
        v = ss(a, b) / cnt(a, b);
      } else {
        v = var_all;
        out.empty_blocks.emplace_back(a, b);
      }
      if (!(v >= floor)) {
        v = floor;
        ++out.clamped_variances;
      }
      p.sigma2(a, b) = v;
      p.sigma2(b, a) = v;
    }
  }
  return out;
}

MixtureEstimate mixture_params(const ConfusionMatrix& r, const BlockParams& bhat, int n,
                               double floor) {
  const Eigen::Index k = r.r.rows();
  if (r.r.cols() != k || bhat.b_mean.rows() != k || bhat.sigma2.rows() != k)
    throw InvalidArgument("confusion matrix and block parameters differ in dimension");
  MixtureEstimate out;
  MixtureParams& m = out.params;
  m.pi = r.r.rowwise().sum();
  m.p_mean = static_cast<double>(n) * (r.r * bhat.b_mean).transpose();
  m.lambda_var = static_cast<double>(n) * (r.r * bhat.sigma2).transpose();
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      if (!(m.lambda_var(a, b) >= floor)) {
        m.lambda_var(a, b) = floor;
        ++out.clamped_variances;
      }
    }
  }
  return out;
}

Responsibilities e_step(const BlockSums& s, const MixtureParams& m) {
  const Eigen::Index n = s.s.rows();
  const int k = m.k();
  if (s.s.cols() != k) throw InvalidArgument("block sums and mixture differ in dimension");
  if (!(m.lambda_var.array() > 0.0).all()) throw InvalidArgument("mixture variances must be positive");
  Responsibilities out;
  out.tau.resize(n, k);
  const Eigen::VectorXd log_norm = component_log_norm(m);
  Eigen::VectorXd lw(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    row_log_weights(s.s.row(i), m, log_norm, lw);
    const double top = lw.maxCoeff();
    if (!std::isfinite(top)) {
      out.tau.row(i).setConstant(1.0 / k);
      ++out.uniform_rows;
      continue;
    }
    Eigen::VectorXd p = (lw.array() - top).exp();
    out.tau.row(i) = p.transpose() / p.sum();
  }
  return out;
}

MixtureEstimate m_step(const BlockSums& s, const Responsibilities& tau,
                       const MixtureParams& previous, double floor) {
  const Eigen::Index n = s.s.rows();
  const Eigen::Index k = tau.tau.cols();
  if (tau.tau.rows() != n || s.s.cols() != k)
    throw InvalidArgument("responsibilities and block sums differ in dimension");
  MixtureEstimate out;
  MixtureParams& m = out.params;
  m.pi.resize(k);
  m.p_mean.resize(k, k);
  m.lambda_var.resize(k, k);
  const Eigen::VectorXd mass = tau.tau.colwise().sum().transpose();
  for (Eigen::Index l = 0; l < k; ++l) {
    if (mass(l) < 1e-12 * static_cast<double>(n)) {
      m.pi(l) = kPiFloor;
      m.p_mean.row(l) = previous.p_mean.row(l);
      m.lambda_var.row(l) = previous.lambda_var.row(l);
      ++out.empty_components;
      continue;
    }
    m.pi(l) = mass(l) / static_cast<double>(n);
    const Eigen::RowVectorXd mean = (tau.tau.col(l).transpose() * s.s) / mass(l);
    m.p_mean.row(l) = mean;
    const Eigen::MatrixXd centered = s.s.rowwise() - mean;
    m.lambda_var.row(l) =
        (tau.tau.col(l).transpose() * centered.array().square().matrix()) / mass(l);
    for (Eigen::Index c = 0; c < k; ++c) {
      if (!(m.lambda_var(l, c) >= floor)) {
        m.lambda_var(l, c) = floor;
        ++out.clamped_variances;
      }
    }
  }
  clamp_pi(m.pi);
  return out;
}

Labeling label_update(const Responsibilities& tau) {
  const Eigen::Index n = tau.tau.rows();
  const int k = static_cast<int>(tau.tau.cols());
  std::vector<int> idx(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    for (int l = 1; l < k; ++l)
      if (tau.tau(i, l) > tau.tau(i, best)) best = l;
    idx[i] = best;
  }
  // A labeling needs n >= K; pad K only through the declared count.
  std::vector<int> labels(idx.begin(), idx.end());
  for (int& v : labels) ++v;
  return Labeling(std::move(labels), k);
}

double complete_log_likelihood(const WeightedNetwork& w, const Labeling& e,
                               const BlockParams& params) {
  require_same_size(w, e);
  if (params.k() != e.k()) throw InvalidArgument("parameters and labeling differ in K");
  const auto counts = e.counts();
  double ll = 0.0;
  for (int c = 0; c < e.k(); ++c) {
    if (counts[c] == 0) continue;
    if (!(params.pi(c) > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += counts[c] * std::log(params.pi(c));
  }
  const Eigen::MatrixXd log_var = params.sigma2.array().log().matrix();
  const int n = w.n();
  const Eigen::MatrixXd& m = w.weights();
  for (int j = 1; j < n; ++j) {
    const int cj = e.index(j);
    for (int i = 0; i < j; ++i) {
      const int ci = e.index(i);
      const double d = m(i, j) - params.b_mean(ci, cj);
      ll -= 0.5 * (kLog2Pi + log_var(ci, cj) + d * d / params.sigma2(ci, cj));
    }
  }
  return ll;
}

double pseudo_log_likelihood(const BlockSums& s, const MixtureParams& m) {
  const Eigen::Index n = s.s.rows();
  const int k = m.k();
  if (s.s.cols() != k) throw InvalidArgument("block sums and mixture differ in dimension");
  const Eigen::VectorXd log_norm = component_log_norm(m);
  Eigen::VectorXd lw(k);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    row_log_weights(s.s.row(i), m, log_norm, lw);
    const double top = lw.maxCoeff();
    if (!std::isfinite(top)) return -std::numeric_limits<double>::infinity();
    total += top + std::log((lw.array() - top).exp().sum());
  }
  return total - 0.5 * static_cast<double>(n) * k * kLog2Pi;
}

EmResult run_em(const BlockSums& s, MixtureParams start, const EmOptions& opts) {
  EmResult out;
  out.params = std::move(start);
  if (opts.record_trace) out.trace.push_back(pseudo_log_likelihood(s, out.params));
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Responsibilities tau = e_step(s, out.params);
    MixtureEstimate next = m_step(s, tau, out.params, opts.variance_floor);
    const double delta = max_change(out.params, next.params);
    out.params = std::move(next.params);
    out.iterations = it;
    out.empty_components += next.empty_components;
    if (opts.record_trace) out.trace.push_back(pseudo_log_likelihood(s, out.params));
    if (delta < opts.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

MixtureParams initial_mixture(const WeightedNetwork& w, const Labeling& e, double floor,
                              std::vector<std::string>* flags) {
  const BlockEstimate est = estimate_block_params(w, e);
  ConfusionMatrix r{est.params.pi.asDiagonal()};
  MixtureEstimate mix = mixture_params(r, est.params, w.n(), floor);
  clamp_pi(mix.params.pi);
  if (flags) {
    if (!est.empty_blocks.empty()) flags->push_back("degenerate_block");
    if (mix.clamped_variances > 0) flags->push_back("variance_floor_applied");
  }
  return std::move(mix.params);
}

FitResult pl_fit(const WeightedNetwork& w, const Labeling& e0, int k, const FitOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  require_same_size(w, e0);
  if (k < 1 || k > w.n()) throw InvalidArgument("K must lie in 1..n");
  if (opts.outer_iters < 0 || opts.inner_max < 0) throw InvalidArgument("iteration counts must be non-negative");
  if (e0.k() > k) throw InvalidArgument("initial labeling uses more than K communities");
  const Labeling start = e0.k() == k ? e0 : Labeling(e0.values(), k);

  FitResult out;
  const double floor = variance_floor(w);
  EmOptions em_opts{opts.inner_tol, opts.inner_max, floor, false};
  Labeling current = start;
  MixtureParams mixture;
  auto add_flag = [&](const std::string& f) {
    if (std::find(out.flags.begin(), out.flags.end(), f) == out.flags.end()) out.flags.push_back(f);
  };
  std::vector<std::string> init_flags;

  if (opts.outer_iters == 0) mixture = initial_mixture(w, current, floor, &init_flags);
  for (int t = 0; t < opts.outer_iters; ++t) {
    const BlockSums s = block_sums(w, current);
    MixtureParams init = initial_mixture(w, current, floor, &init_flags);
    EmResult em = run_em(s, std::move(init), em_opts);
    const Responsibilities tau = e_step(s, em.params);
    Labeling next = label_update(tau);
    out.pll_trace.push_back(pseudo_log_likelihood(s, em.params));
    out.inner_iters.push_back(em.iterations);
    out.converged.push_back(em.converged);
    if (em.empty_components > 0) add_flag("empty_component");
    if (tau.uniform_rows > 0) add_flag("uniform_responsibility_row");
    mixture = std::move(em.params);
    const bool unchanged = next == current;
    current = std::move(next);
    if (k > 1 && current.occupied() == 1) {
      add_flag("collapsed_to_one_community");
      break;
    }
    if (unchanged) break;
  }
  for (const auto& f : init_flags) add_flag(f);
  out.labels = current;
  out.block_params = estimate_block_params(w, current).params;
  out.mixture_params = std::move(mixture);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace wsbm
