#include "wsbm/theory.hpp"

#include <cmath>
#include <numbers>

#include "wsbm/error.hpp"

namespace wsbm::theory {

double binary_entropy(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("entropy argument must lie in [0,1]");
  if (gamma == 0.0 || gamma == 1.0) return 0.0;
  return -gamma * std::log(gamma) - (1.0 - gamma) * std::log1p(-gamma);
}

double kappa(double gamma, double n) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("kappa needs gamma in (0,1)");
  if (!(n > 0.0)) throw InvalidArgument("kappa needs n > 0");
  const double inner = 4.0 * std::numbers::pi * gamma * (1.0 - gamma) + 1.0 / (3.0 * n);
  return (std::log(n) - std::log(inner)) / n;
}

BalancedBoundReport balanced_bounds(int k, double n, double a, double b, double sigma2,
                                    double gamma) {
  if (k < 2) throw InvalidArgument("balanced bounds need K >= 2");
  if (!(n > 0.0)) throw InvalidArgument("n must be positive");
  if (a == b) throw InvalidArgument("a and b must differ");
  if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0,1]");
  const double kk = k;
  if (std::abs(gamma * kk - 1.0) < 1e-15) throw InvalidArgument("gamma = 1/K is excluded");

  BalancedBoundReport r;
  r.k = k;
  r.n = n;
  r.a = a;
  r.b = b;
  r.sigma2 = sigma2;
  r.gamma = gamma;
  const double snr = (a - b) * (a - b) / sigma2;
  const double g2 = (gamma * kk - 1.0) * (gamma * kk - 1.0);
  const double km1 = kk - 1.0;
  r.expected_error_bound = km1 * std::exp(-0.25 * g2 / (kk * km1 * km1) * n * snr);
  r.prob_threshold = std::exp(-0.125 * g2 / (km1 * km1) * (n / kk) * snr);
  r.condition_lhs = 0.125 * g2 / (kk * km1 * km1) * snr;
  r.xu_lower_bound = std::exp(-(n / kk) * snr / 4.0);
  if (gamma < 1.0) {
    r.entropy_h = binary_entropy(gamma);
    r.kappa = kappa(gamma, 2.0 * n / kk);
    r.c_n_gamma = *r.entropy_h + *r.kappa + (1.0 - gamma) * std::log(km1);
    r.condition_holds = r.condition_lhs > *r.c_n_gamma;
    r.prob_rhs = km1 * std::exp(-n * (r.condition_lhs - *r.c_n_gamma));
  }
  return r;
}

UnbalancedBoundReport unbalanced_bounds(const UnbalancedInputs& in) {
  if (!(in.pi1 >= 0.0 && in.pi2 >= 0.0) || std::abs(in.pi1 + in.pi2 - 1.0) > 1e-12)
    throw InvalidArgument("pi1 + pi2 must equal 1");
  if (!((in.ahat - in.bhat) * (in.a - in.b) > 0.0))
    throw InvalidArgument("estimates must satisfy (ahat - bhat)(a - b) > 0");
  if (!(in.sigma2hat > 0.0) || !(in.sigma2 > 0.0)) throw InvalidArgument("variances must be positive");
  if (!(in.n > 0.0)) throw InvalidArgument("n must be positive");
  for (double g : {in.gamma1, in.gamma2})
    if (!(g >= 0.0 && g <= 1.0)) throw InvalidArgument("match proportions must lie in [0,1]");

  UnbalancedBoundReport r;
  r.in = in;
  const double p1 = in.pi1, p2 = in.pi2, g1 = in.gamma1, g2 = in.gamma2;
  r.pi_tilde1 = g1 * p1 + p2 * (1.0 - g2);
  r.pi_tilde2 = (1.0 - g1) * p1 + p2 * g2;
  r.beta1 = r.pi_tilde2 * ((1.0 - g2) * p2 - g1 * p1);
  r.beta2 = r.pi_tilde1 * ((1.0 - g1) * p1 - g2 * p2);
  r.tau2 = r.beta1 * r.beta1 * p1 + r.beta2 * r.beta2 * p2;

  const double sum_hat = in.ahat + in.bhat;
  const double w1 = r.beta1 * g1 * p1 - r.beta2 * (1.0 - g1) * p1;
  const double w2 = r.beta1 * (1.0 - g2) * p2 - r.beta2 * g2 * p2;
  auto f = [&](double x, double y) { return (-2.0 * x + sum_hat) * w1 + (-2.0 * y + sum_hat) * w2; };
  r.f_ab = f(in.a, in.b);
  r.f_ba = f(in.b, in.a);

  double log_term = 0.0;
  if (r.pi_tilde1 > 0.0 && r.pi_tilde2 > 0.0) {
    log_term = 2.0 * in.sigma2hat * r.pi_tilde1 * r.pi_tilde2 / (in.n * (in.ahat - in.bhat)) *
               std::log(r.pi_tilde1 / r.pi_tilde2);
  }
  r.t1 = log_term + r.f_ab;
  r.t2 = log_term + r.f_ba;

  r.c1_gamma_pi = r.beta1 * p2 + r.beta2 * p1 - (r.beta1 + r.beta2) * (p1 * g1 + p2 * g2);
  r.c2_gamma_pi = r.beta1 * p2 - r.beta2 * p1 + (r.beta1 + r.beta2) * (p1 * g1 - p2 * g2);

  if (in.a > in.b)
    r.sign_conditions_hold = r.t1 >= 0.0 && r.t2 < 0.0;
  else
    r.sign_conditions_hold = r.t1 < 0.0 && r.t2 >= 0.0;
  r.degenerate_tau = r.tau2 == 0.0;
  if (r.sign_conditions_hold && !r.degenerate_tau) {
    const double scale = in.n / (2.0 * in.sigma2 * r.tau2);
    r.bound_comm1 = std::exp(-scale * r.t1 * r.t1);
    r.bound_comm2 = std::exp(-scale * r.t2 * r.t2);
    r.expected_error_bound = p1 * *r.bound_comm1 + p2 * *r.bound_comm2;
  }
  return r;
}

namespace {

// log(pi1 exp(-s t1^2) + pi2 exp(-s t2^2)) without underflow.
std::optional<double> log_error_bound(const UnbalancedBoundReport& r) {
  if (!r.sign_conditions_hold || r.degenerate_tau) return std::nullopt;
  const double scale = r.in.n / (2.0 * r.in.sigma2 * r.tau2);
  double terms[2] = {-scale * r.t1 * r.t1, -scale * r.t2 * r.t2};
  double weights[2] = {r.in.pi1, r.in.pi2};
  double top = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i)
    if (weights[i] > 0.0) top = std::max(top, std::log(weights[i]) + terms[i]);
  double acc = 0.0;
  for (int i = 0; i < 2; ++i)
    if (weights[i] > 0.0) acc += std::exp(std::log(weights[i]) + terms[i] - top);
  return top + std::log(acc);
}

}  // namespace

HeatmapGrid bound_heatmap(double pi1, double gamma1, double gamma2, double n, double sigma2,
                          const std::vector<double>& ab_grid,
                          const std::vector<double>& delta_grid) {
  if (ab_grid.empty() || delta_grid.empty()) throw InvalidArgument("heatmap grids must be non-empty");
  if (!(pi1 > 0.0 && pi1 < 1.0)) throw InvalidArgument("pi1 must lie in (0,1)");
  if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
  for (double d : delta_grid)
    if (!(d >= 0.0)) throw InvalidArgument("delta values must be non-negative");
  HeatmapGrid grid{ab_grid, delta_grid, {}};
  for (double delta : delta_grid) {
    std::vector<std::optional<double>> row;
    for (double ab : ab_grid) {
      const double a = std::abs(ab);
      const double b = 0.0;
      std::optional<double> worst;
      if (a > 0.0) {
        for (double da : {-delta, delta}) {
          for (double db : {-delta, delta}) {
            UnbalancedInputs in{pi1, 1.0 - pi1, gamma1, gamma2, a, b, sigma2,
                                a + da, b + db, sigma2, n};
            if (!((in.ahat - in.bhat) * (a - b) > 0.0)) continue;
            const auto lb = log_error_bound(unbalanced_bounds(in));
            if (lb && (!worst || *lb > *worst)) worst = lb;
          }
        }
      }
      row.push_back(worst);
    }
    grid.cells.push_back(std::move(row));
  }
  return grid;
}

}  // namespace wsbm::theory
