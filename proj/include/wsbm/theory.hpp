#pragma once

#include <optional>
#include <vector>

namespace wsbm::theory {

// -g log g - (1 - g) log(1 - g), natural log, h(0) = h(1) = 0.
double binary_entropy(double gamma);

// (log n - log(4 pi g (1 - g) + 1 / (3n))) / n, for g in (0, 1).
double kappa(double gamma, double n);

struct BalancedBoundReport {
  int k = 0;
  double n = 0, a = 0, b = 0, sigma2 = 0, gamma = 0;
  // h, kappa, C(n, gamma) and the tail-probability bound need gamma < 1.
  std::optional<double> entropy_h;
  std::optional<double> kappa;
  std::optional<double> c_n_gamma;
  double condition_lhs = 0;
  bool condition_holds = false;
  double expected_error_bound = 0;
  double prob_threshold = 0;
  std::optional<double> prob_rhs;
  // Leading-order optimal-rate lower bound, o(1) term dropped.
  double xu_lower_bound = 0;
};

// Single-step guarantees for balanced communities and initial labels in E_gamma.
// gamma in (0, 1], gamma != 1/K, K >= 2, a != b, sigma2 > 0.
BalancedBoundReport balanced_bounds(int k, double n, double a, double b, double sigma2,
                                    double gamma);

struct UnbalancedInputs {
  double pi1 = 0.5, pi2 = 0.5;
  double gamma1 = 1.0, gamma2 = 1.0;
  double a = 1.0, b = 0.0, sigma2 = 1.0;
  double ahat = 1.0, bhat = 0.0, sigma2hat = 1.0;
  double n = 100.0;
};

struct UnbalancedBoundReport {
  UnbalancedInputs in;
  double pi_tilde1 = 0, pi_tilde2 = 0;
  double beta1 = 0, beta2 = 0;
  double tau2 = 0;
  double f_ab = 0, f_ba = 0;
  double t1 = 0, t2 = 0;
  bool sign_conditions_hold = false;
  // Empty when the sign conditions fail or tau2 == 0.
  std::optional<double> bound_comm1, bound_comm2, expected_error_bound;
  double c1_gamma_pi = 0, c2_gamma_pi = 0;
  bool degenerate_tau = false;
};

UnbalancedBoundReport unbalanced_bounds(const UnbalancedInputs& in);

struct HeatmapGrid {
  std::vector<double> ab_values;
  std::vector<double> delta_values;
  // cells[d][j]: log expected-error bound at delta_values[d], ab_values[j].
  std::vector<std::vector<std::optional<double>>> cells;
};

// Worst case over the corners ahat = a +- delta, bhat = b +- delta, with
// sigma2hat = sigma2, b = 0 and a = |a - b|. Corners violating the sign
// conditions are skipped; a cell with no admissible corner is empty.
HeatmapGrid bound_heatmap(double pi1, double gamma1, double gamma2, double n, double sigma2,
                          const std::vector<double>& ab_grid,
                          const std::vector<double>& delta_grid);

}  // namespace wsbm::theory
