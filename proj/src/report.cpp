#include "wsbm/report.hpp"

#include <sstream>

#include "wsbm/io.hpp"

namespace wsbm::report {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json fit_result_json(const FitResult& r) {
  json j;
  j["labels"] = r.labels.values();
  j["pi"] = std::vector<double>(r.block_params.pi.data(),
                                r.block_params.pi.data() + r.block_params.pi.size());
  j["B"] = matrix_json(r.block_params.b_mean);
  j["Sigma"] = matrix_json(r.block_params.sigma2);
  j["P"] = matrix_json(r.mixture_params.p_mean);
  j["Lambda"] = matrix_json(r.mixture_params.lambda_var);
  j["mixture_pi"] = std::vector<double>(r.mixture_params.pi.data(),
                                        r.mixture_params.pi.data() + r.mixture_params.pi.size());
  j["pll_trace"] = r.pll_trace;
  j["inner_iters"] = r.inner_iters;
  j["converged"] = r.converged;
  j["flags"] = r.flags;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

json balanced_json(const theory::BalancedBoundReport& r) {
  return json{{"K", r.k},
              {"n", r.n},
              {"a", r.a},
              {"b", r.b},
              {"sigma2", r.sigma2},
              {"gamma", r.gamma},
              {"entropy_h", opt(r.entropy_h)},
              {"kappa", opt(r.kappa)},
              {"c_n_gamma", opt(r.c_n_gamma)},
              {"condition_lhs", r.condition_lhs},
              {"condition_holds", r.condition_holds},
              {"expected_error_bound", r.expected_error_bound},
              {"prob_threshold", r.prob_threshold},
              {"prob_rhs", opt(r.prob_rhs)},
              {"xu_lower_bound_leading_order", r.xu_lower_bound}};
}

json unbalanced_json(const theory::UnbalancedBoundReport& r) {
  const auto& in = r.in;
  return json{{"pi", {in.pi1, in.pi2}},
              {"gamma", {in.gamma1, in.gamma2}},
              {"a", in.a},
              {"b", in.b},
              {"sigma2", in.sigma2},
              {"ahat", in.ahat},
              {"bhat", in.bhat},
              {"sigma2hat", in.sigma2hat},
              {"n", in.n},
              {"pi_tilde", {r.pi_tilde1, r.pi_tilde2}},
              {"beta1", r.beta1},
              {"beta2", r.beta2},
              {"tau2", r.tau2},
              {"f_ab", r.f_ab},
              {"f_ba", r.f_ba},
              {"t1", r.t1},
              {"t2", r.t2},
              {"sign_conditions_hold", r.sign_conditions_hold},
              {"degenerate_tau", r.degenerate_tau},
              {"bound_comm1", opt(r.bound_comm1)},
              {"bound_comm2", opt(r.bound_comm2)},
              {"expected_error_bound", opt(r.expected_error_bound)},
              {"c1_gamma_pi", r.c1_gamma_pi},
              {"c2_gamma_pi", r.c2_gamma_pi}};
}

json loss_json(const LossReport& r) {
  std::vector<int> perm(r.permutation.begin(), r.permutation.end());
  for (int& p : perm) ++p;
  return json{{"loss", r.loss}, {"permutation", perm}, {"confusion_counts", matrix_json(r.confusion_counts)}};
}

std::string heatmap_csv(const theory::HeatmapGrid& g) {
  std::ostringstream s;
  s << "delta";
  for (double ab : g.ab_values) s << ',' << io::format_double(ab);
  s << '\n';
  for (std::size_t d = 0; d < g.delta_values.size(); ++d) {
    s << io::format_double(g.delta_values[d]);
    for (const auto& cell : g.cells[d]) s << ',' << (cell ? io::format_double(*cell) : "NA");
    s << '\n';
  }
  return s.str();
}

}  // namespace wsbm::report
