#include "doctest.h"

#include <sstream>

#include "support.hpp"
#include "wsbm/analyze.hpp"
#include "wsbm/error.hpp"
#include "wsbm/report.hpp"

using namespace wsbm;

namespace {

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("average_networks") {
  testing::Gen g(3);
  const WeightedNetwork a(testing::random_symmetric(g, 6));
  CHECK(average_networks({a}).weights() == a.weights());

  const WeightedNetwork neg(-a.weights());
  CHECK(average_networks({a, neg}).weights().isZero());

  const WeightedNetwork b(testing::random_symmetric(g, 6)), c(testing::random_symmetric(g, 6));
  const Eigen::MatrixXd avg = average_networks({a, b, c}).weights();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(std::abs(avg(i, j) - (a(i, j) + b(i, j) + c(i, j)) / 3.0) < 1e-12);

  CHECK_THROWS_AS(average_networks({}), InvalidArgument);
  CHECK_THROWS_AS(average_networks({a, WeightedNetwork(Eigen::MatrixXd::Zero(3, 3))}), InvalidArgument);
}

TEST_CASE("analyze bookkeeping on a toy network") {
  testing::Gen g(10);
  const auto lv = testing::balanced_labels(g, 10, 2);
  const WeightedNetwork w(testing::planted_weights(g, lv, 1.0, 0.0, 0.3));
  AnalyzeOptions opts;
  opts.k_min = 2;
  opts.k_max = 3;
  opts.restarts = 3;
  const AnalyzeResult r = analyze(w, opts);
  CHECK(r.likelihood.size() == 2 * opts.methods.size());
  CHECK(r.mismatch.size() == 2 * 6);  // 4 methods, 6 pairs
  CHECK(r.overlap.empty());
  CHECK(r.db_level == 2);
  CHECK(count_lines(likelihood_csv(r)) == 1 + r.likelihood.size());
  CHECK(count_lines(mismatch_csv(r)) == 1 + r.mismatch.size());
  const std::string labels = labels_csv(r.labels);
  CHECK(count_lines(labels) == 11);
  CHECK(labels.substr(0, labels.find('\n')) ==
        "node,K2_db,K2_pl-db,K2_pl-sc,K2_sc,K3_db,K3_pl-db,K3_pl-sc,K3_sc");
}

TEST_CASE("analyze likelihood rows use the closed-form estimates") {
  testing::Gen g(11);
  const auto lv = testing::balanced_labels(g, 40, 2);
  const WeightedNetwork w(testing::planted_weights(g, lv, 1.0, 0.0, 0.5));
  AnalyzeOptions opts;
  opts.k_min = opts.k_max = 2;
  opts.methods = {"sc"};
  const AnalyzeResult r = analyze(w, opts);
  const Labeling& e = r.labels.at(2).at("sc");
  CHECK(r.likelihood[0].complete_log_likelihood ==
        complete_log_likelihood(w, e, estimate_block_params(w, e).params));
}

TEST_CASE("analyze with a reference partition") {
  testing::Gen g(12);
  const auto lv = testing::balanced_labels(g, 60, 3);
  const WeightedNetwork w(testing::planted_weights(g, lv, 3.0, 0.0, 0.5));
  AnalyzeOptions opts;
  opts.k_min = 2;
  opts.k_max = 4;
  opts.methods = {"sc", "pl-sc"};
  opts.reference = Labeling(lv, 3);
  const AnalyzeResult r = analyze(w, opts);
  int rows_at_3 = 0;
  for (const auto& e : r.overlap) {
    if (e.k != 3) continue;
    ++rows_at_3;
    CHECK(e.row.overlap == 1.0);
    CHECK(e.row.best_ref_communities == std::vector<int>{e.row.est_community});
  }
  CHECK(rows_at_3 == 6);
  CHECK(r.matched.at(3).at("sc") == Labeling(lv, 3));
  const std::string csv = overlap_csv(r);
  CHECK(csv.substr(0, csv.find('\n')) == "K,method,est,ref_list,overlap");
}

TEST_CASE("analyze argument checks") {
  const WeightedNetwork w(Eigen::MatrixXd::Zero(5, 5));
  AnalyzeOptions opts;
  opts.k_min = 3;
  opts.k_max = 2;
  CHECK_THROWS_AS(analyze(w, opts), InvalidArgument);
  opts.k_min = 2;
  opts.k_max = 6;
  CHECK_THROWS_AS(analyze(w, opts), InvalidArgument);
  opts.k_max = 3;
  opts.methods = {"louvain"};
  CHECK_THROWS_AS(analyze(w, opts), InvalidArgument);
  opts.methods = {"sc"};
  opts.reference = Labeling({1, 2}, 2);
  CHECK_THROWS_AS(analyze(w, opts), InvalidArgument);
}

TEST_CASE("overlap_rows_csv format") {
  std::vector<OverlapRow> rows{{1, {1, 3}, 0.4}, {2, {2}, 1.0}, {3, {}, std::nullopt}};
  CHECK(overlap_rows_csv(rows) == "est,ref_list,overlap\n1,1 3,0.4\n2,2,1\n3,,NA\n");
}

TEST_CASE("report serializers") {
  SUBCASE("fit result fields") {
    testing::Gen g(2);
    const auto lv = testing::balanced_labels(g, 30, 2);
    const WeightedNetwork w(testing::planted_weights(g, lv, 2.0, 0.0, 0.5));
    const FitResult fit = pl_fit(w, Labeling(lv, 2), 2);
    const auto j = report::fit_result_json(fit);
    for (const char* key : {"labels", "pi", "B", "Sigma", "P", "Lambda", "pll_trace", "inner_iters",
                            "converged", "flags", "wall_seconds"})
      CHECK(j.contains(key));
    CHECK(j["labels"].size() == 30);
    CHECK(j["B"].size() == 2);
    CHECK(j["B"][0].size() == 2);
    CHECK(j["labels"][0].get<int>() == fit.labels[0]);
  }
  SUBCASE("not-applicable values are null") {
    const auto b = report::balanced_json(theory::balanced_bounds(2, 100, 1, 0, 1, 1.0));
    CHECK(b["entropy_h"].is_null());
    CHECK(b["c_n_gamma"].is_null());
    const auto u = report::unbalanced_json(
        theory::unbalanced_bounds({0.5, 0.5, 0.5, 0.5, 1, 0, 1, 1, 0, 1, 100}));
    CHECK(u["expected_error_bound"].is_null());
  }
  SUBCASE("loss permutation is 1-based") {
    const auto j = report::loss_json(misclassification_report(Labeling({2, 2, 1}, 2), Labeling({1, 1, 2}, 2)));
    CHECK(j["loss"].get<double>() == 0.0);
    CHECK(j["permutation"] == nlohmann::json::array({2, 1}));
  }
  SUBCASE("heatmap CSV") {
    theory::HeatmapGrid g{{0.5, 1.0}, {0.0, 0.1}, {{-2.0, -8.0}, {std::nullopt, -7.5}}};
    CHECK(report::heatmap_csv(g) == "delta,0.5,1\n0,-2,-8\n0.1,NA,-7.5\n");
  }
}
