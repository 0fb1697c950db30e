#pragma once

#include <string>

#include "json.hpp"
#include "wsbm/eval.hpp"
#include "wsbm/pl_core.hpp"
#include "wsbm/theory.hpp"

namespace wsbm::report {

// labels (1-based), pi, B, Sigma, P, Lambda (row-major nested arrays),
// pll_trace, inner_iters, converged, flags, wall_seconds.
nlohmann::json fit_result_json(const FitResult& r);

nlohmann::json balanced_json(const theory::BalancedBoundReport& r);
nlohmann::json unbalanced_json(const theory::UnbalancedBoundReport& r);

// {loss, permutation (1-based), confusion_counts}
nlohmann::json loss_json(const LossReport& r);

// Header row "delta" followed by the |a-b| values; one row per delta; NA for
// cells without an admissible bound.
std::string heatmap_csv(const theory::HeatmapGrid& g);

nlohmann::json matrix_json(const Eigen::MatrixXd& m);

}  // namespace wsbm::report
