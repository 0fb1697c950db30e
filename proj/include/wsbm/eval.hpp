#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wsbm/model.hpp"

namespace wsbm {

struct Assignment {
  std::vector<int> col_for_row;  // 0-based column assigned to each row
  double cost = 0.0;
};

// Minimum-cost perfect assignment on a square matrix. Among optimal
// assignments, returns the lexicographically smallest col_for_row.
Assignment hungarian_match(const Eigen::MatrixXd& cost);

// agreement(k, l) = #{i : chat_i = k, c_i = l}, padded with zeros to square.
Eigen::MatrixXd agreement_counts(const Labeling& chat, const Labeling& c);

struct LossReport {
  double loss = 0.0;
  // permutation[k] = reference community (0-based) matched to estimated community k.
  std::vector<int> permutation;
  Eigen::MatrixXd confusion_counts;
};

LossReport misclassification_report(const Labeling& chat, const Labeling& c);

// Fraction of mislabeled nodes, minimized over label permutations.
double misclassification_loss(const Labeling& chat, const Labeling& c);

double mismatch_proportion(const Labeling& e1, const Labeling& e2);

// Relabels est so that its communities carry the ids of their matched
// reference communities (Hungarian on agreement counts). K of the result is
// max(K_est, K_ref).
Labeling match_to_reference(const Labeling& est, const Labeling& ref);

struct OverlapRow {
  int est_community = 0;                  // 1-based
  std::vector<int> best_ref_communities;  // 1-based
  std::optional<double> overlap;          // empty for an empty estimated community
};

std::vector<OverlapRow> overlap_table(const Labeling& est, const Labeling& ref);

}  // namespace wsbm
