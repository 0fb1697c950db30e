#include "wsbm/eval.hpp"

#include <cmath>
#include <limits>

#include "wsbm/error.hpp"

namespace wsbm {

namespace {

// Shortest augmenting path (potentials) solver on an n x n matrix.
// Returns the optimal column for each row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j]) col[p[j] - 1] = j - 1;
  return col;
}

double assignment_cost(const Eigen::MatrixXd& a, const std::vector<int>& col) {
  double c = 0.0;
  for (std::size_t i = 0; i < col.size(); ++i) c += a(static_cast<Eigen::Index>(i), col[i]);
  return c;
}

// Cost matrix with row r and column c removed.
Eigen::MatrixXd minor_of(const Eigen::MatrixXd& a, int r, int c) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd m(n - 1, n - 1);
  for (Eigen::Index i = 0, ii = 0; i < n; ++i) {
    if (i == r) continue;
    for (Eigen::Index j = 0, jj = 0; j < n; ++j) {
      if (j == c) continue;
      m(ii, jj++) = a(i, j);
    }
    ++ii;
  }
  return m;
}

double optimal_cost(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  return assignment_cost(a, solve_assignment(a));
}

}  // namespace

Assignment hungarian_match(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw InvalidArgument("assignment cost matrix must be square");
  if (!cost.allFinite()) throw InvalidArgument("assignment cost matrix has non-finite entries");
  const int n = static_cast<int>(cost.rows());
  Assignment out;
  if (n == 0) return out;
  const double best = optimal_cost(cost);
  const double tol = 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff() * n);

  // Fix rows in order, taking the smallest column that still admits an
  // optimal completion.
  Eigen::MatrixXd rest = cost;
  std::vector<int> free_cols(n);
  for (int j = 0; j < n; ++j) free_cols[j] = j;
  double spent = 0.0;
  out.col_for_row.reserve(n);
  for (int row = 0; row < n; ++row) {
    const int m = static_cast<int>(rest.rows());
    int pick = -1;
    for (int j = 0; j < m; ++j) {
      const Eigen::MatrixXd sub = minor_of(rest, 0, j);
      if (spent + rest(0, j) + optimal_cost(sub) <= best + tol) {
        pick = j;
        break;
      }
    }
    if (pick < 0) pick = solve_assignment(rest)[0];
    spent += rest(0, pick);
    out.col_for_row.push_back(free_cols[pick]);
    free_cols.erase(free_cols.begin() + pick);
    rest = minor_of(rest, 0, pick);
  }
  out.cost = assignment_cost(cost, out.col_for_row);
  return out;
}

Eigen::MatrixXd agreement_counts(const Labeling& chat, const Labeling& c) {
  if (chat.size() != c.size())
    throw InvalidArgument("labelings differ in length (" + std::to_string(chat.size()) + " vs " +
                          std::to_string(c.size()) + ")");
  const int k = std::max(chat.k(), c.k());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < chat.size(); ++i) a(chat.index(i), c.index(i)) += 1.0;
  return a;
}

LossReport misclassification_report(const Labeling& chat, const Labeling& c) {
  LossReport out;
  out.confusion_counts = agreement_counts(chat, c);
  const Assignment match = hungarian_match(-out.confusion_counts);
  out.permutation = match.col_for_row;
  const double agree = -match.cost;
  out.loss = (chat.size() - agree) / static_cast<double>(chat.size());
  return out;
}

double misclassification_loss(const Labeling& chat, const Labeling& c) {
  return misclassification_report(chat, c).loss;
}

double mismatch_proportion(const Labeling& e1, const Labeling& e2) {
  return misclassification_loss(e1, e2);
}

Labeling match_to_reference(const Labeling& est, const Labeling& ref) {
  const LossReport rep = misclassification_report(est, ref);
  const int k = static_cast<int>(rep.permutation.size());
  std::vector<int> labels(est.size());
  for (int i = 0; i < est.size(); ++i) labels[i] = rep.permutation[est.index(i)] + 1;
  return Labeling(std::move(labels), k);
}

std::vector<OverlapRow> overlap_table(const Labeling& est, const Labeling& ref) {
  if (est.size() != ref.size()) throw InvalidArgument("labelings differ in length");
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(est.k(), ref.k());
  for (int i = 0; i < est.size(); ++i) counts(est.index(i), ref.index(i)) += 1.0;
  std::vector<OverlapRow> rows;
  rows.reserve(est.k());
  for (int k = 0; k < est.k(); ++k) {
    OverlapRow row;
    row.est_community = k + 1;
    const double size = counts.row(k).sum();
    if (size > 0) {
      const double top = counts.row(k).maxCoeff();
      for (int l = 0; l < ref.k(); ++l)
        if (counts(k, l) == top) row.best_ref_communities.push_back(l + 1);
      row.overlap = top / size;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace wsbm
