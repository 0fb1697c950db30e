#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wsbm/model.hpp"

namespace wsbm {

struct EigenPairs {
  Eigen::VectorXd values;   // sorted by |value| descending
  Eigen::MatrixXd vectors;  // one column per value
};

// The k eigenpairs of a symmetric matrix with the largest |eigenvalue|.
// Ties in |value| prefer the positive eigenvalue. Throws NumericalError on
// LAPACK failure.
EigenPairs top_abs_eigenpairs(const Eigen::MatrixXd& m, int k);

struct KMeansResult {
  std::vector<int> assignment;  // 0-based cluster per row
  double inertia = 0.0;
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding; best of `restarts` starts.
// Stops at relative inertia change < 1e-8 or 300 iterations. Empty clusters are
// reseeded from the point farthest from its centroid.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts, std::uint64_t seed);

inline constexpr int kDefaultRestarts = 20;

// k-means on the rows of the top-K (by |eigenvalue|) eigenvectors of W.
Labeling spectral_init(const WeightedNetwork& w, int k, int restarts, std::uint64_t seed);

// Same, reusing a precomputed decomposition with at least k columns.
Labeling spectral_init_from(const EigenPairs& eig, int n, int k, int restarts, std::uint64_t seed);

// max(2, floor(0.4 (ln ln n)^4))
int db_auto_level(int n);

struct Discretized {
  Eigen::MatrixXd recoded;  // sum_l m_l A^(l)
  int level = 0;            // bins actually used
  bool reduced = false;     // fewer distinct weights than requested bins
  std::vector<double> midpoints;
};

// Equal-frequency binning of the off-diagonal weights; ties never straddle a
// bin boundary. Each entry is replaced by its bin midpoint, the mean of the
// smallest and largest weight in the bin.
Discretized discretize_weights(const WeightedNetwork& w, int level);

struct DbResult {
  Labeling labels;
  int level = 0;
  bool reduced = false;
};

DbResult db_init(const WeightedNetwork& w, int k, std::optional<int> level, int restarts,
                 std::uint64_t seed);

enum class OracleMode { kBalancedSpread, kPairwiseSwap };

struct OracleSpec {
  std::vector<double> gamma;  // per-community match proportion in (0, 1]
  OracleMode mode = OracleMode::kBalancedSpread;
};

struct OracleResult {
  Labeling labels;
  Eigen::MatrixXd realized_confusion;  // rows: produced labels, cols: truth
};

// Corrupted truth: keeps round(gamma_k n_k) random members of community k.
// The rest go evenly to the other K-1 labels (balanced spread) or all to the
// next label cyclically (pairwise swap).
OracleResult oracle_init(const Labeling& c, const OracleSpec& spec, std::uint64_t seed);

// Parsed form of the initializer strings "spectral", "db[:L]",
// "oracle:<g>[,<g>...]" and "labels:<file>".
struct InitMethod {
  enum class Kind { kSpectral, kDb, kOracle, kLabels };
  Kind kind = Kind::kSpectral;
  std::optional<int> level;
  std::vector<double> gamma;
  std::string path;
  std::string text;

  // Short name for tables: SC, DB, oracle(0.7), labels.
  std::string name() const;
};

InitMethod parse_init_method(const std::string& text);

}  // namespace wsbm
