#include "wsbm/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wsbm/error.hpp"
#include "wsbm/pl_core.hpp"
#include "wsbm/rng.hpp"

namespace wsbm {

namespace {

constexpr int kMaxLloydIters = 300;
constexpr double kLloydRelTol = 1e-8;

std::vector<int> nearest_centers(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers,
                                 Eigen::VectorXd& dist) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = centers.rows();
  std::vector<int> assign(n, 0);
  dist.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < k; ++c) {
      const double d = (x.row(i) - centers.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    assign[i] = arg;
    dist(i) = best;
  }
  return assign;
}

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.row(0) = x.row(pick(rng));
  Eigen::VectorXd d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double target = u(rng);
      double acc = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers) {
  const Eigen::Index n = x.rows();
  const int k = static_cast<int>(centers.rows());
  KMeansResult out;
  Eigen::VectorXd dist;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 1;; ++it) {
    out.assignment = nearest_centers(x, centers, dist);
    // Reseed empty clusters from the farthest points.
    std::vector<int> size(k, 0);
    for (int a : out.assignment) ++size[a];
    for (int c = 0; c < k; ++c) {
      if (size[c] > 0) continue;
      Eigen::Index far = 0;
      dist.maxCoeff(&far);
      --size[out.assignment[far]];
      out.assignment[far] = c;
      ++size[c];
      dist(far) = 0.0;
      centers.row(c) = x.row(far);
    }
    const double inertia = dist.sum();
    out.inertia = inertia;
    out.iterations = it;
    if (it >= kMaxLloydIters || (it > 1 && std::abs(prev - inertia) <= kLloydRelTol * std::max(prev, 1e-300)) ||
        inertia == 0.0)
      break;
    prev = inertia;
    centers.setZero();
    for (Eigen::Index i = 0; i < n; ++i) centers.row(out.assignment[i]) += x.row(i);
    for (int c = 0; c < k; ++c) centers.row(c) /= static_cast<double>(size[c]);
  }
  return out;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts, std::uint64_t seed) {
  if (k < 1 || k > points.rows()) throw InvalidArgument("k-means needs 1 <= k <= number of points");
  if (restarts < 1) throw InvalidArgument("k-means needs at least one restart");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    KMeansResult cur = lloyd(points, plus_plus_seeds(points, k, rng));
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

Labeling spectral_init_from(const EigenPairs& eig, int n, int k, int restarts, std::uint64_t seed) {
  if (k == 1) return Labeling(std::vector<int>(n, 1), 1);
  if (eig.vectors.cols() < k || eig.vectors.rows() != n)
    throw InvalidArgument("eigen decomposition has too few columns");
  const KMeansResult km = kmeans(eig.vectors.leftCols(k), k, restarts, seed);
  return Labeling::from_zero_based(km.assignment, k);
}

Labeling spectral_init(const WeightedNetwork& w, int k, int restarts, std::uint64_t seed) {
  if (k < 1 || k > w.n()) throw InvalidArgument("K must lie in 1..n");
  if (k == 1) return Labeling(std::vector<int>(w.n(), 1), 1);
  return spectral_init_from(top_abs_eigenpairs(w.weights(), k), w.n(), k, restarts, seed);
}

int db_auto_level(int n) {
  if (n < 16) return 2;  // ln ln n is tiny or undefined
  const double ll = std::log(std::log(static_cast<double>(n)));
  return std::max(2, static_cast<int>(std::floor(0.4 * std::pow(ll, 4))));
}

Discretized discretize_weights(const WeightedNetwork& w, int level) {
  if (level < 2) throw InvalidArgument("discretization level must be at least 2");
  const int n = w.n();
  const Eigen::MatrixXd& m = w.weights();
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) vals.push_back(m(i, j));
  if (vals.empty()) throw InvalidArgument("network has no edges to discretize");
  std::sort(vals.begin(), vals.end());
  std::vector<double> distinct = vals;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  Discretized out;
  std::vector<double> cuts;  // value v belongs to bin #(cuts <= v)
  if (static_cast<int>(distinct.size()) <= level) {
    out.reduced = static_cast<int>(distinct.size()) < level;
    cuts.assign(distinct.begin() + 1, distinct.end());
  } else {
    const std::size_t total = vals.size();
    for (int l = 1; l < level; ++l) {
      const double c = vals[total * static_cast<std::size_t>(l) / static_cast<std::size_t>(level)];
      if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
    }
  }
  if (cuts.empty() || static_cast<int>(cuts.size()) + 1 < 2)
    throw InvalidArgument("fewer than two distinct weights; cannot discretize");

  const int bins = static_cast<int>(cuts.size()) + 1;
  auto bin_of = [&](double v) {
    return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
  };
  std::vector<double> lo(bins, std::numeric_limits<double>::infinity());
  std::vector<double> hi(bins, -std::numeric_limits<double>::infinity());
  for (double v : vals) {
    const int b = bin_of(v);
    lo[b] = std::min(lo[b], v);
    hi[b] = std::max(hi[b], v);
  }
  out.midpoints.resize(bins);
  for (int b = 0; b < bins; ++b) out.midpoints[b] = 0.5 * (lo[b] + hi[b]);
  out.level = bins;
  if (out.level < 2) throw InvalidArgument("discretization produced fewer than two levels");
  out.recoded = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      const double v = out.midpoints[bin_of(m(i, j))];
      out.recoded(i, j) = v;
      out.recoded(j, i) = v;
    }
  }
  return out;
}

DbResult db_init(const WeightedNetwork& w, int k, std::optional<int> level, int restarts,
                 std::uint64_t seed) {
  const int requested = level.value_or(db_auto_level(w.n()));
  Discretized disc = discretize_weights(w, requested);
  const WeightedNetwork recoded(std::move(disc.recoded));
  return DbResult{spectral_init(recoded, k, restarts, seed), disc.level, disc.reduced};
}

OracleResult oracle_init(const Labeling& c, const OracleSpec& spec, std::uint64_t seed) {
  const int k = c.k();
  std::vector<double> gamma = spec.gamma;
  if (gamma.size() == 1) gamma.assign(k, gamma.front());
  if (static_cast<int>(gamma.size()) != k)
    throw InvalidArgument("oracle needs one match proportion or one per community");
  for (double g : gamma)
    if (!(g > 0.0 && g <= 1.0)) throw InvalidArgument("match proportions must lie in (0,1]");

  Rng rng = make_rng(seed);
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < c.size(); ++i) members[c.index(i)].push_back(i);

  std::vector<int> idx(c.size());
  for (int i = 0; i < c.size(); ++i) idx[i] = c.index(i);
  for (int comm = 0; comm < k; ++comm) {
    auto& mem = members[comm];
    std::shuffle(mem.begin(), mem.end(), rng);
    const int size = static_cast<int>(mem.size());
    const int keep = std::clamp(static_cast<int>(std::lround(gamma[comm] * size)), 0, size);
    const int wrong = size - keep;
    if (wrong == 0) continue;
    if (k == 1) continue;
    std::vector<int> targets;
    for (int step = 1; step < k; ++step) targets.push_back((comm + step) % k);
    std::vector<int> quota(targets.size(), 0);
    if (spec.mode == OracleMode::kBalancedSpread) {
      const std::vector<double> equal(targets.size(), 1.0);
      quota = apportion(wrong, equal);
    } else {
      quota[0] = wrong;
    }
    int pos = keep;
    for (std::size_t t = 0; t < targets.size(); ++t)
      for (int q = 0; q < quota[t]; ++q) idx[mem[pos++]] = targets[t];
  }
  Labeling e = Labeling::from_zero_based(idx, k);
  Eigen::MatrixXd realized = confusion_matrix(e, c).r;
  return OracleResult{std::move(e), std::move(realized)};
}

std::string InitMethod::name() const {
  switch (kind) {
    case Kind::kSpectral:
      return "SC";
    case Kind::kDb:
      return level ? "DB(" + std::to_string(*level) + ")" : "DB";
    case Kind::kOracle: {
      std::ostringstream s;
      s << "oracle(";
      for (std::size_t i = 0; i < gamma.size(); ++i) s << (i ? "," : "") << gamma[i];
      s << ")";
      return s.str();
    }
    case Kind::kLabels:
      return "labels";
  }
  return text;
}

InitMethod parse_init_method(const std::string& text) {
  InitMethod m;
  m.text = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "spectral" || head == "sc") {
    if (!rest.empty()) throw InvalidArgument("spectral initializer takes no argument");
    m.kind = InitMethod::Kind::kSpectral;
  } else if (head == "db") {
    m.kind = InitMethod::Kind::kDb;
    if (!rest.empty()) {
      std::size_t used = 0;
      int level = 0;
      try {
        level = std::stoi(rest, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != rest.size() || level < 2) throw InvalidArgument("bad discretization level in '" + text + "'");
      m.level = level;
    }
  } else if (head == "oracle") {
    m.kind = InitMethod::Kind::kOracle;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      double g = 0.0;
      try {
        g = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !(g > 0.0 && g <= 1.0))
        throw InvalidArgument("bad match proportion in '" + text + "'");
      m.gamma.push_back(g);
    }
    if (m.gamma.empty()) throw InvalidArgument("oracle initializer needs at least one proportion");
  } else if (head == "labels") {
    m.kind = InitMethod::Kind::kLabels;
    if (rest.empty()) throw InvalidArgument("labels initializer needs a file");
    m.path = rest;
  } else {
    throw InvalidArgument("unknown initializer '" + text + "'");
  }
  return m;
}

}  // namespace wsbm
