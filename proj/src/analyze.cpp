#include "wsbm/analyze.hpp"

#include <algorithm>
#include <sstream>

#include "wsbm/error.hpp"
#include "wsbm/init.hpp"
#include "wsbm/io.hpp"
#include "wsbm/rng.hpp"

namespace wsbm {

WeightedNetwork average_networks(const std::vector<WeightedNetwork>& nets) {
  if (nets.empty()) throw InvalidArgument("no networks to average");
  const int n = nets.front().n();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const auto& w : nets) {
    if (w.n() != n)
      throw InvalidArgument("network sizes differ (" + std::to_string(w.n()) + " vs " +
                            std::to_string(n) + ")");
    sum += w.weights();
  }
  sum /= static_cast<double>(nets.size());
  return WeightedNetwork::symmetrized(sum, 0.0);
}

namespace {

std::string join_ids(const std::vector<int>& ids) {
  std::ostringstream s;
  for (std::size_t i = 0; i < ids.size(); ++i) s << (i ? " " : "") << ids[i];
  return s.str();
}

}  // namespace

AnalyzeResult analyze(const WeightedNetwork& w, const AnalyzeOptions& opts) {
  if (opts.k_min < 1 || opts.k_max < opts.k_min || opts.k_max > w.n())
    throw InvalidArgument("K range must satisfy 1 <= k_min <= k_max <= n");
  if (opts.methods.empty()) throw InvalidArgument("no analysis methods");
  for (const auto& m : opts.methods)
    if (m != "sc" && m != "db" && m != "pl-sc" && m != "pl-db")
      throw InvalidArgument("unknown analysis method '" + m + "'");
  if (opts.reference && opts.reference->size() != w.n())
    throw InvalidArgument("reference labeling length does not match the network");

  auto wants = [&](const std::string& m) {
    return std::find(opts.methods.begin(), opts.methods.end(), m) != opts.methods.end();
  };
  const bool need_sc = wants("sc") || wants("pl-sc");
  const bool need_db = wants("db") || wants("pl-db");

  AnalyzeResult out;
  const int n = w.n();
  EigenPairs sc_eig, db_eig;
  if (need_sc && opts.k_max > 1) sc_eig = top_abs_eigenpairs(w.weights(), opts.k_max);
  if (need_db) {
    const int requested = opts.db_level.value_or(db_auto_level(n));
    Discretized disc = discretize_weights(w, requested);
    out.db_level = disc.level;
    if (opts.k_max > 1) db_eig = top_abs_eigenpairs(disc.recoded, opts.k_max);
  }

  for (int k = opts.k_min; k <= opts.k_max; ++k) {
    const std::uint64_t kseed = derive_seed(opts.seed, static_cast<std::uint64_t>(k));
    std::map<std::string, Labeling> found;
    if (need_sc) found["sc"] = spectral_init_from(sc_eig, n, k, opts.restarts, derive_seed(kseed, 1));
    if (need_db) found["db"] = spectral_init_from(db_eig, n, k, opts.restarts, derive_seed(kseed, 2));
    if (wants("pl-sc")) found["pl-sc"] = pl_fit(w, found.at("sc"), k, opts.fit).labels;
    if (wants("pl-db")) found["pl-db"] = pl_fit(w, found.at("db"), k, opts.fit).labels;

    for (const auto& m : opts.methods) {
      const Labeling& e = found.at(m);
      const BlockParams est = estimate_block_params(w, e).params;
      out.likelihood.push_back({k, m, complete_log_likelihood(w, e, est)});
      out.labels[k][m] = e;
    }
    for (std::size_t a = 0; a < opts.methods.size(); ++a)
      for (std::size_t b = a + 1; b < opts.methods.size(); ++b)
        out.mismatch.push_back({k, opts.methods[a], opts.methods[b],
                                mismatch_proportion(found.at(opts.methods[a]), found.at(opts.methods[b]))});
    if (opts.reference) {
      for (const auto& m : opts.methods) {
        const Labeling matched = match_to_reference(found.at(m), *opts.reference);
        out.matched[k][m] = matched;
        for (auto& row : overlap_table(matched, *opts.reference)) {
          if (!row.overlap && matched.k() > k) continue;  // padding community
          out.overlap.push_back({k, m, std::move(row)});
        }
      }
    }
  }
  return out;
}

std::string likelihood_csv(const AnalyzeResult& r) {
  std::ostringstream s;
  s << "K,method,complete_log_likelihood\n";
  for (const auto& row : r.likelihood)
    s << row.k << ',' << row.method << ',' << io::format_double(row.complete_log_likelihood) << '\n';
  return s.str();
}

std::string mismatch_csv(const AnalyzeResult& r) {
  std::ostringstream s;
  s << "K,method_a,method_b,mismatch\n";
  for (const auto& row : r.mismatch)
    s << row.k << ',' << row.method_a << ',' << row.method_b << ','
      << io::format_double(row.proportion) << '\n';
  return s.str();
}

std::string overlap_csv(const AnalyzeResult& r) {
  std::ostringstream s;
  s << "K,method,est,ref_list,overlap\n";
  for (const auto& e : r.overlap)
    s << e.k << ',' << e.method << ',' << e.row.est_community << ','
      << join_ids(e.row.best_ref_communities) << ','
      << (e.row.overlap ? io::format_double(*e.row.overlap) : "NA") << '\n';
  return s.str();
}

std::string overlap_rows_csv(const std::vector<OverlapRow>& rows) {
  std::ostringstream s;
  s << "est,ref_list,overlap\n";
  for (const auto& row : rows)
    s << row.est_community << ',' << join_ids(row.best_ref_communities) << ','
      << (row.overlap ? io::format_double(*row.overlap) : "NA") << '\n';
  return s.str();
}

std::string labels_csv(const std::map<int, std::map<std::string, Labeling>>& labels) {
  std::ostringstream s;
  std::vector<const Labeling*> cols;
  s << "node";
  for (const auto& [k, by_method] : labels)
    for (const auto& [m, l] : by_method) {
      s << ",K" << k << '_' << m;
      cols.push_back(&l);
    }
  s << '\n';
  if (cols.empty()) return s.str();
  const int n = cols.front()->size();
  for (int i = 0; i < n; ++i) {
    s << i;
    for (const Labeling* l : cols) s << ',' << (*l)[i];
    s << '\n';
  }
  return s.str();
}

}  // namespace wsbm
