#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsbm/eval.hpp"
#include "wsbm/pl_core.hpp"

namespace wsbm {

// Entrywise mean of equally sized networks.
WeightedNetwork average_networks(const std::vector<WeightedNetwork>& nets);

struct AnalyzeOptions {
  int k_min = 2;
  int k_max = 20;
  // Any of "sc", "db", "pl-sc", "pl-db".
  std::vector<std::string> methods{"sc", "db", "pl-sc", "pl-db"};
  std::optional<Labeling> reference;
  std::optional<int> db_level;
  int restarts = 20;
  std::uint64_t seed = 1;
  FitOptions fit;
};

struct LikelihoodRow {
  int k = 0;
  std::string method;
  double complete_log_likelihood = 0.0;
};

struct MismatchRow {
  int k = 0;
  std::string method_a, method_b;
  double proportion = 0.0;
};

struct OverlapEntry {
  int k = 0;
  std::string method;
  OverlapRow row;
};

struct AnalyzeResult {
  std::vector<LikelihoodRow> likelihood;
  std::vector<MismatchRow> mismatch;
  std::vector<OverlapEntry> overlap;
  // labels[k][method]; matched[k][method] holds the reference-aligned relabeling.
  std::map<int, std::map<std::string, Labeling>> labels;
  std::map<int, std::map<std::string, Labeling>> matched;
  int db_level = 0;
};

AnalyzeResult analyze(const WeightedNetwork& w, const AnalyzeOptions& opts);

std::string likelihood_csv(const AnalyzeResult& r);
std::string mismatch_csv(const AnalyzeResult& r);
std::string overlap_csv(const AnalyzeResult& r);
// Header K_method columns, one row per node.
std::string labels_csv(const std::map<int, std::map<std::string, Labeling>>& labels);

// est,ref_list,overlap with ref_list space-separated and NA for empty communities.
std::string overlap_rows_csv(const std::vector<OverlapRow>& rows);

}  // namespace wsbm
