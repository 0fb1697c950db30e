#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "wsbm/pl_core.hpp"

namespace wsbm {

enum class GeneratorKind { kGaussian, kHeavyTail, kBimodal };

struct ExperimentConfig {
  std::vector<int> n{500};
  int k = 3;
  std::vector<double> pi;  // empty: balanced
  // (a, b) pairs; a bare number x in JSON means (x, 0).
  std::vector<std::pair<double, double>> signal{{0.1, 0.0}};
  double sigma2 = 1.0;
  GeneratorKind generator = GeneratorKind::kGaussian;
  // alpha values (heavy tail) or b_param values (bimodal); replaces the signal grid.
  std::vector<double> generator_values;
  std::vector<std::string> methods{"oracle:0.7"};
  FitOptions fit;
  int restarts = 20;
  int replications = 100;
  std::uint64_t master_seed = 1;
  bool fixed_counts = false;
  int workers = 0;  // 0: hardware concurrency
  std::string out;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

struct SweepCell {
  int n = 0;
  double a = 0.0, b = 0.0;
  double gen_param = 0.0;  // alpha or b_param; 0 for Gaussian cells
};

struct SweepRow {
  SweepCell cell;
  std::string method;
  double mean_loss = 0.0;
  double se_loss = 0.0;
  double mean_seconds = 0.0;  // fit only for PL rows, initializer for raw rows
  int replications = 0;
  int failed = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<std::string> row_methods;  // per cell, in output order
  std::vector<SweepRow> rows;
  // losses[row][rep]; NaN marks a failed replication.
  std::vector<std::vector<double>> losses;
};

std::vector<SweepCell> sweep_cells(const ExperimentConfig& c);

SweepResult run_sweep(const ExperimentConfig& config);

// Deterministic tables (byte-identical for a fixed config and seed).
std::string summary_csv(const SweepResult& r, GeneratorKind kind);
std::string replications_csv(const SweepResult& r);
// Wall-clock timings; not reproducible by nature.
std::string timing_csv(const SweepResult& r);

}  // namespace wsbm
