#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wsbm/model.hpp"

namespace wsbm::io {

// n rows of n comma-separated floats, no header.
Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

// "i<TAB>j<TAB>w" lines with 0-based ids. Unlisted pairs are 0. A repeated
// pair (in either orientation) must carry the same value.
WeightedNetwork read_edge_list(const std::string& path, int n = 0);

// Dispatches on extension: .tsv / .edges / .edgelist are edge lists, anything
// else a dense CSV matrix. Dense input is symmetrized within `sym_tol`.
WeightedNetwork read_network(const std::string& path, double sym_tol = 1e-9);

// One 1-based integer per line. If k == 0 the community count is the max label.
Labeling read_labels(const std::string& path, int k = 0);
void write_labels(const std::string& path, const Labeling& labels);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace wsbm::io
