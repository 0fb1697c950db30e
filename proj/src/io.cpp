#include "wsbm/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "wsbm/error.hpp"

namespace wsbm::io {

namespace {

double parse_double(std::string_view tok, const std::string& where) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw InvalidArgument(where + ": cannot parse number '" + std::string(tok) + "'");
  return v;
}

long parse_int(std::string_view tok, const std::string& where) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw InvalidArgument(where + ": cannot parse integer '" + std::string(tok) + "'");
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<double> row;
    std::string_view sv(line);
    const std::string where = path + ":" + std::to_string(lineno);
    for (;;) {
      const auto comma = sv.find(',');
      row.push_back(parse_double(sv.substr(0, comma), where));
      if (comma == std::string_view::npos) break;
      sv.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw InvalidArgument(path + ": empty matrix file");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw InvalidArgument(path + ": row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(n));
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  write_text(path, out.str());
}

WeightedNetwork read_edge_list(const std::string& path, int n) {
  auto in = open_in(path);
  std::map<std::pair<long, long>, double> edges;
  long max_id = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    std::vector<std::string_view> tok;
    std::string_view sv(line);
    for (;;) {
      const auto tab = sv.find('\t');
      tok.push_back(sv.substr(0, tab));
      if (tab == std::string_view::npos) break;
      sv.remove_prefix(tab + 1);
    }
    if (tok.size() != 3) throw InvalidArgument(where + ": expected i<TAB>j<TAB>w");
    const long i = parse_int(tok[0], where);
    const long j = parse_int(tok[1], where);
    const double w = parse_double(tok[2], where);
    if (i < 0 || j < 0) throw InvalidArgument(where + ": negative node id");
    if (i == j) {
      if (w != 0.0) throw InvalidArgument(where + ": nonzero self-loop weight");
      max_id = std::max(max_id, i);
      continue;
    }
    const auto key = std::minmax(i, j);
    auto [it, inserted] = edges.emplace(key, w);
    if (!inserted) {
      if (it->second != w)
        throw InvalidArgument(where + ": conflicting duplicate weight for pair (" +
                              std::to_string(key.first) + "," + std::to_string(key.second) + ")");
      it->second = w;
    }
    max_id = std::max({max_id, i, j});
  }
  const long size = n > 0 ? n : max_id + 1;
  if (size <= 0) throw InvalidArgument(path + ": empty edge list");
  if (max_id >= size) throw InvalidArgument(path + ": node id exceeds declared node count");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (const auto& [key, w] : edges) {
    m(key.first, key.second) = w;
    m(key.second, key.first) = w;
  }
  return WeightedNetwork(std::move(m));
}

WeightedNetwork read_network(const std::string& path, double sym_tol) {
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".tsv" || ext == ".edges" || ext == ".edgelist") return read_edge_list(path);
  return WeightedNetwork::symmetrized(read_matrix_csv(path), sym_tol);
}

Labeling read_labels(const std::string& path, int k) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    labels.push_back(static_cast<int>(parse_int(line, path + ":" + std::to_string(lineno))));
  }
  if (labels.empty()) throw InvalidArgument(path + ": empty labels file");
  if (k == 0) k = *std::max_element(labels.begin(), labels.end());
  return Labeling(std::move(labels), k);
}

void write_labels(const std::string& path, const Labeling& labels) {
  std::ostringstream out;
  for (int v : labels.values()) out << v << '\n';
  write_text(path, out.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace wsbm::io
