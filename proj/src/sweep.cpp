#include "wsbm/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "wsbm/error.hpp"
#include "wsbm/eval.hpp"
#include "wsbm/init.hpp"
#include "wsbm/io.hpp"
#include "wsbm/rng.hpp"

namespace wsbm {

using nlohmann::json;

namespace {

const char* generator_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::kGaussian:
      return "gaussian";
    case GeneratorKind::kHeavyTail:
      return "heavy_tail";
    case GeneratorKind::kBimodal:
      return "bimodal";
  }
  return "gaussian";
}

Eigen::VectorXd config_pi(const ExperimentConfig& c) {
  if (c.pi.empty()) return balanced_pi(c.k);
  return Eigen::Map<const Eigen::VectorXd>(c.pi.data(), static_cast<Eigen::Index>(c.pi.size()));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n.empty()) throw InvalidArgument("config: n grid is empty");
  if (k < 1) throw InvalidArgument("config: K must be at least 1");
  for (int v : n)
    if (v < k) throw InvalidArgument("config: every n must be at least K");
  if (!pi.empty()) {
    if (static_cast<int>(pi.size()) != k) throw InvalidArgument("config: pi must have K entries");
    double s = 0.0;
    for (double p : pi) {
      if (!(p >= 0.0)) throw InvalidArgument("config: pi entries must be non-negative");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw InvalidArgument("config: pi must sum to 1");
  }
  if (generator == GeneratorKind::kGaussian) {
    if (signal.empty()) throw InvalidArgument("config: signal grid is empty");
    if (!(sigma2 > 0.0)) throw InvalidArgument("config: sigma2 must be positive");
  } else {
    if (generator_values.empty()) throw InvalidArgument("config: generator grid is empty");
    if (generator == GeneratorKind::kHeavyTail)
      for (double a : generator_values)
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("config: alpha must lie in [0,1]");
  }
  if (methods.empty()) throw InvalidArgument("config: no init methods");
  for (const auto& m : methods) {
    const InitMethod im = parse_init_method(m);
    if (im.kind == InitMethod::Kind::kLabels)
      throw InvalidArgument("config: labels:<file> initializers are not usable in simulations");
  }
  if (replications < 1) throw InvalidArgument("config: replications must be at least 1");
  if (restarts < 1) throw InvalidArgument("config: restarts must be at least 1");
  if (fit.outer_iters < 0 || fit.inner_max < 0 || !(fit.inner_tol > 0.0))
    throw InvalidArgument("config: invalid fit options");
  if (workers < 0) throw InvalidArgument("config: workers must be non-negative");
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("n")) {
      if (j["n"].is_array())
        c.n = j["n"].get<std::vector<int>>();
      else
        c.n = {j["n"].get<int>()};
    }
    if (j.contains("K")) c.k = j["K"].get<int>();
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("pi")) c.pi = j["pi"].get<std::vector<double>>();
    if (j.contains("signal")) {
      c.signal.clear();
      for (const auto& s : j["signal"]) {
        if (s.is_array()) {
          if (s.size() != 2) throw InvalidArgument("config: signal pairs must be [a, b]");
          c.signal.emplace_back(s[0].get<double>(), s[1].get<double>());
        } else {
          c.signal.emplace_back(s.get<double>(), 0.0);
        }
      }
    }
    if (j.contains("sigma2")) c.sigma2 = j["sigma2"].get<double>();
    if (j.contains("generator")) {
      const auto& g = j["generator"];
      const std::string type = g.is_string() ? g.get<std::string>() : g.value("type", "gaussian");
      if (type == "gaussian") {
        c.generator = GeneratorKind::kGaussian;
      } else if (type == "heavy_tail") {
        c.generator = GeneratorKind::kHeavyTail;
        c.generator_values = g.at("alpha").get<std::vector<double>>();
      } else if (type == "bimodal") {
        c.generator = GeneratorKind::kBimodal;
        c.generator_values = g.at("b_param").get<std::vector<double>>();
      } else {
        throw InvalidArgument("config: unknown generator '" + type + "'");
      }
    }
    if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("T")) c.fit.outer_iters = j["T"].get<int>();
    if (j.contains("inner_tol")) c.fit.inner_tol = j["inner_tol"].get<double>();
    if (j.contains("inner_max")) c.fit.inner_max = j["inner_max"].get<int>();
    if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
    if (j.contains("replications")) c.replications = j["replications"].get<int>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("fixed_counts")) c.fixed_counts = j["fixed_counts"].get<bool>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["n"] = c.n;
  j["K"] = c.k;
  j["pi"] = c.pi;
  json sig = json::array();
  for (const auto& [a, b] : c.signal) sig.push_back({a, b});
  j["signal"] = sig;
  j["sigma2"] = c.sigma2;
  json gen;
  gen["type"] = generator_name(c.generator);
  if (c.generator == GeneratorKind::kHeavyTail) gen["alpha"] = c.generator_values;
  if (c.generator == GeneratorKind::kBimodal) gen["b_param"] = c.generator_values;
  j["generator"] = gen;
  j["methods"] = c.methods;
  j["T"] = c.fit.outer_iters;
  j["inner_tol"] = c.fit.inner_tol;
  j["inner_max"] = c.fit.inner_max;
  j["restarts"] = c.restarts;
  j["replications"] = c.replications;
  j["master_seed"] = c.master_seed;
  j["fixed_counts"] = c.fixed_counts;
  j["out"] = c.out;
  return j;
}

std::vector<SweepCell> sweep_cells(const ExperimentConfig& c) {
  std::vector<SweepCell> cells;
  for (int n : c.n) {
    if (c.generator == GeneratorKind::kGaussian) {
      for (const auto& [a, b] : c.signal) cells.push_back({n, a, b, 0.0});
    } else {
      for (double g : c.generator_values) cells.push_back({n, 0.0, 0.0, g});
    }
  }
  return cells;
}

namespace {

EdgeDistributionSpec cell_spec(const ExperimentConfig& c, const SweepCell& cell) {
  switch (c.generator) {
    case GeneratorKind::kHeavyTail: {
      HeavyTailMixture h;
      h.alpha = cell.gen_param;
      return h;
    }
    case GeneratorKind::kBimodal: {
      Bimodal b;
      b.b_param = cell.gen_param;
      return b;
    }
    case GeneratorKind::kGaussian:
      break;
  }
  return GaussianHomogeneous{cell.a, cell.b, c.sigma2};
}

struct RepOutcome {
  std::vector<double> loss;     // per row
  std::vector<double> seconds;  // per row
};

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  result.cells = sweep_cells(config);
  std::vector<InitMethod> methods;
  for (const auto& m : config.methods) methods.push_back(parse_init_method(m));
  for (const auto& m : methods) {
    result.row_methods.push_back(m.name());
    result.row_methods.push_back("PL-" + m.name());
  }
  const std::size_t rows_per_cell = result.row_methods.size();
  const std::size_t n_cells = result.cells.size();
  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const Eigen::VectorXd pi = config_pi(config);
  const LabelAssignment mode =
      config.fixed_counts ? LabelAssignment::kFixedCounts : LabelAssignment::kIid;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<RepOutcome> outcomes(n_cells * reps);
  auto run_one = [&](std::size_t task) {
    const std::size_t cell_idx = task / reps;
    const std::size_t rep = task % reps;
    const SweepCell& cell = result.cells[cell_idx];
    RepOutcome& out = outcomes[task];
    out.loss.assign(rows_per_cell, nan);
    out.seconds.assign(rows_per_cell, nan);
    const std::uint64_t rep_seed = derive_seed(derive_seed(config.master_seed, cell_idx), rep);
    SampledNetwork sample;
    try {
      sample = sample_robustness_network(cell.n, pi, cell_spec(config, cell), derive_seed(rep_seed, 0), mode);
    } catch (const std::exception&) {
      return;
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const InitMethod& method = methods[m];
      const std::uint64_t init_seed = derive_seed(rep_seed, 100 + m);
      try {
        const auto t0 = std::chrono::steady_clock::now();
        Labeling e0;
        switch (method.kind) {
          case InitMethod::Kind::kSpectral:
            e0 = spectral_init(sample.network, config.k, config.restarts, init_seed);
            break;
          case InitMethod::Kind::kDb:
            e0 = db_init(sample.network, config.k, method.level, config.restarts, init_seed).labels;
            break;
          case InitMethod::Kind::kOracle:
            e0 = oracle_init(sample.labels, OracleSpec{method.gamma, OracleMode::kBalancedSpread},
                             init_seed)
                     .labels;
            break;
          case InitMethod::Kind::kLabels:
            throw InvalidArgument("labels initializer in simulation");
        }
        out.seconds[2 * m] = seconds_since(t0);
        out.loss[2 * m] = misclassification_loss(e0, sample.labels);
        const FitResult fit = pl_fit(sample.network, e0, config.k, config.fit);
        out.seconds[2 * m + 1] = fit.wall_seconds;
        out.loss[2 * m + 1] = misclassification_loss(fit.labels, sample.labels);
      } catch (const std::exception&) {
        // Recorded as a failed replication for this method.
      }
    }
  };

  int workers = config.workers > 0 ? config.workers
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::size_t total = outcomes.size();
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(total, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < total; t = next.fetch_add(1)) run_one(t);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregate in fixed (cell, row, rep) order.
  for (std::size_t c = 0; c < n_cells; ++c) {
    for (std::size_t r = 0; r < rows_per_cell; ++r) {
      SweepRow row;
      row.cell = result.cells[c];
      row.method = result.row_methods[r];
      std::vector<double> losses(reps);
      double sum = 0.0, secs = 0.0;
      int ok = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const RepOutcome& o = outcomes[c * reps + rep];
        losses[rep] = o.loss[r];
        if (std::isnan(o.loss[r])) continue;
        sum += o.loss[r];
        secs += o.seconds[r];
        ++ok;
      }
      row.replications = ok;
      row.failed = static_cast<int>(reps) - ok;
      if (ok > 0) {
        row.mean_loss = sum / ok;
        row.mean_seconds = secs / ok;
        double ss = 0.0;
        for (double l : losses)
          if (!std::isnan(l)) ss += (l - row.mean_loss) * (l - row.mean_loss);
        row.se_loss = ok > 1 ? std::sqrt(ss / (ok - 1)) / std::sqrt(static_cast<double>(ok)) : 0.0;
      } else {
        row.mean_loss = nan;
        row.se_loss = nan;
        row.mean_seconds = nan;
      }
      result.rows.push_back(std::move(row));
      result.losses.push_back(std::move(losses));
    }
  }
  return result;
}

namespace {

std::string num(double x) { return std::isnan(x) ? "NA" : io::format_double(x); }

}  // namespace

std::string summary_csv(const SweepResult& r, GeneratorKind kind) {
  std::ostringstream out;
  out << "n,a,b,generator,gen_param,method,mean_loss,se_loss,replications,failed\n";
  for (const auto& row : r.rows) {
    out << row.cell.n << ',' << num(row.cell.a) << ',' << num(row.cell.b) << ','
        << generator_name(kind) << ',' << num(row.cell.gen_param) << ',' << row.method << ','
        << num(row.mean_loss) << ',' << num(row.se_loss) << ',' << row.replications << ','
        << row.failed << '\n';
  }
  return out.str();
}

std::string replications_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "cell,n,a,b,gen_param,method,replication,loss\n";
  const std::size_t per_cell = r.row_methods.size();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    for (std::size_t rep = 0; rep < r.losses[i].size(); ++rep) {
      out << i / per_cell << ',' << row.cell.n << ',' << num(row.cell.a) << ',' << num(row.cell.b)
          << ',' << num(row.cell.gen_param) << ',' << row.method << ',' << rep << ','
          << num(r.losses[i][rep]) << '\n';
    }
  }
  return out.str();
}

std::string timing_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "n,a,b,gen_param,method,mean_seconds,replications\n";
  for (const auto& row : r.rows) {
    out << row.cell.n << ',' << num(row.cell.a) << ',' << num(row.cell.b) << ','
        << num(row.cell.gen_param) << ',' << row.method << ',' << num(row.mean_seconds) << ','
        << row.replications << '\n';
  }
  return out.str();
}

}  // namespace wsbm
