// Command-line front end: network generation, fitting, simulation sweeps,
// theoretical bounds, real-data analysis and evaluation utilities.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wsbm/analyze.hpp"
#include "wsbm/error.hpp"
#include "wsbm/eval.hpp"
#include "wsbm/init.hpp"
#include "wsbm/io.hpp"
#include "wsbm/report.hpp"
#include "wsbm/sweep.hpp"
#include "wsbm/theory.hpp"

namespace {

using nlohmann::json;
using namespace wsbm;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    io::write_text(out, text);
}

std::pair<int, int> parse_k_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const int k = std::stoi(s);
      return {k, k};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("bad K range '" + s + "', expected lo:hi");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

Eigen::VectorXd to_pi(const std::vector<double>& pi, int k) {
  if (pi.empty()) return balanced_pi(k);
  if (static_cast<int>(pi.size()) != k) throw InvalidArgument("--pi needs K entries");
  return Eigen::Map<const Eigen::VectorXd>(pi.data(), k);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

struct GenerateArgs {
  int n = 100, k = 2;
  double a = 1.0, b = 0.0, sigma2 = 1.0, alpha = 1.0, bparam = 0.3;
  std::vector<double> pi;
  std::uint64_t seed = 1;
  std::string model = "gaussian", out;
  bool fixed_counts = false;
};

void run_generate(const GenerateArgs& g) {
  const Eigen::VectorXd pi = to_pi(g.pi, g.k);
  EdgeDistributionSpec spec;
  if (g.model == "gaussian") {
    spec = GaussianHomogeneous{g.a, g.b, g.sigma2};
  } else if (g.model == "heavy_tail") {
    HeavyTailMixture h;
    h.alpha = g.alpha;
    spec = h;
  } else if (g.model == "bimodal") {
    Bimodal bm;
    bm.b_param = g.bparam;
    spec = bm;
  } else {
    throw InvalidArgument("unknown model '" + g.model + "'");
  }
  const auto mode = g.fixed_counts ? LabelAssignment::kFixedCounts : LabelAssignment::kIid;
  const SampledNetwork s = sample_robustness_network(g.n, pi, spec, g.seed, mode);
  io::write_matrix_csv(g.out + "_W.csv", s.network.weights());
  io::write_labels(g.out + "_labels.csv", s.labels);
  std::cout << "wrote " << g.out << "_W.csv and " << g.out << "_labels.csv\n";
}

struct FitArgs {
  std::string matrix, init = "spectral", ref_labels, out, labels_out;
  int k = 2, restarts = kDefaultRestarts;
  std::optional<int> level;
  std::uint64_t seed = 1;
  FitOptions fit;
};

void run_fit(const FitArgs& f) {
  const WeightedNetwork w = io::read_network(f.matrix);
  InitMethod method = parse_init_method(f.init);
  if (method.kind == InitMethod::Kind::kDb && f.level && !method.level) method.level = f.level;
  std::optional<Labeling> truth;
  if (!f.ref_labels.empty()) truth = io::read_labels(f.ref_labels, f.k);
  Labeling e0;
  json init_info{{"method", method.text}};
  switch (method.kind) {
    case InitMethod::Kind::kSpectral:
      e0 = spectral_init(w, f.k, f.restarts, f.seed);
      break;
    case InitMethod::Kind::kDb: {
      const DbResult db = db_init(w, f.k, method.level, f.restarts, f.seed);
      e0 = db.labels;
      init_info["level"] = db.level;
      if (db.reduced) init_info["level_reduced"] = true;
      break;
    }
    case InitMethod::Kind::kOracle: {
      if (!truth) throw InvalidArgument("oracle initializer needs --ref-labels (the truth)");
      const OracleResult o = oracle_init(*truth, OracleSpec{method.gamma, OracleMode::kBalancedSpread}, f.seed);
      e0 = o.labels;
      init_info["realized_confusion"] = report::matrix_json(o.realized_confusion);
      break;
    }
    case InitMethod::Kind::kLabels:
      e0 = io::read_labels(method.path, f.k);
      break;
  }
  const FitResult r = pl_fit(w, e0, f.k, f.fit);
  json j = report::fit_result_json(r);
  j["init"] = init_info;
  if (truth) {
    j["loss"] = misclassification_loss(r.labels, *truth);
    j["init_loss"] = misclassification_loss(e0, *truth);
  }
  if (!f.labels_out.empty()) io::write_labels(f.labels_out, r.labels);
  emit(f.out, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-likelihood community detection for Gaussian weighted SBMs"};
  app.require_subcommand(1);

  // generate
  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a network and its labels");
  generate->add_option("--n", gen.n, "Number of nodes")->check(CLI::PositiveNumber);
  generate->add_option("--k", gen.k, "Number of communities")->check(CLI::PositiveNumber);
  generate->add_option("--a", gen.a, "Within-community mean");
  generate->add_option("--b", gen.b, "Between-community mean");
  generate->add_option("--sigma2", gen.sigma2, "Edge variance");
  generate->add_option("--pi", gen.pi, "Community proportions")->delimiter(',');
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--model", gen.model, "gaussian | heavy_tail | bimodal");
  generate->add_option("--alpha", gen.alpha, "Gaussian weight of the heavy-tail mixture");
  generate->add_option("--bparam", gen.bparam, "Upper mode of the bimodal within-community mixture");
  generate->add_flag("--fixed-counts", gen.fixed_counts, "Exact community sizes instead of i.i.d. labels");
  generate->add_option("--out", gen.out, "Output prefix")->required();

  // fit
  FitArgs fit;
  int fit_level = 0;
  auto* fit_cmd = app.add_subcommand("fit", "Run the pseudo-likelihood algorithm");
  fit_cmd->add_option("--matrix", fit.matrix, "Weight matrix (CSV) or edge list (.tsv)")->required();
  fit_cmd->add_option("--k", fit.k, "Number of communities")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--init", fit.init, "spectral | db[:L] | oracle:<g,...> | labels:<file>");
  fit_cmd->add_option("--T", fit.fit.outer_iters, "Outer iterations");
  fit_cmd->add_option("--tol", fit.fit.inner_tol, "Inner-loop tolerance");
  fit_cmd->add_option("--inner-max", fit.fit.inner_max, "Inner-loop iteration cap");
  fit_cmd->add_option("--seed", fit.seed, "Initializer seed");
  fit_cmd->add_option("--restarts", fit.restarts, "k-means restarts");
  fit_cmd->add_option("--level", fit_level, "DB discretization level");
  fit_cmd->add_option("--ref-labels", fit.ref_labels, "True labels (required for oracle init)");
  fit_cmd->add_option("--labels-out", fit.labels_out, "Write fitted labels here");
  fit_cmd->add_option("--out", fit.out, "JSON output file (default stdout)");

  // simulate
  std::string sim_config, sim_out;
  std::vector<int> sim_n;
  std::vector<double> sim_pi;
  std::vector<std::string> sim_init;
  int sim_k = 0, sim_reps = 0, sim_workers = 0, sim_T = 0;
  double sim_sigma2 = 0.0, sim_tol = 0.0;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep over a parameter grid");
  simulate->add_option("--config", sim_config, "JSON experiment config");
  simulate->add_option("--n", sim_n, "Node counts")->delimiter(',');
  simulate->add_option("--k", sim_k, "Number of communities");
  simulate->add_option("--pi", sim_pi, "Community proportions")->delimiter(',');
  simulate->add_option("--sigma2", sim_sigma2, "Edge variance");
  simulate->add_option("--init", sim_init, "Initializers")->delimiter(';');
  simulate->add_option("--T", sim_T, "Outer iterations");
  simulate->add_option("--tol", sim_tol, "Inner-loop tolerance");
  simulate->add_option("--reps", sim_reps, "Replications per cell");
  simulate->add_option("--seed", sim_seed, "Master seed");
  simulate->add_option("--workers", sim_workers, "Worker threads (default: all cores)");
  simulate->add_option("--out", sim_out, "Output directory (default: summary to stdout)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate theoretical error bounds");
  bounds->require_subcommand(1);
  int bb_k = 2;
  double bb_n = 100, bb_a = 1, bb_b = 0, bb_sigma2 = 1, bb_gamma = 0.8;
  auto* balanced = bounds->add_subcommand("balanced", "Balanced-community bounds");
  balanced->add_option("--k", bb_k);
  balanced->add_option("--n", bb_n);
  balanced->add_option("--a", bb_a);
  balanced->add_option("--b", bb_b);
  balanced->add_option("--sigma2", bb_sigma2);
  balanced->add_option("--gamma", bb_gamma);

  std::vector<double> ub_pi{0.5, 0.5}, ub_gamma{0.8, 0.8};
  double ub_a = 1, ub_b = 0, ub_sigma2 = 1, ub_n = 100;
  std::optional<double> ub_ahat, ub_bhat, ub_sigma2hat;
  auto* unbalanced = bounds->add_subcommand("unbalanced", "Two-community unbalanced bounds");
  unbalanced->add_option("--pi", ub_pi)->delimiter(',')->expected(2);
  unbalanced->add_option("--gamma", ub_gamma)->delimiter(',')->expected(1, 2);
  unbalanced->add_option("--a", ub_a);
  unbalanced->add_option("--b", ub_b);
  unbalanced->add_option("--sigma2", ub_sigma2);
  unbalanced->add_option("--ahat", ub_ahat);
  unbalanced->add_option("--bhat", ub_bhat);
  unbalanced->add_option("--sigma2hat", ub_sigma2hat);
  unbalanced->add_option("--n", ub_n);

  std::vector<double> hm_pi{0.5}, hm_gamma{0.7}, hm_ab, hm_delta;
  double hm_n = 100, hm_sigma2 = 1;
  std::string hm_out;
  auto* heatmap = bounds->add_subcommand("heatmap", "Log-bound grid over |a-b| and delta");
  heatmap->add_option("--pi", hm_pi, "pi1 (or pi1,pi2)")->delimiter(',');
  heatmap->add_option("--gamma", hm_gamma, "gamma (or gamma1,gamma2)")->delimiter(',');
  heatmap->add_option("--n", hm_n);
  heatmap->add_option("--sigma2", hm_sigma2);
  heatmap->add_option("--ab-grid", hm_ab, "|a-b| values")->delimiter(',')->required();
  heatmap->add_option("--delta-grid", hm_delta, "delta values")->delimiter(',')->required();
  heatmap->add_option("--out", hm_out, "CSV output (default stdout)");

  // analyze
  std::string an_matrix, an_ref, an_out, an_range = "2:20", an_methods = "sc,db,pl-sc,pl-db";
  int an_level = 0, an_T = 20;
  double an_tol = 1e-6;
  std::uint64_t an_seed = 1;
  auto* analyze_cmd = app.add_subcommand("analyze", "Fit a range of K on a weight matrix");
  analyze_cmd->add_option("--matrix", an_matrix)->required();
  analyze_cmd->add_option("--k-range", an_range, "lo:hi");
  analyze_cmd->add_option("--methods", an_methods, "Comma list of sc, db, pl-sc, pl-db");
  analyze_cmd->add_option("--ref-labels", an_ref, "Reference partition for overlap tables");
  analyze_cmd->add_option("--level", an_level, "DB discretization level (default automatic)");
  analyze_cmd->add_option("--seed", an_seed);
  analyze_cmd->add_option("--T", an_T);
  analyze_cmd->add_option("--tol", an_tol);
  analyze_cmd->add_option("--out", an_out, "Output directory")->required();

  // eval / overlap
  std::string ev_labels, ev_ref, ev_out;
  auto* eval_cmd = app.add_subcommand("eval", "Misclassification loss against reference labels");
  eval_cmd->add_option("--labels", ev_labels)->required();
  eval_cmd->add_option("--ref-labels", ev_ref)->required();
  eval_cmd->add_option("--out", ev_out);
  std::string ov_labels, ov_ref, ov_out;
  auto* overlap_cmd = app.add_subcommand("overlap", "Best-overlap table against a reference partition");
  overlap_cmd->add_option("--labels", ov_labels)->required();
  overlap_cmd->add_option("--ref-labels", ov_ref)->required();
  overlap_cmd->add_option("--out", ov_out);

  // average
  std::vector<std::string> avg_in;
  std::string avg_out;
  auto* average = app.add_subcommand("average", "Entrywise mean of weight matrices");
  average->add_option("--matrix", avg_in)->required();
  average->add_option("--out", avg_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) {
      run_generate(gen);
    } else if (*fit_cmd) {
      if (fit_cmd->count("--level")) fit.level = fit_level;
      run_fit(fit);
    } else if (*simulate) {
      ExperimentConfig cfg;
      if (!sim_config.empty()) cfg = config_from_json(json::parse(io::read_text(sim_config), nullptr, true, true));
      if (simulate->count("--n")) cfg.n = sim_n;
      if (simulate->count("--k")) cfg.k = sim_k;
      if (simulate->count("--pi")) cfg.pi = sim_pi;
      if (simulate->count("--sigma2")) cfg.sigma2 = sim_sigma2;
      if (simulate->count("--init")) cfg.methods = sim_init;
      if (simulate->count("--T")) cfg.fit.outer_iters = sim_T;
      if (simulate->count("--tol")) cfg.fit.inner_tol = sim_tol;
      if (simulate->count("--reps")) cfg.replications = sim_reps;
      if (simulate->count("--seed")) cfg.master_seed = sim_seed;
      if (simulate->count("--workers")) cfg.workers = sim_workers;
      if (simulate->count("--out")) cfg.out = sim_out;
      const SweepResult r = run_sweep(cfg);
      const std::string summary = summary_csv(r, cfg.generator);
      if (cfg.out.empty()) {
        std::cout << summary;
      } else {
        ensure_dir(cfg.out);
        const std::filesystem::path dir(cfg.out);
        io::write_text((dir / "summary.csv").string(), summary);
        io::write_text((dir / "replications.csv").string(), replications_csv(r));
        io::write_text((dir / "timing.csv").string(), timing_csv(r));
        io::write_text((dir / "config.json").string(), config_to_json(cfg).dump(2) + "\n");
      }
    } else if (*bounds) {
      if (*balanced) {
        const auto rep = theory::balanced_bounds(bb_k, bb_n, bb_a, bb_b, bb_sigma2, bb_gamma);
        std::cout << report::balanced_json(rep).dump(2) << "\n";
      } else if (*unbalanced) {
        if (ub_gamma.size() == 1) ub_gamma.push_back(ub_gamma.front());
        theory::UnbalancedInputs in{ub_pi[0], ub_pi[1], ub_gamma[0], ub_gamma[1], ub_a, ub_b,
                                    ub_sigma2, ub_ahat.value_or(ub_a), ub_bhat.value_or(ub_b),
                                    ub_sigma2hat.value_or(ub_sigma2), ub_n};
        std::cout << report::unbalanced_json(theory::unbalanced_bounds(in)).dump(2) << "\n";
      } else {
        const double g1 = hm_gamma.at(0);
        const double g2 = hm_gamma.size() > 1 ? hm_gamma[1] : g1;
        const auto grid = theory::bound_heatmap(hm_pi.at(0), g1, g2, hm_n, hm_sigma2, hm_ab, hm_delta);
        emit(hm_out, report::heatmap_csv(grid));
      }
    } else if (*analyze_cmd) {
      const WeightedNetwork w = io::read_network(an_matrix);
      AnalyzeOptions opts;
      std::tie(opts.k_min, opts.k_max) = parse_k_range(an_range);
      opts.methods = split_list(an_methods);
      if (!an_ref.empty()) opts.reference = io::read_labels(an_ref);
      if (analyze_cmd->count("--level")) opts.db_level = an_level;
      opts.seed = an_seed;
      opts.fit.outer_iters = an_T;
      opts.fit.inner_tol = an_tol;
      const AnalyzeResult r = analyze(w, opts);
      ensure_dir(an_out);
      const std::filesystem::path dir(an_out);
      io::write_text((dir / "likelihood.csv").string(), likelihood_csv(r));
      io::write_text((dir / "mismatch.csv").string(), mismatch_csv(r));
      io::write_text((dir / "labels.csv").string(), labels_csv(r.labels));
      if (opts.reference) {
        io::write_text((dir / "overlap.csv").string(), overlap_csv(r));
        io::write_text((dir / "matched_labels.csv").string(), labels_csv(r.matched));
      }
      json meta{{"matrix", an_matrix}, {"k_range", an_range}, {"methods", opts.methods},
                {"seed", an_seed}, {"T", an_T}, {"tol", an_tol}, {"db_level", r.db_level},
                {"ref_labels", an_ref}};
      io::write_text((dir / "config.json").string(), meta.dump(2) + "\n");
    } else if (*eval_cmd) {
      const Labeling est = io::read_labels(ev_labels);
      const Labeling ref = io::read_labels(ev_ref);
      emit(ev_out, report::loss_json(misclassification_report(est, ref)).dump(2) + "\n");
    } else if (*overlap_cmd) {
      const Labeling est = io::read_labels(ov_labels);
      const Labeling ref = io::read_labels(ov_ref);
      emit(ov_out, overlap_rows_csv(overlap_table(est, ref)));
    } else if (*average) {
      std::vector<WeightedNetwork> nets;
      for (const auto& f : avg_in) nets.push_back(io::read_network(f));
      io::write_matrix_csv(avg_out, average_networks(nets).weights());
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
