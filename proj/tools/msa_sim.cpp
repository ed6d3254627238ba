#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "msa/estimators.hpp"
#include "msa/harness.hpp"
#include "msa/knn.hpp"
#include "msa/oracle.hpp"

using nlohmann::json;

namespace {

json subset_json(const msa::SubsetMask& s) { return json(s.members()); }

int cmd_simulate(const std::string& config, bool fast, int workers, const std::string& out_dir) {
  msa::ExperimentSpec spec = msa::load_spec(config);
  msa::apply_seed_override(spec);
  if (fast) spec.reps = std::min(spec.reps, 50);
  const auto rows = msa::run_experiment(spec, workers);
  const std::filesystem::path dir(out_dir);
  const auto path = (dir / spec.out).string();
  msa::write_file(path, msa::to_csv(rows));
  std::cout << "wrote " << path << "\n";
  if (std::find(spec.estimators.begin(), spec.estimators.end(), "oracle") != spec.estimators.end() &&
      spec.estimators.size() > 1) {
    const auto cost_path = (dir / ("cost_" + spec.out)).string();
    msa::write_file(cost_path, msa::to_csv(msa::adaptation_cost_curve(rows, "oracle", spec.tau)));
    std::cout << "wrote " << cost_path << "\n";
  }
  return 0;
}

int cmd_oracle_rate(std::vector<double> h, std::vector<std::int64_t> n, std::size_t d, double tau,
                    const std::string& config) {
  if (!config.empty()) {
    const msa::ExperimentSpec spec = msa::load_spec(config);
    h = spec.custom_h;
    n = {spec.target_size()};
    if (spec.custom_sizes.empty()) {
      n.insert(n.end(), h.size(), spec.n);
    } else {
      n.insert(n.end(), spec.custom_sizes.begin(), spec.custom_sizes.end());
    }
    d = spec.d;
    tau = spec.tau;
  }
  if (n.size() == 1) n.assign(h.size() + 1, n[0]);
  if (n.size() != h.size() + 1) throw std::invalid_argument("--n takes one value or m+1 values (target first)");
  const msa::SampleSizes sizes(n[0], std::vector<std::int64_t>(n.begin() + 1, n.end()));
  const msa::OracleRateResult res = msa::oracle_rate(msa::BiasConfiguration(h), sizes, d, tau);
  json out;
  out["rate"] = res.rate;
  out["argmin_set"] = subset_json(res.argmin_set);
  out["breakdown"] = json::array();
  for (const auto& t : res.breakdown) {
    out["breakdown"].push_back({{"subset", subset_json(t.subset)}, {"variance", t.variance}, {"bias2", t.bias2}});
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct EstimateFlags {
  std::string input;
  std::string estimator;
  double alpha = 1.0;
  double tau = -1.0;
  double delta = 0.0;
  std::size_t k = 2;
  double c = 0.0;
  std::uint64_t seed = 0;
  std::string feasibility = "pairwise";
};

int cmd_estimate(const EstimateFlags& f) {
  std::ifstream in(f.input);
  if (!in) throw std::runtime_error("cannot read input '" + f.input + "'");
  const json doc = json::parse(in);
  msa::LocalEstimates est;
  est.theta_tilde = doc.at("theta_tilde").get<std::vector<msa::Vector>>();
  if (est.theta_tilde.empty()) throw std::invalid_argument("theta_tilde must list the target first");
  const std::size_t m = est.m();
  const std::size_t d = est.d();
  for (const auto& v : est.theta_tilde) {
    if (v.size() != d) throw std::invalid_argument("theta_tilde rows must share one length");
  }
  std::vector<std::int64_t> n = doc.at("sizes").get<std::vector<std::int64_t>>();
  if (n.size() == 1) n.assign(m + 1, n[0]);
  if (n.size() != m + 1) throw std::invalid_argument("sizes takes one value or m+1 values (target first)");
  const msa::SampleSizes sizes(n[0], std::vector<std::int64_t>(n.begin() + 1, n.end()));
  const double tau = f.tau >= 0.0 ? f.tau : doc.value("tau", 1.0);
  const msa::FeasibilityMode mode =
      f.feasibility == "exact" ? msa::FeasibilityMode::Exact : msa::FeasibilityMode::Pairwise;

  msa::EstimatorOutput out;
  const std::string& name = f.estimator;
  if (name == "naive") {
    out = msa::naive(est);
  } else if (name == "two_source") {
    out = msa::two_source_structured(est, sizes, tau, f.delta > 0.0 ? f.delta : msa::default_delta_two_source(sizes));
  } else if (name == "model_selection" || name == "model_selection_prefix") {
    const double half = static_cast<double>(sizes.n0()) / 2.0;
    msa::TargetSplit ts{est.target(), est.target(), half, half};
    if (doc.contains("target_halves")) {
      const auto halves = doc.at("target_halves").get<std::vector<msa::Vector>>();
      if (halves.size() != 2) throw std::invalid_argument("target_halves needs two vectors");
      ts.first = halves[0];
      ts.second = halves[1];
    }
    out = msa::model_selection(est, sizes,
                               name == "model_selection" ? msa::full_subset_family(m) : msa::prefix_family(m), ts);
  } else if (name == "intersection") {
    out = msa::intersection_estimator(est, sizes, tau,
                                      f.delta > 0.0 ? f.delta : msa::default_delta_intersection(sizes, d, tau), mode);
  } else if (name == "elimination") {
    out = msa::elimination_estimator(est, sizes, d, msa::EliminationParams{tau, f.alpha});
  } else if (name == "clustering") {
    const double c = f.c > 0.0 ? f.c : msa::default_cluster_threshold(m, sizes.n0());
    out = msa::practical_clustering_estimator(est, sizes, d, f.k, c, f.seed);
  } else if (name == "two_cluster") {
    out = msa::two_cluster_adaptive(msa::SplitEstimates::reuse(est, static_cast<double>(sizes.n0())));
  } else {
    throw std::invalid_argument("unknown estimator '" + name + "'");
  }

  json res;
  res["estimator"] = name;
  res["estimate"] = out.value;
  res["weights"] = out.weights;
  if (out.t_hat) res["t_hat"] = *out.t_hat;
  if (out.selected) res["S_hat"] = subset_json(*out.selected);
  if (!out.labels.empty()) res["labels"] = out.labels;
  if (out.choice) res["choice"] = *out.choice;
  std::cout << res.dump(2) << "\n";
  return 0;
}

int cmd_knn(double alpha, double amplitude, const std::vector<std::size_t>& grid, int reps, std::uint64_t seed,
            const std::string& out, int workers) {
  const auto points = msa::rate_sweep(alpha, grid, reps, seed, workers, amplitude);
  std::string csv = "m,mse,mse_stderr,mean_k_hat\n";
  char buf[128];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", p.m, p.mse, p.mse_stderr, p.mean_k);
    csv += buf;
  }
  if (out.empty()) {
    std::cout << csv;
  } else {
    msa::write_file(out, csv);
  }
  if (points.size() >= 2) {
    std::snprintf(buf, sizeof buf, "%.17g", msa::loglog_slope(points));
    std::cout << "slope " << buf << "\n";
  }
  return 0;
}

int cmd_figures(const std::string& out, bool fast, int workers, int reps, std::uint64_t seed) {
  msa::FigureOptions opt;
  opt.workers = workers;
  opt.seed = seed;
  if (fast) opt.reps = 50;
  if (reps > 0) opt.reps = reps;
  const msa::FigureData data = msa::reproduce_figures(opt);
  msa::write_figures(data, out);
  std::cout << "wrote cluster_mse.csv cluster_cost.csv sep1_mse.csv sep2_mse.csv to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-source transfer estimation simulator"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  std::string config, out_dir = ".";
  bool fast = false;
  int workers = 1;
  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment from a config file");
  sim->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  sim->add_flag("--fast", fast, "Cap replicates at 50");
  sim->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--out", out_dir, "Output directory");

  std::vector<double> h;
  std::vector<std::int64_t> n;
  std::size_t d = 1;
  double tau = 1.0;
  std::string rate_config;
  auto* rate = app.add_subcommand("oracle-rate", "Print the oracle rate and its minimising subset as JSON");
  rate->add_option("--h", h, "Bias bounds h_1..h_m")->delimiter(',');
  rate->add_option("--n", n, "Sample sizes: one value, or n0,n1..nm")->delimiter(',');
  rate->add_option("--d", d, "Dimension");
  rate->add_option("--tau", tau, "Noise scale");
  rate->add_option("--config", rate_config, "Read h, sizes, d, tau from a config file")->check(CLI::ExistingFile);

  EstimateFlags ef;
  auto* est = app.add_subcommand("estimate", "Run one estimator on local estimates read from JSON");
  est->add_option("--input", ef.input, "JSON with theta_tilde, sizes, tau")->required()->check(CLI::ExistingFile);
  est->add_option("--estimator", ef.estimator, "Estimator name")->required();
  est->add_option("--alpha", ef.alpha, "Elimination alpha");
  est->add_option("--tau", ef.tau, "Noise scale (overrides the input)");
  est->add_option("--delta", ef.delta, "Confidence level for two_source / intersection");
  est->add_option("--k", ef.k, "Number of clusters");
  est->add_option("--c", ef.c, "Cluster inclusion constant");
  est->add_option("--seed", ef.seed, "K-means seed");
  est->add_option("--feasibility", ef.feasibility, "pairwise or exact")->check(CLI::IsMember({"pairwise", "exact"}));

  double alpha = 1.0;
  double amplitude = 20.0;
  std::vector<std::size_t> grid{256, 512, 1024, 2048, 4096, 8192};
  int reps = 200;
  std::uint64_t seed = 1;
  std::string knn_out;
  auto* knn = app.add_subcommand("knn-demo", "Adaptive kNN rate sweep");
  knn->add_option("--alpha", alpha, "Smoothness of f(x) = L |x - 1/2|^alpha");
  knn->add_option("--amplitude", amplitude, "The constant L in f");
  knn->add_option("--m-grid", grid, "Increasing sample sizes")->delimiter(',');
  knn->add_option("--reps", reps, "Replicates per m")->check(CLI::PositiveNumber);
  knn->add_option("--seed", seed, "Seed");
  knn->add_option("--out", knn_out, "CSV path (stdout when omitted)");
  knn->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  std::string fig_out = "figures";
  int fig_reps = 0;
  std::uint64_t fig_seed = msa::FigureOptions{}.seed;
  auto* fig = app.add_subcommand("reproduce-figures", "Write the figure CSVs");
  fig->add_option("--out", fig_out, "Output directory");
  fig->add_flag("--fast", fast, "50 replicates instead of 500");
  fig->add_option("--reps", fig_reps, "Explicit replicate count")->check(CLI::PositiveNumber);
  fig->add_option("--seed", fig_seed, "Seed");
  fig->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return cmd_simulate(config, fast, workers, out_dir);
    if (rate->parsed()) return cmd_oracle_rate(h, n, d, tau, rate_config);
    if (est->parsed()) return cmd_estimate(ef);
    if (knn->parsed()) return cmd_knn(alpha, amplitude, grid, reps, seed, knn_out, workers);
    if (fig->parsed()) return cmd_figures(fig_out, fast, workers, fig_reps, fig_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
