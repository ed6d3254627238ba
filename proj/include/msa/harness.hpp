#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msa/estimators.hpp"
#include "msa/model.hpp"

namespace msa {

enum class SplitMode { StrictSplit, PracticalNoSplit };

std::string to_string(SplitMode mode);
SplitMode split_mode_from_string(const std::string& name);

struct Tuning {
  double elim_alpha = 1.0;
  double elim_tau = 1.0;
  std::size_t cluster_k = 0;   // 0: K = 2 on the cluster config, floor(m/2)+1 otherwise
  double cluster_c = 0.0;      // 0: 2 log(mn)
  double intersection_delta = 0.0;  // 0: d tau^2 / N_total
  double two_source_delta = 0.0;    // 0: 1/n^2
  FeasibilityMode feasibility = FeasibilityMode::Pairwise;
};

struct ExperimentSpec {
  ConfigKind config = ConfigKind::Cluster;
  std::size_t d = 100;
  std::vector<std::size_t> m_values;  // one run per entry
  std::int64_t n = 400;
  std::int64_t n0 = 0;  // 0: same as n
  double tau = 1.0;
  std::vector<double> delta_grid;
  std::vector<std::string> estimators;
  Tuning tuning;
  int reps = 500;
  std::uint64_t seed = 1;
  SplitMode split_mode = SplitMode::PracticalNoSplit;
  std::string out = "results.csv";

  // hard: the grid parameter scales g1, g2, alpha and delta_sep.
  HardInstanceSpec hard;
  // custom: sources sit at param * h_k * e1; source sizes default to n.
  Vector custom_h;
  std::vector<std::int64_t> custom_sizes;

  std::int64_t target_size() const { return n0 > 0 ? n0 : n; }
  void validate() const;
};

// Flat `key = value` documents; `#` starts a comment, lists are comma separated.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);
ExperimentSpec spec_from_text(const std::string& text);
ExperimentSpec load_spec(const std::string& path);

// Applies MSA_SEED when set.
void apply_seed_override(ExperimentSpec& spec);

const std::vector<std::string>& known_estimators();

struct ResultRow {
  std::string config;
  std::size_t d = 0;
  std::size_t m = 0;
  std::int64_t n = 0;
  std::int64_t n0 = 0;
  double param = 0.0;
  std::string estimator;
  double mse_mean = 0.0;
  double mse_stderr = 0.0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::string extra;  // JSON object
};

ProblemInstance build_instance(const ExperimentSpec& spec, std::size_t m, std::size_t grid_index, double param);

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int workers = 1);

struct CostRow {
  std::string config;
  std::size_t d = 0;
  std::size_t m = 0;
  std::int64_t n = 0;
  std::int64_t n0 = 0;
  double rho = 0.0;
  std::string estimator;
  double max_ratio = 0.0;
  double argmax_param = 0.0;
  int reps = 0;
  std::uint64_t seed = 0;
  int floor_triggers = 0;
};

// Per m: max over the grid of estimator MSE / oracle MSE. The oracle MSE is floored
// at d tau^2 / N_total.
std::vector<CostRow> adaptation_cost_curve(const std::vector<ResultRow>& rows,
                                           const std::string& oracle_name = "oracle", double tau = 1.0);

std::string csv_header();
std::string cost_csv_header();
std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_csv(const std::vector<CostRow>& rows);
void write_file(const std::string& path, const std::string& contents);

struct FigureOptions {
  int reps = 500;
  std::uint64_t seed = 20240501;
  int workers = 1;
};

struct FigureData {
  std::vector<ResultRow> cluster;
  std::vector<CostRow> cluster_cost;
  std::vector<ResultRow> sep1;
  std::vector<ResultRow> sep2;
};

std::vector<double> power_grid(int lo, int hi);  // 2^lo .. 2^hi
ExperimentSpec cluster_figure_spec(const FigureOptions& opt);
ExperimentSpec separation1_figure_spec(const FigureOptions& opt);
ExperimentSpec separation2_figure_spec(const FigureOptions& opt);

FigureData reproduce_figures(const FigureOptions& opt);
void write_figures(const FigureData& data, const std::string& out_dir);

}  // namespace msa
