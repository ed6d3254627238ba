#include "msa/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "msa/mc_engine.hpp"
#include "msa/oracle.hpp"
#include "msa/rng.hpp"

namespace msa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Source partition implied by the true parameters, when they take exactly two values.
std::optional<std::vector<int>> true_two_groups(const ProblemInstance& inst) {
  const std::size_t m = inst.m();
  if (m == 0) return std::nullopt;
  std::vector<int> g(m, 0);
  const Vector& first = inst.theta()[1];
  std::optional<Vector> second;
  for (std::size_t k = 1; k <= m; ++k) {
    if (inst.theta()[k] == first) continue;
    if (!second) second = inst.theta()[k];
    if (inst.theta()[k] != *second) return std::nullopt;
    g[k - 1] = 1;
  }
  if (!second) return std::nullopt;
  return g;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  // Equal up to renaming iff the label correspondence is a bijection.
  std::map<int, int> fwd, back;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it1, new1] = fwd.emplace(a[i], b[i]);
    auto [it2, new2] = back.emplace(b[i], a[i]);
    if (it1->second != b[i] || it2->second != a[i]) return false;
  }
  return true;
}

struct InstanceContext {
  const ExperimentSpec* spec = nullptr;
  ProblemInstance inst;
  double param = 0.0;
  std::size_t grid_index = 0;
  Vector bias;
  std::optional<SubsetMask> oracle_set;
  std::vector<std::size_t> bias_order;  // sources sorted by true bias
  SampleSizes sorted_sizes;
  CandidateFamily full_family;
  CandidateFamily prefix;
  std::optional<std::vector<int>> groups;
  SubsetMask zero_bias_set;
  std::size_t cluster_k = 1;
  double cluster_c = 0.0;
};

struct RepOutcome {
  double err = 0.0;
  double t_hat = kNaN;
  double selected = kNaN;
  double recovered = kNaN;
  double exact_selection = kNaN;
};

InstanceContext make_context(const ExperimentSpec& spec, std::size_t m, std::size_t grid_index, double param) {
  InstanceContext ctx;
  ctx.spec = &spec;
  ctx.inst = build_instance(spec, m, grid_index, param);
  ctx.param = param;
  ctx.grid_index = grid_index;
  ctx.bias = ctx.inst.induced_bias();
  const auto& sizes = ctx.inst.sizes();

  ctx.bias_order.resize(m);
  std::iota(ctx.bias_order.begin(), ctx.bias_order.end(), 1);
  std::stable_sort(ctx.bias_order.begin(), ctx.bias_order.end(),
                   [&](std::size_t a, std::size_t b) { return ctx.bias[a - 1] < ctx.bias[b - 1]; });
  std::vector<std::int64_t> sorted_n;
  for (auto k : ctx.bias_order) sorted_n.push_back(sizes.at(k));
  ctx.sorted_sizes = SampleSizes(sizes.n0(), sorted_n);

  std::vector<std::size_t> zero{0};
  for (std::size_t k = 1; k <= m; ++k) {
    if (ctx.bias[k - 1] == 0.0) zero.push_back(k);
  }
  ctx.zero_bias_set = SubsetMask(zero);
  ctx.groups = true_two_groups(ctx.inst);

  const auto& est = spec.estimators;
  auto wants = [&](const char* name) { return std::find(est.begin(), est.end(), name) != est.end(); };
  if (wants("oracle") && spec.config != ConfigKind::Cluster && spec.config != ConfigKind::Separation1) {
    const double hmax = ctx.bias.empty() ? 0.0 : *std::max_element(ctx.bias.begin(), ctx.bias.end());
    const BiasConfiguration h(ctx.bias, std::max(1.0, hmax));
    ctx.oracle_set = oracle_rate(h, sizes, ctx.inst.d(), ctx.inst.tau()).argmin_set;
  }
  if (wants("model_selection")) ctx.full_family = full_subset_family(m);
  if (wants("model_selection_prefix")) ctx.prefix = prefix_family(m);

  if (spec.tuning.cluster_k > 0) {
    ctx.cluster_k = spec.tuning.cluster_k;
  } else {
    ctx.cluster_k = spec.config == ConfigKind::Cluster ? 2 : m / 2 + 1;
  }
  ctx.cluster_k = std::min(ctx.cluster_k, std::max<std::size_t>(m, 1));
  ctx.cluster_c = spec.tuning.cluster_c > 0.0 ? spec.tuning.cluster_c : default_cluster_threshold(m, spec.n);
  return ctx;
}

RepOutcome evaluate(const std::string& name, const InstanceContext& ctx, const LocalEstimates& est,
                    const SplitEstimates& split, std::size_t rep) {
  const ExperimentSpec& spec = *ctx.spec;
  const ProblemInstance& inst = ctx.inst;
  const SampleSizes& sizes = inst.sizes();
  const std::size_t d = inst.d();
  const double tau = inst.tau();
  RepOutcome r;
  EstimatorOutput out;

  if (name == "naive") {
    out = naive(est);
  } else if (name == "oracle") {
    if (spec.config == ConfigKind::Cluster) {
      out.value = figure_oracle_cluster(est, inst, ctx.param);
    } else if (spec.config == ConfigKind::Separation1) {
      out.value = figure_oracle_separation1(est, inst, ctx.bias);
    } else {
      out.value = oracle_estimate(est, *ctx.oracle_set, sizes);
      out.selected = ctx.oracle_set;
    }
  } else if (name == "two_source") {
    const double delta = spec.tuning.two_source_delta > 0.0 ? spec.tuning.two_source_delta : default_delta_two_source(sizes);
    out = two_source_structured(est, sizes, tau, delta);
  } else if (name == "model_selection" || name == "model_selection_prefix") {
    const double half = static_cast<double>(sizes.n0()) / 2.0;
    const TargetSplit ts{split.target_halves[0], split.target_halves[1], half, half};
    out = model_selection(est, sizes, name == "model_selection" ? ctx.full_family : ctx.prefix, ts);
  } else if (name == "intersection" || name == "intersection_exact") {
    LocalEstimates sorted;
    sorted.theta_tilde.reserve(est.theta_tilde.size());
    sorted.theta_tilde.push_back(est.theta_tilde[0]);
    for (auto k : ctx.bias_order) sorted.theta_tilde.push_back(est.theta_tilde[k]);
    const double delta = spec.tuning.intersection_delta > 0.0 ? spec.tuning.intersection_delta
                                                              : default_delta_intersection(sizes, d, tau);
    const FeasibilityMode mode = name == "intersection_exact" ? FeasibilityMode::Exact : spec.tuning.feasibility;
    out = intersection_estimator(sorted, ctx.sorted_sizes, tau, delta, mode);
    r.t_hat = static_cast<double>(*out.t_hat);
  } else if (name == "elimination") {
    out = elimination_estimator(est, sizes, d, EliminationParams{spec.tuning.elim_tau, spec.tuning.elim_alpha});
    r.exact_selection = *out.selected == ctx.zero_bias_set ? 1.0 : 0.0;
  } else if (name == "clustering") {
    const std::uint64_t km_seed = stream_key(spec.seed, StreamTag::KMeans, rep);
    out = practical_clustering_estimator(est, sizes, d, ctx.cluster_k, ctx.cluster_c, km_seed);
    if (ctx.groups && ctx.cluster_k == 2) {
      std::vector<int> labels = out.labels;
      r.recovered = same_partition(labels, *ctx.groups) ? 1.0 : 0.0;
    }
  } else if (name == "two_cluster") {
    out = two_cluster_adaptive(split);
    if (ctx.groups) r.recovered = same_partition(out.labels, *ctx.groups) ? 1.0 : 0.0;
  } else {
    throw std::invalid_argument("unknown estimator '" + name + "'");
  }
  r.err = squared_distance(out.value, inst.target());
  if (out.selected) r.selected = static_cast<double>(out.selected->size());
  return r;
}

double nan_mean(const std::vector<double>& v, bool& any) {
  double s = 0.0;
  std::size_t c = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    s += x;
    ++c;
  }
  any = c > 0;
  return any ? s / static_cast<double>(c) : 0.0;
}

}  // namespace

ProblemInstance build_instance(const ExperimentSpec& spec, std::size_t m, std::size_t grid_index, double param) {
  const std::int64_t n0 = spec.target_size();
  const std::uint64_t inst_seed = stream_key(spec.seed, StreamTag::Instance, grid_index, m);
  auto resize = [&](const ProblemInstance& base) {
    return ProblemInstance(base.d(), spec.tau, base.theta(), SampleSizes::uniform(n0, spec.n, base.m()), base.kind(),
                           base.nominal_bias());
  };
  switch (spec.config) {
    case ConfigKind::Cluster:
      return resize(make_cluster_config(spec.d, m, spec.n, param));
    case ConfigKind::Separation1:
      return resize(make_separation1_config(spec.d, m, spec.n, param, inst_seed));
    case ConfigKind::Separation2:
      return resize(make_separation2_config(spec.d, m, spec.n, param, inst_seed));
    case ConfigKind::Hard: {
      HardInstanceSpec hs = spec.hard;
      hs.g1 *= param;
      hs.g2 *= param;
      hs.alpha *= param;
      hs.delta_sep *= param;
      return make_hard_instance(hs, HardBase{spec.d, n0, spec.n, m, spec.tau}, inst_seed).instance;
    }
    case ConfigKind::Custom: {
      std::vector<Vector> theta(m + 1, Vector(spec.d, 0.0));
      Vector nominal(m);
      for (std::size_t k = 1; k <= m; ++k) {
        theta[k][0] = param * spec.custom_h[k - 1];
        nominal[k - 1] = std::abs(theta[k][0]);
      }
      std::vector<std::int64_t> n = spec.custom_sizes.empty() ? std::vector<std::int64_t>(m, spec.n) : spec.custom_sizes;
      return ProblemInstance(spec.d, spec.tau, std::move(theta), SampleSizes(n0, n), ConfigKind::Custom,
                             std::move(nominal));
    }
  }
  throw std::invalid_argument("unsupported configuration kind");
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int workers) {
  spec.validate();
  const auto reps = static_cast<std::size_t>(spec.reps);
  const std::size_t n_est = spec.estimators.size();
  const bool needs_split = std::any_of(spec.estimators.begin(), spec.estimators.end(), [](const std::string& e) {
    return e == "two_cluster" || e.rfind("model_selection", 0) == 0;
  });
  std::vector<ResultRow> rows;

  for (std::size_t m : spec.m_values) {
    for (std::size_t g = 0; g < spec.delta_grid.size(); ++g) {
      const double param = spec.delta_grid[g];
      const InstanceContext ctx = make_context(spec, m, g, param);
      std::vector<RepOutcome> outcomes(n_est * reps);

      // Sampling streams depend on (seed, replicate) only, so every grid point sees
      // the same noise.
      run_replicates(reps, workers, [&](std::size_t rep) {
        LocalEstimates est;
        SplitEstimates split;
        if (spec.split_mode == SplitMode::StrictSplit) {
          split = sample_split_estimates(ctx.inst, spec.seed, rep);
          est = split.combined();
        } else {
          est = sample_estimates(ctx.inst, spec.seed, rep);
          if (needs_split) split = SplitEstimates::reuse(est, static_cast<double>(ctx.inst.sizes().n0()));
        }
        for (std::size_t e = 0; e < n_est; ++e) outcomes[e * reps + rep] = evaluate(spec.estimators[e], ctx, est, split, rep);
      });

      for (std::size_t e = 0; e < n_est; ++e) {
        std::vector<double> err(reps), t(reps), sel(reps), rec(reps), exact(reps);
        for (std::size_t r = 0; r < reps; ++r) {
          const RepOutcome& o = outcomes[e * reps + r];
          err[r] = o.err;
          t[r] = o.t_hat;
          sel[r] = o.selected;
          rec[r] = o.recovered;
          exact[r] = o.exact_selection;
        }
        const Summary s = summarize(err);
        nlohmann::json extra = nlohmann::json::object();
        bool any = false;
        double v = nan_mean(t, any);
        if (any) extra["mean_t_hat"] = v;
        v = nan_mean(sel, any);
        if (any) {
          extra["mean_selected"] = v;
          double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
          for (double x : sel) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
          }
          extra["min_selected"] = lo;
          extra["max_selected"] = hi;
        }
        v = nan_mean(rec, any);
        if (any) extra["recovery_rate"] = v;
        v = nan_mean(exact, any);
        if (any) extra["exact_selection_rate"] = v;

        ResultRow row;
        row.config = to_string(spec.config);
        row.d = spec.d;
        row.m = m;
        row.n = spec.n;
        row.n0 = spec.target_size();
        row.param = param;
        row.estimator = spec.estimators[e];
        row.mse_mean = s.mean;
        row.mse_stderr = s.stderr_;
        row.reps = spec.reps;
        row.seed = spec.seed;
        row.extra = extra.dump();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<CostRow> adaptation_cost_curve(const std::vector<ResultRow>& rows, const std::string& oracle_name,
                                           double tau) {
  std::vector<CostRow> out;
  std::vector<std::size_t> ms;
  for (const auto& r : rows) {
    if (std::find(ms.begin(), ms.end(), r.m) == ms.end()) ms.push_back(r.m);
  }
  for (std::size_t m : ms) {
    std::map<double, double> oracle;
    const ResultRow* any = nullptr;
    for (const auto& r : rows) {
      if (r.m == m && r.estimator == oracle_name) oracle[r.param] = r.mse_mean;
      if (r.m == m) any = &r;
    }
    if (oracle.empty()) throw std::invalid_argument("adaptation cost needs oracle rows for every m");
    const double floor = static_cast<double>(any->d) * tau * tau /
                         static_cast<double>(any->n0 + static_cast<std::int64_t>(m) * any->n);
    std::vector<std::string> names;
    for (const auto& r : rows) {
      if (r.m == m && r.estimator != oracle_name &&
          std::find(names.begin(), names.end(), r.estimator) == names.end()) {
        names.push_back(r.estimator);
      }
    }
    for (const auto& name : names) {
      CostRow c;
      c.config = any->config;
      c.d = any->d;
      c.m = m;
      c.n = any->n;
      c.n0 = any->n0;
      c.rho = static_cast<double>(m) / static_cast<double>(any->d);
      c.estimator = name;
      c.reps = any->reps;
      c.seed = any->seed;
      c.max_ratio = -1.0;
      for (const auto& r : rows) {
        if (r.m != m || r.estimator != name) continue;
        const auto it = oracle.find(r.param);
        if (it == oracle.end()) throw std::invalid_argument("adaptation cost: missing oracle row for a grid point");
        double denom = it->second;
        if (denom < floor) {
          denom = floor;
          ++c.floor_triggers;
        }
        const double ratio = r.mse_mean / denom;
        if (ratio > c.max_ratio) {
          c.max_ratio = ratio;
          c.argmax_param = r.param;
        }
      }
      out.push_back(c);
    }
  }
  return out;
}

std::string csv_header() { return "config,d,m,n,n0,param,estimator,mse_mean,mse_stderr,reps,seed,extra"; }
std::string cost_csv_header() { return "config,d,m,n,n0,rho,estimator,max_ratio,argmax_param,reps,seed"; }

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) {
    out += r.config + "," + std::to_string(r.d) + "," + std::to_string(r.m) + "," + std::to_string(r.n) + "," +
           std::to_string(r.n0) + "," + fmt17(r.param) + "," + r.estimator + "," + fmt17(r.mse_mean) + "," +
           fmt17(r.mse_stderr) + "," + std::to_string(r.reps) + "," + std::to_string(r.seed) + "," +
           csv_quote(r.extra) + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<CostRow>& rows) {
  std::string out = cost_csv_header() + "\n";
  for (const auto& r : rows) {
    out += r.config + "," + std::to_string(r.d) + "," + std::to_string(r.m) + "," + std::to_string(r.n) + "," +
           std::to_string(r.n0) + "," + fmt17(r.rho) + "," + r.estimator + "," + fmt17(r.max_ratio) + "," +
           fmt17(r.argmax_param) + "," + std::to_string(r.reps) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<double> power_grid(int lo, int hi) {
  std::vector<double> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

namespace {

ExperimentSpec figure_base(const FigureOptions& opt) {
  ExperimentSpec s;
  s.d = 100;
  s.n = 400;
  s.tau = 1.0;
  s.reps = opt.reps;
  s.seed = opt.seed;
  s.split_mode = SplitMode::PracticalNoSplit;
  return s;
}

}  // namespace

ExperimentSpec cluster_figure_spec(const FigureOptions& opt) {
  ExperimentSpec s = figure_base(opt);
  s.config = ConfigKind::Cluster;
  s.m_values = {50, 100, 200};
  s.delta_grid = power_grid(-4, 4);
  s.estimators = {"naive", "oracle", "elimination", "clustering"};
  s.out = "cluster_mse.csv";
  return s;
}

ExperimentSpec separation1_figure_spec(const FigureOptions& opt) {
  ExperimentSpec s = figure_base(opt);
  s.config = ConfigKind::Separation1;
  s.m_values = {100};
  s.delta_grid = power_grid(-7, 2);
  s.estimators = {"naive", "oracle", "elimination", "clustering"};
  s.out = "sep1_mse.csv";
  return s;
}

ExperimentSpec separation2_figure_spec(const FigureOptions& opt) {
  ExperimentSpec s = figure_base(opt);
  s.config = ConfigKind::Separation2;
  s.m_values = {100};
  s.delta_grid = power_grid(-2, 4);
  s.estimators = {"naive", "elimination", "clustering"};
  s.out = "sep2_mse.csv";
  return s;
}

FigureData reproduce_figures(const FigureOptions& opt) {
  FigureData data;
  data.cluster = run_experiment(cluster_figure_spec(opt), opt.workers);
  data.cluster_cost = adaptation_cost_curve(data.cluster);
  for (const auto& c : data.cluster_cost) {
    if (c.floor_triggers > 0) {
      std::cerr << "warning: oracle floor engaged " << c.floor_triggers << " time(s) for " << c.estimator
                << " at m=" << c.m << "\n";
    }
  }
  data.sep1 = run_experiment(separation1_figure_spec(opt), opt.workers);
  data.sep2 = run_experiment(separation2_figure_spec(opt), opt.workers);
  return data;
}

void write_figures(const FigureData& data, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file((dir / "cluster_mse.csv").string(), to_csv(data.cluster));
  write_file((dir / "cluster_cost.csv").string(), to_csv(data.cluster_cost));
  write_file((dir / "sep1_mse.csv").string(), to_csv(data.sep1));
  write_file((dir / "sep2_mse.csv").string(), to_csv(data.sep2));
}

}  // namespace msa
