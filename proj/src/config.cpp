#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "msa/harness.hpp"

namespace msa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.front() == '-') {
    throw std::invalid_argument("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

HardKind hard_kind_from_string(const std::string& v) {
  if (v == "two_point") return HardKind::TwoPoint;
  if (v == "random_sign") return HardKind::RandomSignTwoCluster;
  if (v == "balanced") return HardKind::BalancedTwoCluster;
  throw std::invalid_argument("config: unknown hard_kind '" + v + "'");
}

}  // namespace

std::string to_string(SplitMode mode) {
  return mode == SplitMode::StrictSplit ? "strict_split" : "practical_no_split";
}

SplitMode split_mode_from_string(const std::string& name) {
  if (name == "strict_split") return SplitMode::StrictSplit;
  if (name == "practical_no_split") return SplitMode::PracticalNoSplit;
  throw std::invalid_argument("unknown split mode '" + name + "'");
}

const std::vector<std::string>& known_estimators() {
  static const std::vector<std::string> names{
      "naive",        "oracle",       "two_source",        "model_selection", "model_selection_prefix",
      "intersection", "intersection_exact", "elimination", "clustering",      "two_cluster"};
  return names;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
    }
    for (const auto& kv : out) {
      if (kv.first == key) throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

ExperimentSpec spec_from_text(const std::string& text) {
  ExperimentSpec spec;
  std::vector<double> rho;
  std::vector<std::size_t> m_list;
  bool grid_set = false;
  for (const auto& [key, v] : parse_key_values(text)) {
    if (key == "config") {
      spec.config = config_kind_from_string(v);
    } else if (key == "d") {
      spec.d = static_cast<std::size_t>(to_int(key, v));
    } else if (key == "m") {
      for (const auto& item : split_list(v)) m_list.push_back(static_cast<std::size_t>(to_int(key, item)));
    } else if (key == "rho") {
      rho = to_doubles(key, v);
    } else if (key == "n") {
      spec.n = to_int(key, v);
    } else if (key == "n0") {
      spec.n0 = to_int(key, v);
    } else if (key == "tau") {
      spec.tau = to_double(key, v);
    } else if (key == "delta_grid") {
      spec.delta_grid = to_doubles(key, v);
      grid_set = true;
    } else if (key == "estimators") {
      spec.estimators = split_list(v);
    } else if (key == "reps") {
      spec.reps = static_cast<int>(to_int(key, v));
    } else if (key == "seed") {
      spec.seed = to_u64(key, v);
    } else if (key == "split_mode") {
      spec.split_mode = split_mode_from_string(v);
    } else if (key == "out") {
      spec.out = v;
    } else if (key == "elim_alpha") {
      spec.tuning.elim_alpha = to_double(key, v);
    } else if (key == "elim_tau") {
      spec.tuning.elim_tau = to_double(key, v);
    } else if (key == "cluster_k") {
      spec.tuning.cluster_k = static_cast<std::size_t>(to_int(key, v));
    } else if (key == "cluster_c") {
      spec.tuning.cluster_c = to_double(key, v);
    } else if (key == "intersection_delta") {
      spec.tuning.intersection_delta = to_double(key, v);
    } else if (key == "two_source_delta") {
      spec.tuning.two_source_delta = to_double(key, v);
    } else if (key == "feasibility") {
      if (v == "pairwise") {
        spec.tuning.feasibility = FeasibilityMode::Pairwise;
      } else if (v == "exact") {
        spec.tuning.feasibility = FeasibilityMode::Exact;
      } else {
        throw std::invalid_argument("config: feasibility must be 'pairwise' or 'exact'");
      }
    } else if (key == "hard_kind") {
      spec.hard.kind = hard_kind_from_string(v);
    } else if (key == "g1") {
      spec.hard.g1 = to_double(key, v);
    } else if (key == "g2") {
      spec.hard.g2 = to_double(key, v);
    } else if (key == "alpha") {
      spec.hard.alpha = to_double(key, v);
    } else if (key == "delta_sep") {
      spec.hard.delta_sep = to_double(key, v);
    } else if (key == "hypothesis") {
      spec.hard.hypothesis = static_cast<int>(to_int(key, v));
    } else if (key == "h") {
      spec.custom_h = to_doubles(key, v);
    } else if (key == "sizes") {
      for (const auto& item : split_list(v)) spec.custom_sizes.push_back(to_int(key, item));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }

  if (!rho.empty() && !m_list.empty()) throw std::invalid_argument("config: give either m or rho, not both");
  for (double r : rho) {
    const double m = r * static_cast<double>(spec.d);
    if (!(r > 0.0) || std::abs(m - std::round(m)) > 1e-9) {
      throw std::invalid_argument("config: rho * d must be a positive integer");
    }
    m_list.push_back(static_cast<std::size_t>(std::llround(m)));
  }
  if (spec.config == ConfigKind::Custom) {
    if (!m_list.empty() && (m_list.size() != 1 || m_list[0] != spec.custom_h.size())) {
      throw std::invalid_argument("config: custom m must equal the length of h");
    }
    m_list = {spec.custom_h.size()};
  }
  spec.m_values = m_list;
  if (!grid_set && (spec.config == ConfigKind::Custom || spec.config == ConfigKind::Hard)) spec.delta_grid = {1.0};
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_text(ss.str());
}

void apply_seed_override(ExperimentSpec& spec) {
  if (const char* env = std::getenv("MSA_SEED"); env != nullptr && *env != '\0') {
    spec.seed = to_u64("MSA_SEED", env);
  }
}

void ExperimentSpec::validate() const {
  if (d == 0) throw std::invalid_argument("spec: d must be positive");
  if (n < 1 || n0 < 0) throw std::invalid_argument("spec: sample sizes must be positive");
  if (!(tau >= 0.0)) throw std::invalid_argument("spec: tau must be >= 0");
  if (reps < 1) throw std::invalid_argument("spec: reps must be >= 1");
  if (m_values.empty()) throw std::invalid_argument("spec: m (or rho) is required");
  if (delta_grid.empty()) throw std::invalid_argument("spec: delta_grid must be nonempty");
  if (estimators.empty()) throw std::invalid_argument("spec: estimators must be nonempty");
  const auto& known = known_estimators();
  std::set<std::string> seen;
  for (const auto& e : estimators) {
    if (std::find(known.begin(), known.end(), e) == known.end()) {
      throw std::invalid_argument("spec: unknown estimator '" + e + "'");
    }
    if (!seen.insert(e).second) throw std::invalid_argument("spec: estimator '" + e + "' listed twice");
  }
  if (seen.count("two_source") > 0) {
    for (auto m : m_values) {
      if (m != 2) throw std::invalid_argument("spec: two_source needs m = 2");
    }
  }
  if (config == ConfigKind::Custom) {
    if (!custom_sizes.empty() && custom_sizes.size() != custom_h.size()) {
      throw std::invalid_argument("spec: custom sizes must match the length of h");
    }
  }
}

}  // namespace msa
