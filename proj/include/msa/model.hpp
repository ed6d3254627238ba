#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace msa {

using Vector = std::vector<double>;

double squared_distance(const Vector& a, const Vector& b);
double norm(const Vector& a);

/// Per-source upper bounds h_k on the target-to-source bias. Entries live in
/// [0, upper]; upper is 1 unless a construction explicitly relaxes it.
class BiasConfiguration {
 public:
  BiasConfiguration() = default;
  explicit BiasConfiguration(Vector h, double upper = 1.0);

  std::size_t m() const { return h_.size(); }
  double operator[](std::size_t k) const { return h_[k]; }
  const Vector& values() const { return h_; }
  double upper() const { return upper_; }

 private:
  Vector h_;
  double upper_ = 1.0;
};

/// Target size n0 and source sizes n_1..n_m. Index 0 of at() is the target.
class SampleSizes {
 public:
  SampleSizes() = default;
  SampleSizes(std::int64_t n0, std::vector<std::int64_t> n);
  static SampleSizes uniform(std::int64_t n0, std::int64_t n, std::size_t m);

  std::size_t m() const { return n_.size(); }
  std::int64_t n0() const { return n0_; }
  const std::vector<std::int64_t>& sources() const { return n_; }
  std::int64_t at(std::size_t k) const { return k == 0 ? n0_ : n_[k - 1]; }
  std::int64_t total() const;
  bool equal() const;

 private:
  std::int64_t n0_ = 1;
  std::vector<std::int64_t> n_;
};

enum class ConfigKind { Cluster, Separation1, Separation2, Hard, Custom };

std::string to_string(ConfigKind kind);
ConfigKind config_kind_from_string(const std::string& name);

/// True parameters theta*_0..theta*_m with isotropic noise scale tau.
class ProblemInstance {
 public:
  ProblemInstance() = default;
  ProblemInstance(std::size_t d, double tau, std::vector<Vector> theta, SampleSizes sizes,
                  ConfigKind kind = ConfigKind::Custom, Vector nominal_h = {});

  std::size_t d() const { return d_; }
  std::size_t m() const { return theta_.size() - 1; }
  double tau() const { return tau_; }
  const std::vector<Vector>& theta() const { return theta_; }
  const Vector& target() const { return theta_[0]; }
  const SampleSizes& sizes() const { return sizes_; }
  ConfigKind kind() const { return kind_; }

  // Bias the generator intended (empty for custom instances).
  const Vector& nominal_bias() const { return nominal_h_; }

  // ||theta*_k - theta*_0||, not clamped.
  Vector induced_bias() const;

  // Induced bias clamped to [0, 1]; a warning is appended when the clamp engages.
  BiasConfiguration bias_configuration(std::vector<std::string>* warnings = nullptr) const;

  // Non-fatal diagnostics, e.g. d*tau^2/n0 > 1.
  std::vector<std::string> warnings() const;

 private:
  std::size_t d_ = 0;
  double tau_ = 1.0;
  std::vector<Vector> theta_;
  SampleSizes sizes_;
  ConfigKind kind_ = ConfigKind::Custom;
  Vector nominal_h_;
};

/// One realised draw of the local estimators.
struct LocalEstimates {
  std::vector<Vector> theta_tilde;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  std::size_t m() const { return theta_tilde.size() - 1; }
  std::size_t d() const { return theta_tilde.empty() ? 0 : theta_tilde[0].size(); }
  const Vector& target() const { return theta_tilde[0]; }
};

/// Independent split draws: two target halves (effective size n0/2) and three
/// source thirds (effective size n_k/3), as used by the sample-splitting estimators.
struct SplitEstimates {
  std::array<Vector, 2> target_halves;
  std::array<std::vector<Vector>, 3> source_parts;
  double target_half_size = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  std::size_t m() const { return source_parts[0].size(); }

  // Full-sample estimates implied by the parts (mean of halves / thirds).
  LocalEstimates combined() const;

  // No-split view: every role reuses the same estimate.
  static SplitEstimates reuse(const LocalEstimates& estimates, double n0);
};

LocalEstimates sample_estimates(const ProblemInstance& instance, std::uint64_t seed,
                                std::uint64_t replicate);

SplitEstimates sample_split_estimates(const ProblemInstance& instance, std::uint64_t seed,
                                      std::uint64_t replicate);

ProblemInstance make_cluster_config(std::size_t d, std::size_t m, std::int64_t n, double delta);
ProblemInstance make_separation1_config(std::size_t d, std::size_t m, std::int64_t n, double delta,
                                        std::uint64_t seed);
ProblemInstance make_separation2_config(std::size_t d, std::size_t m, std::int64_t n, double delta,
                                        std::uint64_t seed);

enum class HardKind { TwoPoint, RandomSignTwoCluster, BalancedTwoCluster };

struct HardInstanceSpec {
  HardKind kind = HardKind::TwoPoint;
  double g1 = 0.0;
  double g2 = 0.0;
  double alpha = 0.0;
  double delta_sep = 0.0;
  int hypothesis = 0;
  // RandomSign only: when non-empty, used instead of sampled Rademacher signs.
  std::vector<int> signs;
};

struct HardBase {
  std::size_t d = 1;
  std::int64_t n0 = 1;
  std::int64_t n = 1;
  std::size_t m = 2;
  double tau = 1.0;
};

struct HardInstance {
  ProblemInstance instance;
  Vector direction;        // unit v (RandomSign) or e1
  std::vector<int> signs;  // RandomSign only
};

HardInstance make_hard_instance(const HardInstanceSpec& spec, const HardBase& base,
                                std::uint64_t seed);

}  // namespace msa
