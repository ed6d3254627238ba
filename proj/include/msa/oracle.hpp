#pragma once

#include <string>
#include <vector>

#include "msa/model.hpp"

namespace msa {

/// Subset of {0..m} that always contains the target index 0. Members are sorted.
class SubsetMask {
 public:
  SubsetMask() : members_{0} {}
  explicit SubsetMask(std::vector<std::size_t> members);
  static SubsetMask from_sources(const std::vector<std::size_t>& sources);

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(std::size_t k) const;
  std::string to_string() const;

  friend bool operator==(const SubsetMask& a, const SubsetMask& b) { return a.members_ == b.members_; }
  friend bool operator<(const SubsetMask& a, const SubsetMask& b);

 private:
  std::vector<std::size_t> members_;
};

// Largest bias in S (h_0 = 0) and total sample size over S.
double subset_bias(const SubsetMask& s, const BiasConfiguration& h);
double subset_size(const SubsetMask& s, const SampleSizes& sizes);

struct SubsetTerms {
  SubsetMask subset;
  double variance = 0.0;  // d tau^2 / N_S
  double bias2 = 0.0;     // h_S^2
};

struct OracleRateResult {
  double rate = 0.0;
  SubsetMask argmin_set;
  std::vector<SubsetTerms> breakdown;  // the level-set candidates that were compared
};

// min over S containing 0 of d tau^2 / N_S + h_S^2, evaluated on the level sets of h.
OracleRateResult oracle_rate(const BiasConfiguration& h, const SampleSizes& sizes, std::size_t d,
                             double tau);

Vector oracle_estimate(const LocalEstimates& estimates, const SubsetMask& s, const SampleSizes& sizes);

struct SubsetCheck {
  bool ok = false;
  char clause = 0;  // 'a', 'b', 'c' or 0 when ok
  std::string detail;
};

// Level-set characterisation of a minimiser of max(h_S^2, d tau^2 / N_S).
SubsetCheck check_optimal_subset(const SubsetMask& candidate, const BiasConfiguration& h,
                                 const SampleSizes& sizes, std::size_t d, double tau);

// Cluster-config oracle: pick the all-pool or the half-pool by their closed-form MSE.
bool cluster_oracle_prefers_all(std::size_t d, std::size_t m, std::int64_t n, double delta);
Vector figure_oracle_cluster(const LocalEstimates& estimates, const ProblemInstance& instance,
                             double delta);

// Separation I oracle: prefix length k0 in [m/2, m] over sources sorted by true bias.
std::size_t separation1_oracle_length(const Vector& h_values, std::size_t d, std::int64_t n);
Vector figure_oracle_separation1(const LocalEstimates& estimates, const ProblemInstance& instance,
                                 const Vector& h_values);

}  // namespace msa
