#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msa/model.hpp"
#include "msa/oracle.hpp"

namespace msa {

struct ConfidenceBall {
  Vector center;
  double radius = 0.0;
};

/// Estimate plus whatever the estimator decided along the way. weights[k] is the
/// coefficient of domain k's estimate (for split estimators: of the part that was
/// pooled), so every output is sum_k weights[k] * estimate_k with weights summing to 1.
struct EstimatorOutput {
  Vector value;
  Vector weights;
  std::optional<std::size_t> t_hat;
  std::optional<SubsetMask> selected;
  std::vector<int> labels;
  std::optional<std::size_t> choice;
};

// Source-index sets (indices 1..m, target excluded).
using CandidateFamily = std::vector<std::vector<std::size_t>>;

CandidateFamily full_subset_family(std::size_t m);
CandidateFamily prefix_family(std::size_t m);

struct TargetSplit {
  Vector first;
  Vector second;
  double n_first = 0.0;
  double n_second = 0.0;
};

struct EliminationParams {
  double tau = 1.0;
  double alpha = 1.0;
};

struct ClusterAssignment {
  std::vector<int> labels;  // 1 or 2 per source
  double c1 = 0.0;
  double c2 = 0.0;
  Vector direction;
  Vector mean;
};

enum class FeasibilityMode { Pairwise, Exact };

EstimatorOutput naive(const LocalEstimates& estimates);

double default_delta_two_source(const SampleSizes& sizes);
EstimatorOutput two_source_structured(const LocalEstimates& estimates, const SampleSizes& sizes,
                                      double tau, double delta);

EstimatorOutput model_selection(const LocalEstimates& estimates, const SampleSizes& sizes,
                                const CandidateFamily& family, const TargetSplit& split);

double default_delta_intersection(const SampleSizes& sizes, std::size_t d, double tau);

// Largest t such that balls 0..t share a point, scanning upward and stopping at the
// first failure. Balls are given in prefix order.
std::size_t intersection_t_hat(const std::vector<ConfidenceBall>& balls,
                               FeasibilityMode mode = FeasibilityMode::Pairwise);

// Common point of the balls by cyclic projection, if one is found within tolerance.
std::optional<Vector> ball_intersection_point(const std::vector<ConfidenceBall>& balls);

EstimatorOutput intersection_estimator(const LocalEstimates& estimates, const SampleSizes& sizes,
                                       double tau, double delta,
                                       FeasibilityMode mode = FeasibilityMode::Pairwise);

double elimination_threshold(std::size_t d, const EliminationParams& params, std::int64_t n0,
                             std::int64_t nk);
EstimatorOutput elimination_estimator(const LocalEstimates& estimates, const SampleSizes& sizes,
                                      std::size_t d, const EliminationParams& params);

ClusterAssignment sample_split_clustering(const std::vector<Vector>& first_half,
                                          const std::vector<Vector>& second_half);

// Labels the second half against the 1-D 2-means of the first half's projections on
// a given direction; sample_split_clustering is this with the leading eigenvector.
ClusterAssignment assign_by_projection(const std::vector<Vector>& first_half,
                                       const std::vector<Vector>& second_half, const Vector& direction);

EstimatorOutput two_cluster_adaptive(const SplitEstimates& split);

double default_cluster_threshold(std::size_t m, std::int64_t n);
EstimatorOutput practical_clustering_estimator(const LocalEstimates& estimates, const SampleSizes& sizes,
                                               std::size_t d, std::size_t k, double c_thresh,
                                               std::uint64_t seed = 0);

}  // namespace msa
