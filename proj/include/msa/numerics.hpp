#pragma once

#include <cstdint>
#include <vector>

#include "msa/model.hpp"

namespace msa {

/// Dense row-major d x d matrix kept symmetric by its producers.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t d) : d_(d), a_(d * d, 0.0) {}

  std::size_t dim() const { return d_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  const std::vector<double>& data() const { return a_; }

  double max_abs() const;
  double asymmetry() const;  // max |A_ij - A_ji|
  Vector multiply(const Vector& v) const;

 private:
  std::size_t d_ = 0;
  std::vector<double> a_;
};

struct MeanCov {
  Vector mean;
  SymmetricMatrix cov;
};

// Weighted mean and covariance sum_k w_k (x_k - mean)(x_k - mean)^T / sum_k w_k.
MeanCov weighted_mean_cov(const std::vector<Vector>& vectors, const std::vector<double>& weights);

struct EigenPairs {
  std::vector<double> values;        // descending
  std::vector<Vector> vectors;       // unit columns, largest-|entry| positive
};

// Top-a eigenpairs of a symmetric matrix. Deterministic in A.
EigenPairs top_eigenvectors(const SymmetricMatrix& a_mat, std::size_t a);

struct KMeans1D {
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<int> labels;  // 1 or 2, nearest center, ties to 1
  double objective = 0.0;
};

KMeans1D kmeans_1d_two(const std::vector<double>& points);

struct KMeansResult {
  std::vector<Vector> centers;
  std::vector<int> labels;  // 0-based cluster index
  double objective = 0.0;
  std::vector<double> trace;  // objective after each assignment step (single run)
};

KMeansResult kmeans_lloyd(const std::vector<Vector>& points, std::size_t k, std::uint64_t seed,
                          int restarts = 10);

// One seeded Lloyd run; restart selects the seeding stream.
KMeansResult kmeans_lloyd_single(const std::vector<Vector>& points, std::size_t k,
                                 std::uint64_t seed, std::uint64_t restart);

// samples[k] holds the raw observations of domain k.
double tau_proxy_normal_mean(const std::vector<std::vector<Vector>>& samples);

struct RegressionDomain {
  std::vector<Vector> x;  // n_k rows of length d
  std::vector<double> y;
};

double tau_proxy_linear_regression(const std::vector<RegressionDomain>& domains);

}  // namespace msa
