#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace msa {

/// Fixed-design regression sample on [0, 1].
struct RegressionSample {
  std::vector<double> x;
  std::vector<double> y;
  double x0 = 0.5;
  std::function<double(double)> f_true;  // evaluation only
};

struct KnnResult {
  double estimate = 0.0;
  std::size_t k_hat = 0;
};

// Grid x_k = k/m, k = 1..m.
std::vector<double> uniform_design(std::size_t m);

// Neighbour order by |x_k - x0|, ties to the smaller index.
std::vector<std::size_t> neighbour_order(const RegressionSample& sample);

// Intersection rule over neighbour prefixes with unit sizes; tau scales the radii.
KnnResult adaptive_knn(const RegressionSample& sample, double delta, double tau = 1.0);
KnnResult adaptive_knn(const RegressionSample& sample);

struct RatePoint {
  std::size_t m = 0;
  double mse = 0.0;
  double mse_stderr = 0.0;
  double mean_k = 0.0;
};

// MC sweep of adaptive_knn at x0 = 0.5 for f(x) = amplitude * |x - 0.5|^alpha with
// unit noise.
std::vector<RatePoint> rate_sweep(double alpha, const std::vector<std::size_t>& m_grid, int reps,
                                  std::uint64_t seed, int workers = 1, double amplitude = 20.0);

// Least-squares slope of log(mse) against log(m).
double loglog_slope(const std::vector<RatePoint>& points);

}  // namespace msa
