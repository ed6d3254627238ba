#include "msa/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "msa/estimators.hpp"
#include "msa/mc_engine.hpp"
#include "msa/rng.hpp"

namespace msa {

std::vector<double> uniform_design(std::size_t m) {
  std::vector<double> x(m);
  for (std::size_t k = 0; k < m; ++k) x[k] = static_cast<double>(k + 1) / static_cast<double>(m);
  return x;
}

std::vector<std::size_t> neighbour_order(const RegressionSample& sample) {
  std::vector<std::size_t> order(sample.x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(sample.x[a] - sample.x0) < std::abs(sample.x[b] - sample.x0);
  });
  return order;
}

KnnResult adaptive_knn(const RegressionSample& sample, double delta, double tau) {
  const std::size_t m = sample.x.size();
  if (m == 0) throw std::invalid_argument("adaptive_knn: empty sample");
  if (sample.y.size() != m) throw std::invalid_argument("adaptive_knn: x and y lengths differ");
  if (!(delta > 0.0)) throw std::invalid_argument("adaptive_knn: delta must be positive");
  const auto order = neighbour_order(sample);
  const double level = 1.0 + std::sqrt(std::max(0.0, std::log((static_cast<double>(m) + 1.0) / delta)));

  // Prefixes start at the first neighbour; ball r holds the mean of the r+1 nearest.
  std::vector<ConfidenceBall> balls(m);
  double sum = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    sum += sample.y[order[r]];
    const double count = static_cast<double>(r + 1);
    balls[r].center = {sum / count};
    balls[r].radius = 2.0 * tau / std::sqrt(count) * level;
  }
  const std::size_t t = intersection_t_hat(balls);
  return {balls[t].center[0], t + 1};
}

KnnResult adaptive_knn(const RegressionSample& sample) {
  return adaptive_knn(sample, 1.0 / static_cast<double>(sample.x.size()));
}

std::vector<RatePoint> rate_sweep(double alpha, const std::vector<std::size_t>& m_grid, int reps,
                                  std::uint64_t seed, int workers, double amplitude) {
  if (reps < 1) throw std::invalid_argument("rate_sweep: reps must be >= 1");
  for (std::size_t i = 1; i < m_grid.size(); ++i) {
    if (m_grid[i] <= m_grid[i - 1]) throw std::invalid_argument("rate_sweep: m grid must increase");
  }
  const double x0 = 0.5;
  auto f = [=](double x) { return amplitude * std::pow(std::abs(x - x0), alpha); };
  std::vector<RatePoint> out;
  for (std::size_t m : m_grid) {
    if (m == 0) throw std::invalid_argument("rate_sweep: m must be positive");
    const auto x = uniform_design(m);
    std::vector<double> fx(m);
    for (std::size_t k = 0; k < m; ++k) fx[k] = f(x[k]);
    const double target = f(x0);
    std::vector<double> err(static_cast<std::size_t>(reps)), kk(static_cast<std::size_t>(reps));
    run_replicates(static_cast<std::size_t>(reps), workers, [&](std::size_t rep) {
      Stream stream(seed, StreamTag::Knn, m, rep);
      RegressionSample s;
      s.x = x;
      s.x0 = x0;
      s.y.resize(m);
      for (std::size_t k = 0; k < m; ++k) s.y[k] = fx[k] + stream.normal();
      const KnnResult res = adaptive_knn(s);
      err[rep] = (res.estimate - target) * (res.estimate - target);
      kk[rep] = static_cast<double>(res.k_hat);
    });
    const Summary se = summarize(err);
    out.push_back({m, se.mean, se.stderr_, summarize(kk).mean});
  }
  return out;
}

double loglog_slope(const std::vector<RatePoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("loglog_slope: need at least two points");
  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(points.size());
  for (const auto& p : points) {
    if (!(p.mse > 0.0)) throw std::invalid_argument("loglog_slope: mse must be positive");
    sx += std::log(static_cast<double>(p.m));
    sy += std::log(p.mse);
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(static_cast<double>(p.m)) - mx;
    sxy += dx * (std::log(p.mse) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace msa
