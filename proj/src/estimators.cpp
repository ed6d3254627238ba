#include "msa/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "msa/numerics.hpp"

namespace msa {

namespace {

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Weighted average of the listed domains; weights are n_k.
EstimatorOutput pool(const LocalEstimates& est, const SampleSizes& sizes, const std::vector<std::size_t>& members) {
  const std::size_t d = est.d();
  EstimatorOutput out;
  out.value.assign(d, 0.0);
  out.weights.assign(est.m() + 1, 0.0);
  double total = 0.0;
  for (auto k : members) total += static_cast<double>(sizes.at(k));
  for (auto k : members) {
    const double w = static_cast<double>(sizes.at(k)) / total;
    out.weights[k] = w;
  }
  for (auto k : members) {
    const double w = static_cast<double>(sizes.at(k));
    for (std::size_t i = 0; i < d; ++i) out.value[i] += w * est.theta_tilde[k][i];
  }
  for (auto& v : out.value) v /= total;
  return out;
}

void check_shapes(const LocalEstimates& est, const SampleSizes& sizes) {
  if (est.theta_tilde.empty()) throw std::invalid_argument("no local estimates");
  if (est.m() != sizes.m()) throw std::invalid_argument("estimates and sample sizes disagree on m");
}

}  // namespace

CandidateFamily full_subset_family(std::size_t m) {
  if (m > 20) throw std::invalid_argument("full subset family is limited to m <= 20");
  CandidateFamily out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask & (std::size_t{1} << k)) s.push_back(k + 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

CandidateFamily prefix_family(std::size_t m) {
  CandidateFamily out;
  std::vector<std::size_t> s;
  out.push_back(s);
  for (std::size_t k = 1; k <= m; ++k) {
    s.push_back(k);
    out.push_back(s);
  }
  return out;
}

EstimatorOutput naive(const LocalEstimates& estimates) {
  if (estimates.theta_tilde.empty()) throw std::invalid_argument("no local estimates");
  EstimatorOutput out;
  out.value = estimates.theta_tilde[0];
  out.weights.assign(estimates.m() + 1, 0.0);
  out.weights[0] = 1.0;
  out.selected = SubsetMask();
  return out;
}

double default_delta_two_source(const SampleSizes& sizes) {
  if (sizes.m() < 1) throw std::invalid_argument("two-source default needs a source");
  const double n = static_cast<double>(sizes.at(1));
  return 1.0 / (n * n);
}

EstimatorOutput two_source_structured(const LocalEstimates& estimates, const SampleSizes& sizes,
                                      double tau, double delta) {
  check_shapes(estimates, sizes);
  if (estimates.m() != 2) throw std::invalid_argument("two-source estimator requires m = 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const auto& th = estimates.theta_tilde;
  const double d = static_cast<double>(estimates.d());
  const double n0 = static_cast<double>(sizes.n0());
  const double level = std::sqrt(d) + std::sqrt(std::log(1.0 / delta));
  const double r0 = tau / std::sqrt(n0) * level;

  auto pooled_or_target = [&](std::size_t k) {
    const double nk = static_cast<double>(sizes.at(k));
    const double rk = tau / std::sqrt(n0 + nk) * level;
    Vector pooled(th[0].size());
    for (std::size_t i = 0; i < pooled.size(); ++i) pooled[i] = (n0 * th[0][i] + nk * th[k][i]) / (n0 + nk);
    EstimatorOutput out;
    out.weights.assign(3, 0.0);
    if (std::sqrt(squared_distance(th[0], pooled)) <= r0 + rk) {
      out.value = std::move(pooled);
      out.weights[0] = n0 / (n0 + nk);
      out.weights[k] = nk / (n0 + nk);
      out.selected = SubsetMask({0, k});
    } else {
      out.value = th[0];
      out.weights[0] = 1.0;
      out.selected = SubsetMask();
    }
    return out;
  };

  const double t = squared_distance(th[1], th[0]) - squared_distance(th[2], th[0]);
  const std::size_t pick = t <= tau * tau * std::log(1.0 / delta) / n0 ? 1 : 2;
  EstimatorOutput out = pooled_or_target(pick);
  out.choice = pick;
  return out;
}

EstimatorOutput model_selection(const LocalEstimates& estimates, const SampleSizes& sizes,
                                const CandidateFamily& family, const TargetSplit& split) {
  check_shapes(estimates, sizes);
  if (family.empty()) throw std::invalid_argument("model selection needs a nonempty family");
  const std::size_t d = estimates.d();
  if (split.first.size() != d || split.second.size() != d) throw std::invalid_argument("target split has wrong dimension");
  if (!(split.n_second > 0.0)) throw std::invalid_argument("target split sizes must be positive");

  std::size_t best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  Vector best_xi;
  Vector xi(d);
  for (std::size_t j = 0; j < family.size(); ++j) {
    double total = split.n_second;
    for (std::size_t i = 0; i < d; ++i) xi[i] = split.n_second * split.second[i];
    for (auto k : family[j]) {
      if (k == 0 || k > estimates.m()) throw std::invalid_argument("family member out of range");
      const double w = static_cast<double>(sizes.at(k));
      total += w;
      for (std::size_t i = 0; i < d; ++i) xi[i] += w * estimates.theta_tilde[k][i];
    }
    for (auto& v : xi) v /= total;
    const double err = squared_distance(xi, split.first);
    if (err < best_err) {
      best_err = err;
      best = j;
      best_xi = xi;
    }
  }

  EstimatorOutput out;
  out.value = std::move(best_xi);
  out.weights.assign(estimates.m() + 1, 0.0);
  double total = split.n_second;
  for (auto k : family[best]) total += static_cast<double>(sizes.at(k));
  out.weights[0] = split.n_second / total;
  for (auto k : family[best]) out.weights[k] = static_cast<double>(sizes.at(k)) / total;
  out.selected = SubsetMask::from_sources(family[best]);
  out.choice = best;
  return out;
}

double default_delta_intersection(const SampleSizes& sizes, std::size_t d, double tau) {
  const double v = static_cast<double>(d) * tau * tau / static_cast<double>(sizes.total());
  return std::clamp(v, 1e-12, 0.5);
}

std::optional<Vector> ball_intersection_point(const std::vector<ConfidenceBall>& balls) {
  if (balls.empty()) return std::nullopt;
  double max_r = 0.0;
  for (const auto& b : balls) max_r = std::max(max_r, b.radius);
  const double tol = 1e-9 * std::max(max_r, std::numeric_limits<double>::min());
  Vector x = balls.back().center;
  const std::size_t d = x.size();
  for (int iter = 0; iter < 10000; ++iter) {
    double worst = 0.0;
    for (const auto& b : balls) {
      const double dist = std::sqrt(squared_distance(x, b.center));
      const double excess = dist - b.radius;
      worst = std::max(worst, excess);
      if (excess > 0.0) {
        const double s = b.radius / dist;
        for (std::size_t i = 0; i < d; ++i) x[i] = b.center[i] + s * (x[i] - b.center[i]);
      }
    }
    if (worst <= tol) return x;
  }
  for (const auto& b : balls) {
    if (std::sqrt(squared_distance(x, b.center)) - b.radius > tol) return std::nullopt;
  }
  return x;
}

std::size_t intersection_t_hat(const std::vector<ConfidenceBall>& balls, FeasibilityMode mode) {
  if (balls.empty()) throw std::invalid_argument("intersection scan needs at least one ball");
  const std::size_t d = balls[0].center.size();
  std::size_t t = 0;
  if (d == 1) {
    // On a line, pairwise overlap of intervals is the same as a common point.
    double lo = balls[0].center[0] - balls[0].radius;
    double hi = balls[0].center[0] + balls[0].radius;
    for (std::size_t r = 1; r < balls.size(); ++r) {
      const double nlo = std::max(lo, balls[r].center[0] - balls[r].radius);
      const double nhi = std::min(hi, balls[r].center[0] + balls[r].radius);
      if (nlo > nhi) break;
      lo = nlo;
      hi = nhi;
      t = r;
    }
    return t;
  }
  for (std::size_t r = 1; r < balls.size(); ++r) {
    bool ok = true;
    for (std::size_t s = 0; s < r && ok; ++s) {
      const double reach = balls[r].radius + balls[s].radius;
      ok = squared_distance(balls[r].center, balls[s].center) <= reach * reach;
    }
    if (ok && mode == FeasibilityMode::Exact) {
      std::vector<ConfidenceBall> prefix(balls.begin(), balls.begin() + static_cast<std::ptrdiff_t>(r + 1));
      ok = ball_intersection_point(prefix).has_value();
    }
    if (!ok) break;
    t = r;
  }
  return t;
}

EstimatorOutput intersection_estimator(const LocalEstimates& estimates, const SampleSizes& sizes,
                                       double tau, double delta, FeasibilityMode mode) {
  check_shapes(estimates, sizes);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const std::size_t m = estimates.m();
  const std::size_t d = estimates.d();
  const double level =
      std::sqrt(static_cast<double>(d)) + std::sqrt(std::max(0.0, std::log((m + 1.0) / delta)));

  std::vector<ConfidenceBall> balls;
  balls.reserve(m + 1);
  Vector sum(d, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r <= m; ++r) {
    const double w = static_cast<double>(sizes.at(r));
    total += w;
    for (std::size_t i = 0; i < d; ++i) sum[i] += w * estimates.theta_tilde[r][i];
    ConfidenceBall b;
    b.center.resize(d);
    for (std::size_t i = 0; i < d; ++i) b.center[i] = sum[i] / total;
    b.radius = 2.0 * tau / std::sqrt(total) * level;
    balls.push_back(std::move(b));
  }
  const std::size_t t = intersection_t_hat(balls, mode);
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k <= t; ++k) members.push_back(k);
  EstimatorOutput out = pool(estimates, sizes, members);
  out.value = balls[t].center;
  out.t_hat = t;
  out.selected = SubsetMask(members);
  return out;
}

double elimination_threshold(std::size_t d, const EliminationParams& params, std::int64_t n0, std::int64_t nk) {
  const double hi = static_cast<double>(std::max(n0, nk));
  const double lo = static_cast<double>(std::min(n0, nk));
  return params.tau * std::sqrt(static_cast<double>(d) * params.alpha * std::log(hi) / lo);
}

EstimatorOutput elimination_estimator(const LocalEstimates& estimates, const SampleSizes& sizes,
                                      std::size_t d, const EliminationParams& params) {
  check_shapes(estimates, sizes);
  if (!(params.alpha > 0.0)) throw std::invalid_argument("elimination alpha must be positive");
  std::vector<std::size_t> members{0};
  for (std::size_t k = 1; k <= estimates.m(); ++k) {
    const double thr = elimination_threshold(d, params, sizes.n0(), sizes.at(k));
    if (squared_distance(estimates.theta_tilde[k], estimates.theta_tilde[0]) <= thr * thr) members.push_back(k);
  }
  EstimatorOutput out = pool(estimates, sizes, members);
  out.selected = SubsetMask(members);
  return out;
}

ClusterAssignment assign_by_projection(const std::vector<Vector>& first_half,
                                       const std::vector<Vector>& second_half, const Vector& direction) {
  const std::size_t m = first_half.size();
  if (m < 2 || second_half.size() != m) throw std::invalid_argument("clustering needs two halves with m >= 2");
  MeanCov mc = weighted_mean_cov(first_half, std::vector<double>(m, 1.0));
  std::vector<double> proj(m);
  Vector c(direction.size());
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = first_half[k][i] - mc.mean[i];
    proj[k] = dot(direction, c);
  }
  KMeans1D km = kmeans_1d_two(proj);
  ClusterAssignment out;
  out.c1 = km.c1;
  out.c2 = km.c2;
  out.direction = direction;
  out.labels.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = second_half[k][i] - mc.mean[i];
    const double s = dot(direction, c);
    out.labels[k] = std::abs(s - km.c2) < std::abs(s - km.c1) ? 2 : 1;
  }
  out.mean = std::move(mc.mean);
  return out;
}

ClusterAssignment sample_split_clustering(const std::vector<Vector>& first_half,
                                          const std::vector<Vector>& second_half) {
  const std::size_t m = first_half.size();
  if (m < 2 || second_half.size() != m) throw std::invalid_argument("clustering needs two halves with m >= 2");
  MeanCov mc = weighted_mean_cov(first_half, std::vector<double>(m, 1.0));
  const EigenPairs top = top_eigenvectors(mc.cov, 1);
  return assign_by_projection(first_half, second_half, top.vectors[0]);
}

EstimatorOutput two_cluster_adaptive(const SplitEstimates& split) {
  const std::size_t m = split.m();
  for (const auto& part : split.source_parts) {
    if (part.size() != m) throw std::invalid_argument("two-cluster estimator: missing source splits");
  }
  if (split.target_halves[0].empty() || split.target_halves[1].empty()) {
    throw std::invalid_argument("two-cluster estimator: missing target halves");
  }
  const ClusterAssignment ca = sample_split_clustering(split.source_parts[0], split.source_parts[1]);
  const std::size_t d = split.target_halves[0].size();

  std::vector<Vector> candidates{split.target_halves[0]};
  std::vector<std::vector<std::size_t>> groups{{}};
  for (int r = 1; r <= 2; ++r) {
    std::vector<std::size_t> g;
    Vector v = split.target_halves[0];
    for (std::size_t k = 0; k < m; ++k) {
      if (ca.labels[k] != r) continue;
      g.push_back(k + 1);
      for (std::size_t i = 0; i < d; ++i) v[i] += split.source_parts[2][k][i];
    }
    for (auto& x : v) x /= 1.0 + static_cast<double>(g.size());
    candidates.push_back(std::move(v));
    groups.push_back(std::move(g));
  }
  std::size_t best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const double err = squared_distance(split.target_halves[1], candidates[j]);
    if (err < best_err) {
      best_err = err;
      best = j;
    }
  }
  EstimatorOutput out;
  out.value = candidates[best];
  out.weights.assign(m + 1, 0.0);
  const double w = 1.0 / (1.0 + static_cast<double>(groups[best].size()));
  out.weights[0] = w;
  for (auto k : groups[best]) out.weights[k] = w;
  out.selected = SubsetMask::from_sources(groups[best]);
  out.labels = ca.labels;
  out.choice = best;
  return out;
}

double default_cluster_threshold(std::size_t m, std::int64_t n) {
  return 2.0 * std::log(static_cast<double>(m) * static_cast<double>(n));
}

EstimatorOutput practical_clustering_estimator(const LocalEstimates& estimates, const SampleSizes& sizes,
                                               std::size_t d, std::size_t k, double c_thresh,
                                               std::uint64_t seed) {
  check_shapes(estimates, sizes);
  const std::size_t m = estimates.m();
  if (k < 1) throw std::invalid_argument("clustering needs K >= 1");
  if (k > m) throw std::invalid_argument("clustering needs K <= m");

  const std::vector<Vector> sources(estimates.theta_tilde.begin() + 1, estimates.theta_tilde.end());
  std::vector<int> labels(m, 0);
  if (k > 1) {
    const std::size_t a = std::min(d, std::max<std::size_t>(k - 1, 1));
    std::vector<double> w(m);
    for (std::size_t j = 0; j < m; ++j) w[j] = static_cast<double>(sizes.at(j + 1));
    const MeanCov mc = weighted_mean_cov(sources, w);
    const EigenPairs top = top_eigenvectors(mc.cov, a);
    std::vector<Vector> proj(m, Vector(a));
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < a; ++c) proj[j][c] = dot(top.vectors[c], sources[j]);
    }
    labels = kmeans_lloyd(proj, k, seed).labels;
  }

  const Vector& target = estimates.theta_tilde[0];
  std::vector<double> n_cl(k, 0.0), dist2(k, 0.0);
  std::vector<Vector> mu(k, Vector(d, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    const auto c = static_cast<std::size_t>(labels[j]);
    const double w = static_cast<double>(sizes.at(j + 1));
    n_cl[c] += w;
    for (std::size_t i = 0; i < d; ++i) mu[c][i] += w * sources[j][i];
  }
  std::size_t j0 = k;
  for (std::size_t c = 0; c < k; ++c) {
    if (n_cl[c] == 0.0) continue;
    for (auto& v : mu[c]) v /= n_cl[c];
    dist2[c] = squared_distance(mu[c], target);
    if (j0 == k || dist2[c] < dist2[j0]) j0 = c;
  }

  const double n0 = static_cast<double>(sizes.n0());
  const double dd = static_cast<double>(d);
  std::vector<bool> include(k, false);
  for (std::size_t c = 0; c < k; ++c) {
    if (n_cl[c] == 0.0) continue;
    const double lambda = c_thresh * std::max(dd / std::min(n_cl[c], n_cl[j0]), 1.0 / n0);
    include[c] = dist2[c] - dist2[j0] <= lambda;
  }
  std::vector<std::size_t> members{0};
  for (std::size_t j = 0; j < m; ++j) {
    if (include[static_cast<std::size_t>(labels[j])]) members.push_back(j + 1);
  }
  EstimatorOutput out = pool(estimates, sizes, members);
  out.selected = SubsetMask(members);
  out.labels.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.labels[j] = labels[j] + 1;
  return out;
}

}  // namespace msa
