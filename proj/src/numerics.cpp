#include "msa/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "msa/rng.hpp"

namespace msa {

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double SymmetricMatrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = i + 1; j < d_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  }
  return m;
}

Vector SymmetricMatrix::multiply(const Vector& v) const {
  Vector out(d_, 0.0);
  for (std::size_t i = 0; i < d_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

MeanCov weighted_mean_cov(const std::vector<Vector>& vectors, const std::vector<double>& weights) {
  if (vectors.empty() || vectors.size() != weights.size()) {
    throw std::invalid_argument("weighted_mean_cov: vectors and weights must be nonempty and aligned");
  }
  const std::size_t d = vectors[0].size();
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weighted_mean_cov: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("weighted_mean_cov: zero total weight");

  MeanCov out{Vector(d, 0.0), SymmetricMatrix(d)};
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != d) throw std::invalid_argument("weighted_mean_cov: ragged input");
    for (std::size_t i = 0; i < d; ++i) out.mean[i] += weights[k] * vectors[k][i];
  }
  for (auto& v : out.mean) v /= total;

  Vector c(d);
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) c[i] = vectors[k][i] - out.mean[i];
    for (std::size_t i = 0; i < d; ++i) {
      const double wi = weights[k] * c[i];
      for (std::size_t j = i; j < d; ++j) out.cov(i, j) += wi * c[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      out.cov(i, j) /= total;
      out.cov(j, i) = out.cov(i, j);
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd to_eigen(const SymmetricMatrix& a) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = a(i, j);
  }
  return m;
}

void fix_sign(Vector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0.0) {
    for (auto& x : v) x = -x;
  }
}

}  // namespace

EigenPairs top_eigenvectors(const SymmetricMatrix& a_mat, std::size_t a) {
  const std::size_t d = a_mat.dim();
  if (a < 1 || a > d) throw std::invalid_argument("top_eigenvectors: need 1 <= a <= d");
  EigenPairs out;
  const double scale = a_mat.max_abs();
  if (scale == 0.0) {
    for (std::size_t c = 0; c < a; ++c) {
      Vector e(d, 0.0);
      e[c] = 1.0;
      out.values.push_back(0.0);
      out.vectors.push_back(std::move(e));
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(a_mat));
  if (solver.info() != Eigen::Success) throw std::runtime_error("top_eigenvectors: eigensolver failed");
  // Eigen returns ascending eigenvalues.
  for (std::size_t c = 0; c < a; ++c) {
    const auto col = static_cast<Eigen::Index>(d - 1 - c);
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), col);
    fix_sign(v);
    out.values.push_back(solver.eigenvalues()(col));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

KMeans1D kmeans_1d_two(const std::vector<double>& points) {
  const std::size_t m = points.size();
  if (m < 2) throw std::invalid_argument("kmeans_1d_two: need at least two points");
  std::vector<double> s = points;
  std::sort(s.begin(), s.end());
  // Prefix sums of values and squares give each split's objective in O(1).
  std::vector<double> p(m + 1, 0.0), q(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    p[i + 1] = p[i] + s[i];
    q[i + 1] = q[i] + s[i] * s[i];
  }
  auto sse = [&](std::size_t lo, std::size_t hi) {
    const double cnt = static_cast<double>(hi - lo);
    const double sum = p[hi] - p[lo];
    return std::max(0.0, (q[hi] - q[lo]) - sum * sum / cnt);
  };
  std::size_t best = 1;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t split = 1; split < m; ++split) {
    const double obj = sse(0, split) + sse(split, m);
    if (obj < best_obj) {
      best_obj = obj;
      best = split;
    }
  }
  KMeans1D out;
  out.c1 = (p[best] - p[0]) / static_cast<double>(best);
  out.c2 = (p[m] - p[best]) / static_cast<double>(m - best);
  out.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.labels[i] = std::abs(points[i] - out.c2) < std::abs(points[i] - out.c1) ? 2 : 1;
  }
  double obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double c = out.labels[i] == 1 ? out.c1 : out.c2;
    obj += (points[i] - c) * (points[i] - c);
  }
  out.objective = obj;
  return out;
}

namespace {

struct Assignment {
  std::vector<int> labels;
  double objective;
};

Assignment assign(const std::vector<Vector>& pts, const std::vector<Vector>& centers) {
  Assignment out{std::vector<int>(pts.size(), 0), 0.0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double dist = squared_distance(pts[i], centers[c]);
      if (dist < best) {
        best = dist;
        out.labels[i] = static_cast<int>(c);
      }
    }
    out.objective += best;
  }
  return out;
}

std::vector<Vector> seed_plus_plus(const std::vector<Vector>& pts, std::size_t k, Stream& stream) {
  std::vector<Vector> centers;
  centers.push_back(pts[stream.below(pts.size())]);
  std::vector<double> dist(pts.size());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, squared_distance(pts[i], c));
      dist[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = stream.uniform() * total;
      pick = pts.size() - 1;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        target -= dist[i];
        if (target < 0.0 && dist[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = stream.below(pts.size());
    }
    centers.push_back(pts[pick]);
  }
  return centers;
}

KMeansResult lloyd_sorted(const std::vector<Vector>& pts, std::size_t k, std::uint64_t seed,
                          std::uint64_t restart) {
  Stream stream(seed, StreamTag::KMeans, restart);
  const std::size_t dim = pts[0].size();
  KMeansResult res;
  res.centers = seed_plus_plus(pts, k, stream);
  Assignment cur = assign(pts, res.centers);
  res.trace.push_back(cur.objective);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Vector> sums(k, Vector(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto c = static_cast<std::size_t>(cur.labels[i]);
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] += pts[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) res.centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
    }
    // Empty clusters take the point farthest from its current center.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto own = static_cast<std::size_t>(cur.labels[i]);
        if (counts[own] <= 1) continue;
        const double dist = squared_distance(pts[i], res.centers[own]);
        if (dist > far_d) {
          far_d = dist;
          far = i;
        }
      }
      if (far_d < 0.0) continue;
      --counts[static_cast<std::size_t>(cur.labels[far])];
      cur.labels[far] = static_cast<int>(c);
      counts[c] = 1;
      res.centers[c] = pts[far];
    }
    Assignment next = assign(pts, res.centers);
    res.trace.push_back(next.objective);
    const bool same = next.labels == cur.labels;
    cur = std::move(next);
    if (same) break;
  }
  res.labels = std::move(cur.labels);
  res.objective = cur.objective;
  return res;
}

// Runs on a lexicographically sorted copy so the result does not depend on input order.
template <typename Fn>
KMeansResult on_canonical_order(const std::vector<Vector>& points, std::size_t k, Fn&& fn) {
  if (points.empty()) throw std::invalid_argument("kmeans: no points");
  if (k < 1 || k > points.size()) throw std::invalid_argument("kmeans: need 1 <= K <= m");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<Vector> sorted;
  sorted.reserve(points.size());
  for (auto i : order) sorted.push_back(points[i]);
  KMeansResult res = fn(sorted);
  std::vector<int> labels(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) labels[order[i]] = res.labels[i];
  res.labels = std::move(labels);
  return res;
}

}  // namespace

KMeansResult kmeans_lloyd_single(const std::vector<Vector>& points, std::size_t k,
                                 std::uint64_t seed, std::uint64_t restart) {
  return on_canonical_order(points, k, [&](const std::vector<Vector>& pts) {
    return lloyd_sorted(pts, k, seed, restart);
  });
}

KMeansResult kmeans_lloyd(const std::vector<Vector>& points, std::size_t k, std::uint64_t seed,
                          int restarts) {
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
  return on_canonical_order(points, k, [&](const std::vector<Vector>& pts) {
    KMeansResult best;
    for (int r = 0; r < restarts; ++r) {
      KMeansResult cur = lloyd_sorted(pts, k, seed, static_cast<std::uint64_t>(r));
      if (r == 0 || cur.objective < best.objective) best = std::move(cur);
    }
    return best;
  });
}

double tau_proxy_normal_mean(const std::vector<std::vector<Vector>>& samples) {
  if (samples.empty()) throw std::invalid_argument("tau proxy: no domains");
  double best = 0.0;
  for (const auto& domain : samples) {
    if (domain.size() < 2) throw std::invalid_argument("tau proxy: each domain needs >= 2 samples");
    // Plain 1/n_k normalisation, matching the proxy's definition.
    MeanCov mc = weighted_mean_cov(domain, std::vector<double>(domain.size(), 1.0));
    best = std::max(best, top_eigenvectors(mc.cov, 1).values[0]);
  }
  return std::sqrt(std::max(0.0, best));
}

double tau_proxy_linear_regression(const std::vector<RegressionDomain>& domains) {
  if (domains.empty()) throw std::invalid_argument("tau proxy: no domains");
  double best = 0.0;
  for (const auto& dom : domains) {
    const auto n = static_cast<Eigen::Index>(dom.x.size());
    if (n == 0 || dom.y.size() != dom.x.size()) throw std::invalid_argument("tau proxy: x/y size mismatch");
    const auto d = static_cast<Eigen::Index>(dom.x[0].size());
    if (n <= d) throw std::invalid_argument("tau proxy: need n_k > d");
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(dom.x[i].size()) != d) throw std::invalid_argument("tau proxy: ragged design");
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = dom.x[i][j];
      y(i) = dom.y[i];
    }
    const Eigen::MatrixXd gram = x.transpose() * x / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues()(0);
    const double lmax = eig.eigenvalues()(d - 1);
    if (!(lmin > 0.0) || lmax / lmin > 1e12) throw std::runtime_error("tau proxy: singular Gram matrix");
    const Eigen::VectorXd beta = gram.ldlt().solve(x.transpose() * y / static_cast<double>(n));
    const double rss = (y - x * beta).squaredNorm();
    const double sigma2 = rss / static_cast<double>(n - d);
    best = std::max(best, sigma2 / lmin);
  }
  return std::sqrt(best);
}

}  // namespace msa
