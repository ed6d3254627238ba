#include "msa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace msa {

SubsetMask::SubsetMask(std::vector<std::size_t> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty() || members_[0] != 0) throw std::invalid_argument("subset must contain the target index 0");
}

SubsetMask SubsetMask::from_sources(const std::vector<std::size_t>& sources) {
  std::vector<std::size_t> members{0};
  for (auto k : sources) {
    if (k == 0) throw std::invalid_argument("source indices start at 1");
    members.push_back(k);
  }
  return SubsetMask(std::move(members));
}

bool SubsetMask::contains(std::size_t k) const {
  return std::binary_search(members_.begin(), members_.end(), k);
}

std::string SubsetMask::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) out << (i ? "," : "") << members_[i];
  out << '}';
  return out.str();
}

bool operator<(const SubsetMask& a, const SubsetMask& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.members_ < b.members_;
}

double subset_bias(const SubsetMask& s, const BiasConfiguration& h) {
  double out = 0.0;
  for (auto k : s.members()) {
    if (k == 0) continue;
    if (k > h.m()) throw std::invalid_argument("subset index exceeds m");
    out = std::max(out, h[k - 1]);
  }
  return out;
}

double subset_size(const SubsetMask& s, const SampleSizes& sizes) {
  std::int64_t total = 0;
  for (auto k : s.members()) {
    if (k > sizes.m()) throw std::invalid_argument("subset index exceeds m");
    total += sizes.at(k);
  }
  return static_cast<double>(total);
}

OracleRateResult oracle_rate(const BiasConfiguration& h, const SampleSizes& sizes, std::size_t d,
                             double tau) {
  if (h.m() != sizes.m()) throw std::invalid_argument("oracle_rate: h and sizes lengths differ");
  if (d == 0) throw std::invalid_argument("oracle_rate: d must be positive");
  const double dt2 = static_cast<double>(d) * tau * tau;
  const std::size_t m = h.m();

  OracleRateResult out;
  if (dt2 == 0.0) {
    out.rate = 0.0;
    out.breakdown.push_back({SubsetMask(), 0.0, 0.0});
    return out;
  }

  // Only level sets {k : h_k <= t} can be optimal when d tau^2 > 0: adding a
  // source no more biased than the current max strictly lowers the variance.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a - 1] < h[b - 1]; });

  std::int64_t n_total = sizes.n0();
  std::vector<std::size_t> members{0};
  auto consider = [&](double hs) {
    const double var = dt2 / static_cast<double>(n_total);
    const double b2 = hs * hs;
    const double rate = var + b2;
    SubsetMask s(members);
    out.breakdown.push_back({s, var, b2});
    if (out.breakdown.size() == 1 || rate < out.rate) {
      out.rate = rate;
      out.argmin_set = s;
    }
  };
  consider(0.0);
  std::size_t i = 0;
  while (i < m) {
    const double level = h[order[i] - 1];
    while (i < m && h[order[i] - 1] == level) {
      members.push_back(order[i]);
      n_total += sizes.at(order[i]);
      ++i;
    }
    consider(level);
  }
  return out;
}

Vector oracle_estimate(const LocalEstimates& estimates, const SubsetMask& s, const SampleSizes& sizes) {
  const std::size_t d = estimates.d();
  Vector out(d, 0.0);
  double total = 0.0;
  for (auto k : s.members()) {
    if (k > estimates.m()) throw std::invalid_argument("oracle_estimate: subset index exceeds m");
    const double w = static_cast<double>(sizes.at(k));
    total += w;
    for (std::size_t i = 0; i < d; ++i) out[i] += w * estimates.theta_tilde[k][i];
  }
  for (auto& v : out) v /= total;
  return out;
}

SubsetCheck check_optimal_subset(const SubsetMask& candidate, const BiasConfiguration& h,
                                 const SampleSizes& sizes, std::size_t d, double tau) {
  if (h.m() != sizes.m()) throw std::invalid_argument("check_optimal_subset: h and sizes lengths differ");
  const double dt2 = static_cast<double>(d) * tau * tau;
  const double hstar = subset_bias(candidate, h);
  SubsetCheck out;

  for (std::size_t k = 1; k <= h.m(); ++k) {
    if ((h[k - 1] <= hstar) != candidate.contains(k)) {
      std::ostringstream msg;
      msg << "source " << k << " with h=" << h[k - 1] << (candidate.contains(k) ? " is in" : " is missing from")
          << " the level set at h*=" << hstar;
      out.clause = 'a';
      out.detail = msg.str();
      return out;
    }
  }

  double below = 0.0;
  for (std::size_t k = 0; k <= h.m(); ++k) {
    const double hk = k == 0 ? 0.0 : h[k - 1];
    if (hk < hstar) below += static_cast<double>(sizes.at(k));
  }
  if (hstar * hstar * below > dt2) {
    std::ostringstream msg;
    msg << "(h*)^2 = " << hstar * hstar << " exceeds d tau^2 / " << below;
    out.clause = 'b';
    out.detail = msg.str();
    return out;
  }

  const double n_cand = subset_size(candidate, sizes);
  for (std::size_t k = 1; k <= h.m(); ++k) {
    if (candidate.contains(k)) continue;
    const double hk = h[k - 1];
    if (!(hk > hstar && hk * hk * n_cand > dt2)) {
      std::ostringstream msg;
      msg << "excluded source " << k << " has h=" << hk << " not above max(h*, tau sqrt(d/N))";
      out.clause = 'c';
      out.detail = msg.str();
      return out;
    }
  }
  out.ok = true;
  return out;
}

namespace {

Vector pooled_average(const LocalEstimates& est, const SampleSizes& sizes,
                      const std::vector<std::size_t>& members) {
  return oracle_estimate(est, SubsetMask(members), sizes);
}

}  // namespace

bool cluster_oracle_prefers_all(std::size_t d, std::size_t m, std::int64_t n, double delta) {
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double half = static_cast<double>(m / 2);
  const double mm = static_cast<double>(m);
  const double frac = (mm - half) / (mm + 1.0);
  const double all_pool = dd * delta * delta / nn * frac * frac + dd / (nn * (mm + 1.0));
  const double half_pool = dd / (nn * (half + 1.0));
  return all_pool <= half_pool;
}

Vector figure_oracle_cluster(const LocalEstimates& estimates, const ProblemInstance& instance,
                             double delta) {
  if (instance.kind() != ConfigKind::Cluster) throw std::invalid_argument("cluster oracle needs a cluster instance");
  const std::size_t m = instance.m();
  const bool all = cluster_oracle_prefers_all(instance.d(), m, instance.sizes().n0(), delta);
  std::vector<std::size_t> members;
  const std::size_t last = all ? m : m / 2;
  for (std::size_t k = 0; k <= last; ++k) members.push_back(k);
  return pooled_average(estimates, instance.sizes(), members);
}

std::size_t separation1_oracle_length(const Vector& h_values, std::size_t d, std::int64_t n) {
  const std::size_t m = h_values.size();
  Vector sorted = h_values;
  std::sort(sorted.begin(), sorted.end());
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  std::size_t best_k = m / 2;
  double best = std::numeric_limits<double>::infinity();
  double bias_sum = 0.0;
  for (std::size_t k = m / 2; k <= m; ++k) {
    if (k > m / 2) bias_sum += sorted[k - 1];
    const double kk = static_cast<double>(k) + 1.0;
    const double b = bias_sum / kk;
    const double obj = b * b + dd / (kk * nn);
    if (obj < best) {
      best = obj;
      best_k = k;
    }
  }
  return best_k;
}

Vector figure_oracle_separation1(const LocalEstimates& estimates, const ProblemInstance& instance,
                                 const Vector& h_values) {
  if (instance.kind() != ConfigKind::Separation1) {
    throw std::invalid_argument("separation oracle needs a separation-I instance");
  }
  const std::size_t m = instance.m();
  if (h_values.size() != m) throw std::invalid_argument("separation oracle: h length differs from m");
  const std::size_t k0 = separation1_oracle_length(h_values, instance.d(), instance.sizes().n0());
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return h_values[a - 1] < h_values[b - 1]; });
  std::vector<std::size_t> members{0};
  members.insert(members.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k0));
  return pooled_average(estimates, instance.sizes(), members);
}

}  // namespace msa
