#include "msa/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "msa/rng.hpp"

namespace msa {

double squared_distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

double norm(const Vector& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

BiasConfiguration::BiasConfiguration(Vector h, double upper) : h_(std::move(h)), upper_(upper) {
  if (!(upper_ > 0.0) || !std::isfinite(upper_)) {
    throw std::invalid_argument("bias upper bound must be positive and finite");
  }
  for (std::size_t k = 0; k < h_.size(); ++k) {
    if (!(h_[k] >= 0.0 && h_[k] <= upper_)) {
      std::ostringstream msg;
      msg << "bias h_" << (k + 1) << " = " << h_[k] << " outside [0, " << upper_ << "]";
      throw std::invalid_argument(msg.str());
    }
  }
}

SampleSizes::SampleSizes(std::int64_t n0, std::vector<std::int64_t> n) : n0_(n0), n_(std::move(n)) {
  if (n0_ < 1) throw std::invalid_argument("target sample size must be >= 1");
  for (auto v : n_) {
    if (v < 1) throw std::invalid_argument("source sample sizes must be >= 1");
  }
}

SampleSizes SampleSizes::uniform(std::int64_t n0, std::int64_t n, std::size_t m) {
  return SampleSizes(n0, std::vector<std::int64_t>(m, n));
}

std::int64_t SampleSizes::total() const {
  std::int64_t s = n0_;
  for (auto v : n_) s += v;
  return s;
}

bool SampleSizes::equal() const {
  return std::adjacent_find(n_.begin(), n_.end(), std::not_equal_to<>()) == n_.end();
}

std::string to_string(ConfigKind kind) {
  switch (kind) {
    case ConfigKind::Cluster: return "cluster";
    case ConfigKind::Separation1: return "separation1";
    case ConfigKind::Separation2: return "separation2";
    case ConfigKind::Hard: return "hard";
    case ConfigKind::Custom: return "custom";
  }
  return "custom";
}

ConfigKind config_kind_from_string(const std::string& name) {
  if (name == "cluster") return ConfigKind::Cluster;
  if (name == "separation1" || name == "sep1") return ConfigKind::Separation1;
  if (name == "separation2" || name == "sep2") return ConfigKind::Separation2;
  if (name == "hard") return ConfigKind::Hard;
  if (name == "custom") return ConfigKind::Custom;
  throw std::invalid_argument("unknown config kind '" + name + "'");
}

ProblemInstance::ProblemInstance(std::size_t d, double tau, std::vector<Vector> theta,
                                 SampleSizes sizes, ConfigKind kind, Vector nominal_h)
    : d_(d), tau_(tau), theta_(std::move(theta)), sizes_(std::move(sizes)), kind_(kind),
      nominal_h_(std::move(nominal_h)) {
  if (d_ == 0) throw std::invalid_argument("dimension must be positive");
  if (!(tau_ >= 0.0) || !std::isfinite(tau_)) {
    throw std::invalid_argument("tau must be finite and non-negative");
  }
  if (theta_.empty()) throw std::invalid_argument("instance needs a target parameter");
  if (sizes_.m() != theta_.size() - 1) {
    throw std::invalid_argument("sample sizes do not match the number of sources");
  }
  for (const auto& t : theta_) {
    if (t.size() != d_) throw std::invalid_argument("parameter vector length differs from d");
    for (double v : t) {
      if (!std::isfinite(v)) throw std::invalid_argument("parameter entries must be finite");
    }
  }
  if (!nominal_h_.empty() && nominal_h_.size() != m()) {
    throw std::invalid_argument("nominal bias length differs from m");
  }
}

Vector ProblemInstance::induced_bias() const {
  Vector h(m());
  for (std::size_t k = 1; k <= m(); ++k) h[k - 1] = std::sqrt(squared_distance(theta_[k], theta_[0]));
  return h;
}

BiasConfiguration ProblemInstance::bias_configuration(std::vector<std::string>* warnings) const {
  Vector h = induced_bias();
  std::size_t clamped = 0;
  for (double& v : h) {
    if (v > 1.0) {
      v = 1.0;
      ++clamped;
    }
  }
  if (clamped > 0 && warnings != nullptr) {
    warnings->push_back(std::to_string(clamped) + " induced bias value(s) exceed 1 and were clamped");
  }
  return BiasConfiguration(std::move(h));
}

std::vector<std::string> ProblemInstance::warnings() const {
  std::vector<std::string> out;
  const double quality = static_cast<double>(d_) * tau_ * tau_ / static_cast<double>(sizes_.n0());
  if (quality > 1.0) {
    std::ostringstream msg;
    msg << "d*tau^2/n0 = " << quality << " exceeds 1; the target estimate is very noisy";
    out.push_back(msg.str());
  }
  bias_configuration(&out);
  return out;
}

LocalEstimates SplitEstimates::combined() const {
  LocalEstimates out;
  out.seed = seed;
  out.replicate = replicate;
  const std::size_t d = target_halves[0].size();
  out.theta_tilde.assign(m() + 1, Vector(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    out.theta_tilde[0][i] = 0.5 * (target_halves[0][i] + target_halves[1][i]);
  }
  for (std::size_t k = 0; k < m(); ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      out.theta_tilde[k + 1][i] =
          (source_parts[0][k][i] + source_parts[1][k][i] + source_parts[2][k][i]) / 3.0;
    }
  }
  return out;
}

SplitEstimates SplitEstimates::reuse(const LocalEstimates& estimates, double n0) {
  SplitEstimates out;
  out.seed = estimates.seed;
  out.replicate = estimates.replicate;
  out.target_half_size = n0 / 2.0;
  out.target_halves = {estimates.theta_tilde[0], estimates.theta_tilde[0]};
  std::vector<Vector> sources(estimates.theta_tilde.begin() + 1, estimates.theta_tilde.end());
  out.source_parts = {sources, sources, sources};
  return out;
}

namespace {

Vector draw_gaussian(const Vector& mean, double scale, Stream& stream) {
  Vector out(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) out[i] = mean[i] + scale * stream.normal();
  return out;
}

Vector basis_vector(std::size_t d, double value) {
  Vector e(d, 0.0);
  e[0] = value;
  return e;
}

Vector uniform_direction(std::size_t d, Stream& stream) {
  Vector u(d);
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& v : u) {
      v = stream.normal();
      s += v * v;
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (auto& v : u) v *= inv;
  return u;
}

void require_two_sources(std::size_t m) {
  if (m < 2) throw std::invalid_argument("configuration needs m >= 2");
}

}  // namespace

LocalEstimates sample_estimates(const ProblemInstance& instance, std::uint64_t seed,
                                std::uint64_t replicate) {
  LocalEstimates out;
  out.seed = seed;
  out.replicate = replicate;
  out.theta_tilde.reserve(instance.m() + 1);
  for (std::size_t k = 0; k <= instance.m(); ++k) {
    Stream stream(seed, StreamTag::Sample, replicate, k);
    const double scale = instance.tau() / std::sqrt(static_cast<double>(instance.sizes().at(k)));
    out.theta_tilde.push_back(draw_gaussian(instance.theta()[k], scale, stream));
  }
  return out;
}

SplitEstimates sample_split_estimates(const ProblemInstance& instance, std::uint64_t seed,
                                      std::uint64_t replicate) {
  SplitEstimates out;
  out.seed = seed;
  out.replicate = replicate;
  const double tau = instance.tau();
  const double half = static_cast<double>(instance.sizes().n0()) / 2.0;
  out.target_half_size = half;
  for (std::size_t part = 0; part < 2; ++part) {
    Stream stream(seed, StreamTag::SplitSample, replicate, part);
    out.target_halves[part] = draw_gaussian(instance.target(), tau / std::sqrt(half), stream);
  }
  for (std::size_t part = 0; part < 3; ++part) {
    auto& dest = out.source_parts[part];
    dest.reserve(instance.m());
    for (std::size_t k = 1; k <= instance.m(); ++k) {
      Stream stream(seed, StreamTag::SplitSample, replicate, 4 * k + part);
      const double third = static_cast<double>(instance.sizes().at(k)) / 3.0;
      dest.push_back(draw_gaussian(instance.theta()[k], tau / std::sqrt(third), stream));
    }
  }
  return out;
}

ProblemInstance make_cluster_config(std::size_t d, std::size_t m, std::int64_t n, double delta) {
  require_two_sources(m);
  const std::size_t half = m / 2;
  const double shift = delta * std::sqrt(static_cast<double>(d) / static_cast<double>(n));
  std::vector<Vector> theta(m + 1, Vector(d, 0.0));
  Vector nominal(m, 0.0);
  for (std::size_t k = half + 1; k <= m; ++k) {
    theta[k] = basis_vector(d, shift);
    nominal[k - 1] = std::abs(shift);
  }
  return ProblemInstance(d, 1.0, std::move(theta), SampleSizes::uniform(n, n, m),
                         ConfigKind::Cluster, std::move(nominal));
}

ProblemInstance make_separation1_config(std::size_t d, std::size_t m, std::int64_t n, double delta,
                                        std::uint64_t seed) {
  require_two_sources(m);
  const std::size_t half = m / 2;
  const double unit = delta * std::sqrt(static_cast<double>(d) / static_cast<double>(n));
  std::vector<Vector> theta(m + 1, Vector(d, 0.0));
  Vector nominal(m, 0.0);
  for (std::size_t k = half + 1; k <= m; ++k) {
    Stream stream(seed, StreamTag::Instance, 1, k);
    const double h = stream.uniform(unit, 20.0 * unit);
    theta[k] = basis_vector(d, h);
    nominal[k - 1] = std::abs(h);
  }
  return ProblemInstance(d, 1.0, std::move(theta), SampleSizes::uniform(n, n, m),
                         ConfigKind::Separation1, std::move(nominal));
}

ProblemInstance make_separation2_config(std::size_t d, std::size_t m, std::int64_t n, double delta,
                                        std::uint64_t seed) {
  require_two_sources(m);
  const std::size_t half = m / 2;
  const double radius = delta * std::sqrt(static_cast<double>(d) / static_cast<double>(n));
  std::vector<Vector> theta(m + 1, Vector(d, 0.0));
  Vector nominal(m, 0.0);
  for (std::size_t k = half + 1; k <= m; ++k) {
    Stream stream(seed, StreamTag::Instance, 2, k);
    Vector u = uniform_direction(d, stream);
    for (auto& v : u) v *= radius;
    theta[k] = std::move(u);
    nominal[k - 1] = std::abs(radius);
  }
  return ProblemInstance(d, 1.0, std::move(theta), SampleSizes::uniform(n, n, m),
                         ConfigKind::Separation2, std::move(nominal));
}

HardInstance make_hard_instance(const HardInstanceSpec& spec, const HardBase& base,
                                std::uint64_t seed) {
  if (base.d == 0 || base.n0 < 1 || base.n < 1) throw std::invalid_argument("invalid hard-instance base");
  if (spec.hypothesis != 0 && spec.hypothesis != 1) {
    throw std::invalid_argument("hypothesis bit must be 0 or 1");
  }
  const std::size_t d = base.d;
  const std::size_t m = base.m;
  HardInstance out;
  std::vector<Vector> theta(m + 1, Vector(d, 0.0));
  Vector nominal(m, 0.0);

  switch (spec.kind) {
    case HardKind::TwoPoint: {
      if (m != 2) throw std::invalid_argument("two-point construction requires m = 2");
      const double cap = base.tau / (2.0 * std::sqrt(static_cast<double>(base.n0)));
      if (!(spec.g1 >= 0.0 && spec.g1 <= spec.g2 && spec.g2 <= cap)) {
        throw std::invalid_argument("two-point construction needs 0 <= g1 <= g2 <= tau/(2 sqrt(n0))");
      }
      theta[1] = basis_vector(d, spec.g1);
      theta[2] = basis_vector(d, spec.g2);
      if (spec.hypothesis == 1) theta[0] = basis_vector(d, spec.g1 + spec.g2);
      nominal = spec.hypothesis == 0 ? Vector{spec.g1, spec.g2} : Vector{spec.g2, spec.g1};
      out.direction = basis_vector(d, 1.0);
      break;
    }
    case HardKind::RandomSignTwoCluster: {
      if (!(spec.alpha >= 0.0)) throw std::invalid_argument("random-sign scale must be >= 0");
      if (m < 1) throw std::invalid_argument("random-sign construction needs m >= 1");
      Stream stream(seed, StreamTag::Instance, 3, 0);
      out.direction = uniform_direction(d, stream);
      if (!spec.signs.empty()) {
        if (spec.signs.size() != m) throw std::invalid_argument("sign vector length differs from m");
        for (int s : spec.signs) {
          if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
        }
        out.signs = spec.signs;
      } else {
        out.signs.resize(m);
        for (auto& s : out.signs) s = (stream.next_u64() >> 63) ? 1 : -1;
      }
      for (std::size_t i = 0; i < d; ++i) theta[0][i] = spec.alpha * out.direction[i];
      for (std::size_t k = 1; k <= m; ++k) {
        for (std::size_t i = 0; i < d; ++i) theta[k][i] = out.signs[k - 1] * spec.alpha * out.direction[i];
        nominal[k - 1] = out.signs[k - 1] == 1 ? 0.0 : 2.0 * spec.alpha;
      }
      break;
    }
    case HardKind::BalancedTwoCluster: {
      if (!(spec.delta_sep >= 0.0)) throw std::invalid_argument("cluster separation must be >= 0");
      if (m < 2) throw std::invalid_argument("balanced construction needs m >= 2");
      const Vector mu2 = basis_vector(d, std::sqrt(spec.delta_sep));
      for (std::size_t k = m / 2 + 1; k <= m; ++k) theta[k] = mu2;
      if (spec.hypothesis == 1) theta[0] = mu2;
      const double gap = std::sqrt(spec.delta_sep);
      for (std::size_t k = 1; k <= m; ++k) {
        const bool same = (k <= m / 2) == (spec.hypothesis == 0);
        nominal[k - 1] = same ? 0.0 : gap;
      }
      out.direction = basis_vector(d, 1.0);
      break;
    }
  }
  out.instance = ProblemInstance(d, base.tau, std::move(theta),
                                 SampleSizes::uniform(base.n0, base.n, m), ConfigKind::Hard,
                                 std::move(nominal));
  return out;
}

}  // namespace msa
