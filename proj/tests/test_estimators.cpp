#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "msa/estimators.hpp"
#include "reference.hpp"

using namespace msa;

namespace {

LocalEstimates make_est(std::vector<Vector> theta) {
  LocalEstimates e;
  e.theta_tilde = std::move(theta);
  return e;
}

// Output equals sum_k w_k theta_k with w >= 0 summing to one.
void check_convex(const EstimatorOutput& out, const LocalEstimates& est) {
  REQUIRE(out.weights.size() == est.m() + 1);
  double total = 0.0;
  for (double w : out.weights) {
    CHECK(w >= 0.0);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < est.d(); ++i) {
    double v = 0.0, scale = 1.0;
    for (std::size_t k = 0; k <= est.m(); ++k) {
      v += out.weights[k] * est.theta_tilde[k][i];
      scale = std::max(scale, std::abs(est.theta_tilde[k][i]));
    }
    CHECK(std::abs(out.value[i] - v) <= 1e-12 * scale);
  }
}

LocalEstimates random_estimates(std::size_t m, std::size_t d, Stream& s, double spread = 1.0) {
  LocalEstimates e;
  for (std::size_t k = 0; k <= m; ++k) {
    Vector v(d);
    for (auto& x : v) x = spread * s.normal();
    e.theta_tilde.push_back(v);
  }
  return e;
}

SampleSizes random_sizes(std::size_t m, Stream& s) {
  std::vector<std::int64_t> n(m);
  for (auto& x : n) x = 10 + static_cast<std::int64_t>(s.below(200));
  return SampleSizes(10 + static_cast<std::int64_t>(s.below(200)), n);
}

// Applies a source permutation: new source i+1 is old source perm[i]+1.
LocalEstimates permute(const LocalEstimates& e, const std::vector<std::size_t>& perm) {
  LocalEstimates out;
  out.theta_tilde.push_back(e.theta_tilde[0]);
  for (auto p : perm) out.theta_tilde.push_back(e.theta_tilde[p + 1]);
  return out;
}

SampleSizes permute(const SampleSizes& s, const std::vector<std::size_t>& perm) {
  std::vector<std::int64_t> n;
  for (auto p : perm) n.push_back(s.sources()[p]);
  return SampleSizes(s.n0(), n);
}

std::vector<std::size_t> random_perm(std::size_t m, Stream& s) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = m; i > 1; --i) std::swap(p[i - 1], p[s.below(i)]);
  return p;
}

std::vector<std::size_t> source_members(const SubsetMask& s) {
  return std::vector<std::size_t>(s.members().begin() + 1, s.members().end());
}

// Selected sources after mapping permuted indices back to the original ones.
std::vector<std::size_t> unpermute(const SubsetMask& s, const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> out;
  for (auto k : source_members(s)) out.push_back(perm[k - 1] + 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("candidate families") {
  const CandidateFamily full = full_subset_family(2);
  CHECK(full == CandidateFamily{{}, {1}, {2}, {1, 2}});
  CHECK(prefix_family(3) == CandidateFamily{{}, {1}, {1, 2}, {1, 2, 3}});
  for (std::size_t m = 0; m <= 12; ++m) CHECK(full_subset_family(m).size() == (std::size_t{1} << m));
  CHECK_THROWS_AS(full_subset_family(21), std::invalid_argument);
}

TEST_CASE("naive ignores sources") {
  Stream s(21, StreamTag::Test, 21);
  LocalEstimates e = random_estimates(4, 3, s);
  const EstimatorOutput a = naive(e);
  CHECK(a.value == e.theta_tilde[0]);
  check_convex(a, e);
  e.theta_tilde[2][1] += 100.0;
  CHECK(naive(e).value == a.value);
}

TEST_CASE("two-source structured estimator") {
  const SampleSizes sizes(100, {100, 100});
  SUBCASE("tie goes to the first source") {
    const auto e = make_est({{0.0, 0.0}, {0.05, 0.0}, {0.05, 0.0}});
    const auto out = two_source_structured(e, sizes, 1.0, default_delta_two_source(sizes));
    CHECK(*out.choice == 1);
    CHECK(out.value[0] == doctest::Approx(0.025));
    check_convex(out, e);
  }
  SUBCASE("far first source switches to the second") {
    const auto e = make_est({{0.0, 0.0}, {50.0, 0.0}, {0.0, 0.0}});
    const auto out = two_source_structured(e, sizes, 1.0, 0.01);
    CHECK(*out.choice == 2);
    CHECK(out.selected->members() == std::vector<std::size_t>{0, 2});
  }
  SUBCASE("chosen source too far to pool returns the target") {
    const auto e = make_est({{0.0, 0.0}, {50.0, 0.0}, {60.0, 0.0}});
    const auto out = two_source_structured(e, sizes, 1.0, 0.01);
    CHECK(*out.choice == 1);
    CHECK(out.value == e.theta_tilde[0]);
  }
  SUBCASE("ball test boundary") {
    // r0 + r1 = (1/10 + 1/sqrt(200)) (1 + sqrt(log 100)) at d = 1; the pooled point sits at
    // half the source offset.
    const double level = 1.0 + std::sqrt(std::log(100.0));
    const double reach = (0.1 + 1.0 / std::sqrt(200.0)) * level;
    auto inside = two_source_structured(make_est({{0.0}, {2 * reach * 0.999}, {9.0}}), sizes, 1.0, 0.01);
    CHECK(inside.selected->size() == 2);
    auto outside = two_source_structured(make_est({{0.0}, {2 * reach * 1.001}, {9.0}}), sizes, 1.0, 0.01);
    CHECK(outside.selected->size() == 1);
  }
  CHECK(default_delta_two_source(sizes) == doctest::Approx(1e-4));
  CHECK_THROWS_AS(two_source_structured(make_est({{0.0}, {1.0}}), SampleSizes(10, {10}), 1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("model selection") {
  SUBCASE("single candidate") {
    const auto e = make_est({{0.0}, {1.0}, {2.0}});
    const TargetSplit split{{5.0}, {0.0}, 50.0, 50.0};
    const auto out = model_selection(e, SampleSizes(100, {100, 100}), {{1, 2}}, split);
    CHECK(out.value[0] == doctest::Approx(300.0 / 250.0));
    CHECK(*out.choice == 0);
  }
  SUBCASE("zero validation error wins") {
    const auto e = make_est({{0.0}, {2.0}, {4.0}});
    const TargetSplit split{{1.0}, {0.0}, 50.0, 50.0};
    // Candidate {1}: (50*0 + 50*2)/100 = 1 matches the first half exactly.
    const auto out = model_selection(e, SampleSizes(100, {50, 50}), {{2}, {1}}, split);
    CHECK(*out.choice == 1);
    CHECK(out.value[0] == doctest::Approx(1.0));
  }
  SUBCASE("hand-evaluated three-source instance") {
    const auto e = make_est({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {3.0, 3.0}});
    const TargetSplit split{{0.4, 0.1}, {0.2, 0.0}, 10.0, 10.0};
    const SampleSizes sizes(20, {10, 10, 10});
    // {1}: (2 + 10, 0) / 20 = (0.6, 0) -> err 0.04 + 0.01 = 0.05
    // {1,2}: (12, 10) / 30 = (0.4, 0.333..) -> err 0 + 0.0544.. = 0.0544..
    // {3}: (32, 30) / 20 -> far
    const auto out = model_selection(e, sizes, {{3}, {1, 2}, {1}}, split);
    CHECK(*out.choice == 2);
    CHECK(out.value[0] == doctest::Approx(0.6));
    CHECK(out.weights[0] == doctest::Approx(0.5));
  }
  SUBCASE("ties go to the first candidate") {
    const auto e = make_est({{0.0}, {1.0}, {1.0}});
    const TargetSplit split{{0.0}, {0.0}, 10.0, 10.0};
    const auto out = model_selection(e, SampleSizes(20, {10, 10}), {{2}, {1}}, split);
    CHECK(*out.choice == 0);
  }
  CHECK_THROWS_AS(model_selection(make_est({{0.0}}), SampleSizes(10, {}), {}, TargetSplit{{0.0}, {0.0}, 5, 5}),
                  std::invalid_argument);
}

TEST_CASE("intersection estimator") {
  SUBCASE("no sources") {
    const auto e = make_est({{0.3, 0.4}});
    const auto out = intersection_estimator(e, SampleSizes(10, {}), 1.0, 0.1);
    CHECK(*out.t_hat == 0);
    CHECK(out.value == e.theta_tilde[0]);
  }
  SUBCASE("all equal") {
    const auto e = make_est({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}});
    const auto out = intersection_estimator(e, SampleSizes(10, {20, 30, 40}), 1.0, 0.1);
    CHECK(*out.t_hat == 3);
    CHECK(out.value[0] == doctest::Approx(1.0));
    CHECK(out.value[1] == doctest::Approx(2.0));
    check_convex(out, e);
  }
  SUBCASE("displaced third source") {
    // d = 1, sizes 100: radii 2/sqrt(N_r) (1 + sqrt(log(4/0.1))).
    const double level = 1.0 + std::sqrt(std::log(40.0));
    const auto e = make_est({{0.0}, {0.0}, {50.0}});
    const SampleSizes sizes(100, {100, 100});
    const auto out = intersection_estimator(e, sizes, 1.0, 0.1);
    CHECK(*out.t_hat == 1);
    std::vector<Vector> centres{{0.0, 0.0}, {0.0, 0.0}, {50.0 / 3.0, 0.0}};
    Vector radii;
    for (int r = 1; r <= 3; ++r) radii.push_back(2.0 / std::sqrt(100.0 * r) * level);
    CHECK(ref::planar_feasibility_gap({centres[0], centres[1]}, {radii[0], radii[1]}) <= 0.0);
    CHECK(ref::planar_feasibility_gap(centres, radii) > 0.0);
    CHECK(*intersection_estimator(e, sizes, 1.0, 0.1, FeasibilityMode::Exact).t_hat == 1);
  }
  SUBCASE("default delta") {
    CHECK(default_delta_intersection(SampleSizes(500, {500}), 10, 1.0) == doctest::Approx(0.01));
    CHECK(default_delta_intersection(SampleSizes(5, {5}), 10, 1.0) == 0.5);
    CHECK(default_delta_intersection(SampleSizes(std::int64_t{1} << 50, {std::int64_t{1} << 50}), 1, 1.0) == 1e-12);
  }
}

TEST_CASE("pairwise and exact feasibility differ on a triangle") {
  // Three radius-1.05 discs on an equilateral triangle of side 2: each pair meets, the
  // circumradius 2/sqrt(3) exceeds 1.05 so the three share no point.
  const double h = std::sqrt(3.0);
  const std::vector<Vector> centres{{0.0, 0.0}, {2.0, 0.0}, {1.0, h}};
  std::vector<ConfidenceBall> balls;
  for (const auto& c : centres) balls.push_back({c, 1.05});
  CHECK(ref::planar_feasibility_gap(centres, Vector(3, 1.05)) > 0.0);
  CHECK(ref::planar_feasibility_gap({centres[0], centres[1]}, Vector(2, 1.05)) <= 0.0);
  CHECK(intersection_t_hat(balls, FeasibilityMode::Pairwise) == 2);
  CHECK(intersection_t_hat(balls, FeasibilityMode::Exact) == 1);
  CHECK_FALSE(ball_intersection_point(balls).has_value());

  balls[2].radius = 1.5;
  REQUIRE(ref::planar_feasibility_gap(centres, {1.05, 1.05, 1.5}) <= 0.0);
  CHECK(intersection_t_hat(balls, FeasibilityMode::Exact) == 2);
  const auto p = ball_intersection_point(balls);
  REQUIRE(p.has_value());
  for (const auto& b : balls) CHECK(std::sqrt(squared_distance(*p, b.center)) <= b.radius * (1 + 1e-8));
}

TEST_CASE("exact and pairwise agree on random planar balls when the gap is clear") {
  Stream s(22, StreamTag::Test, 22);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Vector> centres;
    Vector radii;
    std::vector<ConfidenceBall> balls;
    for (int k = 0; k < 3; ++k) {
      centres.push_back({s.uniform(-1, 1), s.uniform(-1, 1)});
      radii.push_back(s.uniform(0.3, 1.2));
      balls.push_back({centres.back(), radii.back()});
    }
    const double gap = ref::planar_feasibility_gap(centres, radii, 400);
    if (std::abs(gap) < 0.02) continue;
    ++checked;
    CHECK(ball_intersection_point(balls).has_value() == (gap < 0));
  }
  CHECK(checked > 30);
}

TEST_CASE("elimination estimator") {
  const EliminationParams p{1.0, 1.0};
  SUBCASE("all equal pools everything") {
    const auto e = make_est({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
    const auto out = elimination_estimator(e, SampleSizes(10, {20, 30}), 2, p);
    CHECK(out.selected->size() == 3);
    check_convex(out, e);
  }
  SUBCASE("threshold boundary") {
    // d = 4, n0 = 100, n_k = 400: sqrt(4 log 400 / 100).
    const double thr = std::sqrt(4.0 * std::log(400.0) / 100.0);
    CHECK(elimination_threshold(4, p, 100, 400) == doctest::Approx(thr));
    const SampleSizes sizes(100, {400, 400});
    const auto e = make_est({{0, 0, 0, 0}, {0.999 * thr, 0, 0, 0}, {0, 1.001 * thr, 0, 0}});
    const auto out = elimination_estimator(e, sizes, 4, p);
    CHECK(out.selected->members() == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("unit sizes give a zero threshold") {
    CHECK(elimination_threshold(3, p, 1, 1) == 0.0);
  }
}

TEST_CASE("sample-split clustering") {
  SUBCASE("two point masses") {
    const std::vector<Vector> pts{{-1, 0}, {1, 0}, {-1, 0}, {1, 0}};
    const ClusterAssignment ca = sample_split_clustering(pts, pts);
    CHECK(ca.c1 == doctest::Approx(-1.0));
    CHECK(ca.c2 == doctest::Approx(1.0));
    CHECK(ca.labels == std::vector<int>{1, 2, 1, 2});
  }
  SUBCASE("direction sign does not change the partition") {
    Stream s(23, StreamTag::Test, 23);
    std::vector<Vector> a, b;
    for (int k = 0; k < 12; ++k) {
      const double c = k % 3 == 0 ? 2.0 : -1.0;
      a.push_back({c + 0.2 * s.normal(), 0.2 * s.normal(), 0.2 * s.normal()});
      b.push_back({c + 0.2 * s.normal(), 0.2 * s.normal(), 0.2 * s.normal()});
    }
    const ClusterAssignment plus = sample_split_clustering(a, b);
    Vector flipped = plus.direction;
    for (auto& x : flipped) x = -x;
    const ClusterAssignment minus = assign_by_projection(a, b, flipped);
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) CHECK((plus.labels[i] == plus.labels[j]) == (minus.labels[i] == minus.labels[j]));
    }
  }
  SUBCASE("identical sources") {
    const std::vector<Vector> pts(5, Vector{0.3, 0.3});
    const ClusterAssignment ca = sample_split_clustering(pts, pts);
    CHECK(ca.labels == std::vector<int>(5, 1));
    CHECK(ca.c1 == ca.c2);
  }
  CHECK_THROWS_AS(sample_split_clustering({{1.0}}, {{1.0}}), std::invalid_argument);
}

TEST_CASE("two-cluster adaptive estimator") {
  SUBCASE("noiseless separated clusters") {
    SplitEstimates sp;
    const Vector mu1{0.0, 0.0}, mu2{5.0, 0.0};
    sp.target_halves = {mu1, mu1};
    for (auto& part : sp.source_parts) {
      for (int k = 0; k < 6; ++k) part.push_back(k < 3 ? mu1 : mu2);
    }
    const auto out = two_cluster_adaptive(sp);
    CHECK(out.value == mu1);
    CHECK(out.labels == std::vector<int>{1, 1, 1, 2, 2, 2});
    // Candidate 0 and the first cluster's candidate tie at mu1; the smaller index wins.
    CHECK(out.choice.value() == 0);

    // Nudging the first target half off mu1 makes pooling with the first cluster win.
    sp.target_halves[0] = {0.3, 0.0};
    const auto nudged = two_cluster_adaptive(sp);
    CHECK(source_members(*nudged.selected) == std::vector<std::size_t>{1, 2, 3});
    CHECK(nudged.choice.value() == 1);
    CHECK(nudged.value[0] == doctest::Approx(0.075));
  }
  SUBCASE("output is one of the three candidates") {
    Stream s(24, StreamTag::Test, 24);
    SplitEstimates sp;
    sp.target_halves = {Vector{s.normal(), s.normal()}, Vector{s.normal(), s.normal()}};
    for (auto& part : sp.source_parts) {
      for (int k = 0; k < 7; ++k) part.push_back({s.normal(), s.normal()});
    }
    const auto out = two_cluster_adaptive(sp);
    Vector expect = sp.target_halves[0];
    const auto members = source_members(*out.selected);
    for (auto k : members) {
      for (int i = 0; i < 2; ++i) expect[i] += sp.source_parts[2][k - 1][i];
    }
    for (auto& x : expect) x /= 1.0 + members.size();
    CHECK(out.value[0] == doctest::Approx(expect[0]));
    CHECK(out.value[1] == doctest::Approx(expect[1]));
    double total = 0.0;
    for (double w : out.weights) total += w;
    CHECK(total == doctest::Approx(1.0));
  }
  SUBCASE("missing parts") {
    SplitEstimates sp;
    sp.target_halves = {Vector{0.0}, Vector{0.0}};
    sp.source_parts[0] = {{0.0}, {1.0}};
    sp.source_parts[1] = {{0.0}, {1.0}};
    CHECK_THROWS_AS(two_cluster_adaptive(sp), std::invalid_argument);
  }
}

TEST_CASE("two-cluster adaptive MSE on equal clusters") {
  // m = 20, d = 10, two equal clusters with the target at mu1, sigma^2 = tau^2 / n.
  const std::size_t m = 20, d = 10;
  const std::int64_t n = 600;
  Stream s(25, StreamTag::Test, 25);
  const Vector u = ref::random_unit(d, s);
  const double delta = 1.5;
  std::vector<Vector> theta(m + 1, Vector(d, 0.0));
  for (std::size_t k = m / 2 + 1; k <= m; ++k) {
    for (std::size_t i = 0; i < d; ++i) theta[k][i] = delta * u[i];
  }
  const ProblemInstance inst(d, 1.0, theta, SampleSizes::uniform(n, n, m));
  const double sigma2 = 1.0 / n;
  const double md = static_cast<double>(m) * d;
  const double m_cl = std::min(d * sigma2, d * sigma2 / m + delta * delta);
  const double delta_tilde = (d + std::log(md)) / m + std::sqrt(m * (d + std::log(md))) / m + std::log(md);
  double mse = 0.0;
  const int reps = 400;
  for (int rep = 0; rep < reps; ++rep) {
    const SplitEstimates sp = sample_split_estimates(inst, 7, rep);
    mse += squared_distance(two_cluster_adaptive(sp).value, inst.target()) / reps;
  }
  CHECK(mse <= 10.0 * (m_cl + sigma2 * delta_tilde + sigma2));
}

TEST_CASE("practical clustering estimator") {
  SUBCASE("K = 1 pools everything") {
    Stream s(26, StreamTag::Test, 26);
    const auto e = random_estimates(5, 3, s);
    const SampleSizes sizes(10, {10, 20, 30, 40, 50});
    const auto out = practical_clustering_estimator(e, sizes, 3, 1, 1.0);
    CHECK(out.selected->size() == 6);
    check_convex(out, e);
  }
  SUBCASE("separated clusters keep the target's cluster") {
    std::vector<Vector> th{{0.0, 0.0}};
    for (int k = 0; k < 6; ++k) th.push_back(k < 3 ? Vector{0.01 * k, 0.0} : Vector{10.0, 0.01 * k});
    const auto e = make_est(th);
    const SampleSizes sizes = SampleSizes::uniform(100, 100, 6);
    const auto out = practical_clustering_estimator(e, sizes, 2, 2, default_cluster_threshold(6, 100));
    CHECK(source_members(*out.selected) == std::vector<std::size_t>{1, 2, 3});
    CHECK(out.labels[0] == out.labels[1]);
    CHECK(out.labels[0] != out.labels[5]);
    for (int l : out.labels) CHECK((l == 1 || l == 2));
  }
  CHECK(default_cluster_threshold(100, 400) == doctest::Approx(2.0 * std::log(40000.0)));
  CHECK_THROWS_AS(practical_clustering_estimator(make_est({{0.0}, {1.0}}), SampleSizes(5, {5}), 1, 2, 1.0),
                  std::invalid_argument);
}

TEST_CASE("convexity across random calls") {
  Stream s(27, StreamTag::Test, 27);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + s.below(6), d = 1 + s.below(4);
    const auto e = random_estimates(m, d, s, 0.3);
    const SampleSizes sizes = random_sizes(m, s);
    const TargetSplit split{e.theta_tilde[0], e.theta_tilde[0], sizes.n0() / 2.0, sizes.n0() / 2.0};
    check_convex(elimination_estimator(e, sizes, d, {1.0, 1.0}), e);
    check_convex(intersection_estimator(e, sizes, 1.0, 0.1), e);
    check_convex(practical_clustering_estimator(e, sizes, d, 2, 2.0, trial), e);
    const auto ms = model_selection(e, sizes, full_subset_family(m), split);
    // The target half doubles as theta_0 here, so the weights describe the output directly.
    check_convex(ms, e);
  }
}

TEST_CASE("permutation equivariance") {
  Stream s(28, StreamTag::Test, 28);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 3 + s.below(5), d = 2 + s.below(3);
    const auto e = random_estimates(m, d, s, 0.2);
    const SampleSizes sizes = random_sizes(m, s);
    const auto perm = random_perm(m, s);
    const auto pe = permute(e, perm);
    const SampleSizes ps = permute(sizes, perm);

    auto same = [&](const EstimatorOutput& a, const EstimatorOutput& b) {
      CHECK(unpermute(*b.selected, perm) == source_members(*a.selected));
      for (std::size_t i = 0; i < d; ++i) CHECK(b.value[i] == doctest::Approx(a.value[i]).epsilon(1e-10));
    };
    same(naive(e), naive(pe));
    same(elimination_estimator(e, sizes, d, {1.0, 1.0}), elimination_estimator(pe, ps, d, {1.0, 1.0}));
    same(practical_clustering_estimator(e, sizes, d, 2, 1.0, 5), practical_clustering_estimator(pe, ps, d, 2, 1.0, 5));

    // Full-family model selection: the permuted family is the same set of subsets, so
    // compare the selected sets only when the validation minimum is unique.
    const TargetSplit split{{0.05, 0.0}, e.theta_tilde[0], sizes.n0() / 2.0, sizes.n0() / 2.0};
    Vector first = split.first;
    first.resize(d, 0.0);
    const TargetSplit sp{first, e.theta_tilde[0], split.n_first, split.n_second};
    same(model_selection(e, sizes, full_subset_family(m), sp), model_selection(pe, ps, full_subset_family(m), sp));
  }
}

TEST_CASE("prefix estimators depend on source order") {
  // Bias ordered 0, 0, far: reversing the order puts the far source first.
  const auto e = make_est({{0.0}, {0.0}, {0.0}, {30.0}});
  const SampleSizes sizes(100, {100, 100, 100});
  const auto ordered = intersection_estimator(e, sizes, 1.0, 0.1);
  CHECK(*ordered.t_hat == 2);
  const auto rev = intersection_estimator(permute(e, {2, 1, 0}), sizes, 1.0, 0.1);
  CHECK(*rev.t_hat == 0);
  CHECK(ordered.selected->size() != rev.selected->size());

  // Validation errors at second half 0.3: {} 0.09, {1} 0.01, {1,2} 0.0036, {1,2,3} large.
  const TargetSplit split{{0.0}, {0.3}, 50.0, 50.0};
  const auto a = model_selection(e, sizes, prefix_family(3), split);
  const auto b = model_selection(permute(e, {2, 1, 0}), sizes, prefix_family(3), split);
  CHECK(a.selected->size() == 3);
  CHECK(b.selected->size() == 1);
}
