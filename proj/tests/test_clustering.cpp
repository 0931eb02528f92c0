#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "sandfrac/sandfrac.hpp"

using namespace sandfrac;

namespace {

PointMatrix column(const std::vector<double>& v) {
  PointMatrix p(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) p(static_cast<Eigen::Index>(i), 0) = v[i];
  return p;
}

std::vector<double> sorted_centers(const ClusterResult& r) {
  std::vector<double> c;
  for (Eigen::Index i = 0; i < r.centers.rows(); ++i) c.push_back(r.centers(i, 0));
  std::sort(c.begin(), c.end());
  return c;
}

PointMatrix random_points(std::mt19937_64& gen, Eigen::Index n, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0, 1);
  PointMatrix p(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k) p(i, k) = u(gen);
  return p;
}

}  // namespace

TEST(KMeans, FourPointsMatchBruteForce) {
  const std::vector<double> x{0, 1, 10, 11};
  const auto want = oracle::kmeans2_brute(x);
  for (std::uint64_t seed : {1, 2, 3, 99}) {
    const auto c = sorted_centers(kmeans(column(x), 2, seed));
    EXPECT_DOUBLE_EQ(c[0], want.first);
    EXPECT_DOUBLE_EQ(c[1], want.second);
  }
  EXPECT_DOUBLE_EQ(want.first, 0.5);
  EXPECT_DOUBLE_EQ(want.second, 10.5);
}

TEST(KMeans, KEqualsNGivesZeroCost) {
  const std::vector<double> x{3, -1, 7, 2.5, 9};
  const auto r = kmeans(column(x), x.size(), 4);
  auto want = x;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(sorted_centers(r), want);
  EXPECT_EQ(r.final_cost, 0.0);
}

TEST(KMeans, IdenticalPoints) {
  const auto r = kmeans(column({2.5, 2.5, 2.5, 2.5}), 1, 8);
  EXPECT_EQ(r.centers(0, 0), 2.5);
}

TEST(KMeans, AssignmentsAreNearestCenter) {
  std::mt19937_64 gen(2);
  const auto p = random_points(gen, 60, 2);
  const auto r = kmeans(p, 4, 5);
  ASSERT_TRUE(r.assignments);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Eigen::Index best = 0;
    (r.centers.rowwise() - p.row(i)).rowwise().squaredNorm().minCoeff(&best);
    EXPECT_EQ((*r.assignments)[static_cast<std::size_t>(i)], static_cast<std::size_t>(best));
  }
}

TEST(KMeans, RejectsTooFewPoints) { EXPECT_THROW(kmeans(column({1, 2}), 3, 1), ParameterError); }

TEST(Fcm, TwoPointsTwoClusters) {
  const auto r = fcm(column({0.0, 1.0}), 2, 3);
  const auto c = sorted_centers(r);
  EXPECT_NEAR(c[0], 0.0, 1e-6);
  EXPECT_NEAR(c[1], 1.0, 1e-6);
  EXPECT_NEAR(r.final_cost, 0.0, 1e-10);
  const auto& u = *r.membership;
  for (Eigen::Index p = 0; p < 2; ++p) EXPECT_NEAR(u.col(p).maxCoeff(), 1.0, 1e-6);
}

TEST(Fcm, FourPointsMatchGridSearch) {
  const std::vector<double> x{0.0, 0.1, 0.9, 1.0};
  const auto want = oracle::fcm2_grid(x, -0.2, 1.2);
  FcmOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 1000;
  const auto c = sorted_centers(fcm(column(x), 2, 17, opts));
  EXPECT_NEAR(c[0], want.first, 1e-3);
  EXPECT_NEAR(c[1], want.second, 1e-3);
  EXPECT_NEAR(c[0], 0.05, 1e-2);
  EXPECT_NEAR(c[1], 0.95, 1e-2);
}

TEST(Fcm, ColumnSumsAndMonotoneCost) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_points(gen, 80, 3);
    double worst = 0;
    const auto r = fcm(p, 4, 100 + trial, {}, [&](std::size_t, const Eigen::MatrixXd& u, const PointMatrix&) {
      worst = std::max(worst, (u.colwise().sum().array() - 1.0).abs().maxCoeff());
    });
    EXPECT_LT(worst, 1e-9);
    for (std::size_t k = 1; k < r.cost_history.size(); ++k)
      EXPECT_LE(r.cost_history[k], r.cost_history[k - 1] * (1 + 1e-12));
  }
}

TEST(Fcm, RejectsBadFuzziness) {
  FcmOptions o;
  o.m = 1.0;
  EXPECT_THROW(fcm(column({0, 1, 2}), 2, 1, o), ParameterError);
}

TEST(Subtractive, SinglePoint) {
  const auto p = column({0.4});
  EXPECT_EQ(subtractive_potentials(p, 0.2), std::vector<double>{1.0});
  const auto r = subtractive(p);
  ASSERT_EQ(r.n_clusters(), 1u);
  EXPECT_EQ(r.centers(0, 0), 0.4);
}

TEST(Subtractive, CoincidentPointsTieToFirst) {
  PointMatrix p(2, 2);
  p << 0.3, 0.7, 0.3, 0.7;
  for (double r : {0.1, 0.5, 1.0}) {
    EXPECT_EQ(subtractive_potentials(p, r), (std::vector<double>{2.0, 2.0}));
    SubtractiveParams sp;
    sp.radius = r;
    const auto res = subtractive(p, sp);
    EXPECT_EQ(res.centers.row(0), p.row(0));
  }
}

TEST(Subtractive, FirstCenterIsBruteForceArgmax) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_points(gen, 20, 1);
    const auto pot = oracle::potentials(p, 0.2);
    const auto best = std::max_element(pot.begin(), pot.end()) - pot.begin();
    const auto r = subtractive(p);
    EXPECT_EQ(r.centers(0, 0), p(best, 0));
    const auto lib = subtractive_potentials(p, 0.2);
    for (std::size_t i = 0; i < pot.size(); ++i) EXPECT_NEAR(lib[i], pot[i], 1e-12);
  }
}

TEST(Subtractive, CentersAreDataPoints) {
  std::mt19937_64 gen(4);
  const auto p = random_points(gen, 50, 3);
  const auto r = subtractive(p);
  for (Eigen::Index i = 0; i < r.centers.rows(); ++i) {
    bool found = false;
    for (Eigen::Index k = 0; k < p.rows(); ++k) found |= r.centers.row(i) == p.row(k);
    EXPECT_TRUE(found);
  }
}

TEST(Subtractive, RejectsBadParameters) {
  SubtractiveParams sp;
  sp.radius = 0.0;
  EXPECT_THROW(subtractive(column({0, 1}), sp), ParameterError);
  sp = {};
  sp.reject_ratio = 0.6;
  EXPECT_THROW(subtractive(column({0, 1}), sp), ParameterError);
}
