#ifndef SANDFRAC_CLUSTERING_HPP
#define SANDFRAC_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sandfrac/error.hpp"
#include "sandfrac/rng.hpp"

namespace sandfrac {

/// Points are the rows of an n x d matrix.
using PointMatrix = Eigen::MatrixXd;

struct ClusterResult {
  PointMatrix centers;                           // one row per cluster
  std::optional<Eigen::MatrixXd> membership;     // c x n, FCM only
  std::optional<std::vector<std::size_t>> assignments;  // hard labels, k-means only
  std::size_t iterations = 0;
  double final_cost = 0.0;
  std::vector<double> cost_history;

  std::size_t n_clusters() const noexcept { return static_cast<std::size_t>(centers.rows()); }
};

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

struct KMeansOptions {
  std::size_t max_iter = 300;
};

namespace detail {

inline double squared_distance(const PointMatrix& a, Eigen::Index i, const PointMatrix& b,
                               Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

}  // namespace detail

/// Lloyd's algorithm with farthest-point seeding from a seeded random
/// start. An empty cluster is re-seeded at the point farthest from its
/// current center.
inline ClusterResult kmeans(const PointMatrix& points, std::size_t k, std::uint64_t seed,
                            const KMeansOptions& opts = {}) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1) throw ParameterError("k-means needs k >= 1");
  if (n < k) throw ParameterError("k-means needs at least k points");
  const auto kk = static_cast<Eigen::Index>(k);

  Rng rng(seed);
  std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.index(n))};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<char> taken(n, 0);
  taken[chosen[0]] = 1;
  while (chosen.size() < k) {
    const auto last = static_cast<Eigen::Index>(chosen.back());
    std::size_t far = n;
    double far_d = -1.0;
    for (std::size_t p = 0; p < n; ++p) {
      nearest[p] = std::min(nearest[p],
                            detail::squared_distance(points, static_cast<Eigen::Index>(p), points, last));
      if (!taken[p] && nearest[p] > far_d) {
        far_d = nearest[p];
        far = p;
      }
    }
    chosen.push_back(far);
    taken[far] = 1;
  }

  ClusterResult res;
  res.centers.resize(kk, points.cols());
  for (std::size_t c = 0; c < k; ++c)
    res.centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(chosen[c]));

  std::vector<std::size_t> label(n, k);
  std::vector<double> dist(n, 0.0);
  auto assign = [&]() {
    bool changed = false;
    double cost = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = detail::squared_distance(points, static_cast<Eigen::Index>(p), res.centers,
                                                  static_cast<Eigen::Index>(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed |= label[p] != best;
      label[p] = best;
      dist[p] = best_d;
      cost += best_d;
    }
    return std::pair{changed, cost};
  };

  auto [changed, cost] = assign();
  res.cost_history.push_back(cost);
  for (std::size_t it = 0; it < opts.max_iter && changed; ++it) {
    PointMatrix sums = PointMatrix::Zero(kk, points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t p = 0; p < n; ++p) {
      sums.row(static_cast<Eigen::Index>(label[p])) += points.row(static_cast<Eigen::Index>(p));
      ++counts[label[p]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      const auto ci = static_cast<Eigen::Index>(c);
      if (counts[c] > 0) {
        res.centers.row(ci) = sums.row(ci) / static_cast<double>(counts[c]);
        continue;
      }
      const auto far = static_cast<std::size_t>(
          std::max_element(dist.begin(), dist.end()) - dist.begin());
      res.centers.row(ci) = points.row(static_cast<Eigen::Index>(far));
      dist[far] = 0.0;
    }
    std::tie(changed, cost) = assign();
    res.cost_history.push_back(cost);
    res.iterations = it + 1;
  }
  res.final_cost = cost;
  res.assignments = label;
  return res;
}

// ---------------------------------------------------------------------------
// Fuzzy c-means
// ---------------------------------------------------------------------------

struct FcmOptions {
  double m = 2.0;  // fuzziness exponent, > 1
  double tol = 1e-5;
  std::size_t max_iter = 200;
};

/// Observer called after every membership update with (iteration, U, centers).
using FcmObserver =
    std::function<void(std::size_t, const Eigen::MatrixXd&, const PointMatrix&)>;

namespace detail {

// J(U, C) = sum_i sum_j u_ij^m d_ij^2
inline double fcm_cost(const PointMatrix& points, const PointMatrix& centers,
                       const Eigen::MatrixXd& u, double m) {
  double j = 0.0;
  for (Eigen::Index i = 0; i < centers.rows(); ++i)
    for (Eigen::Index p = 0; p < points.rows(); ++p)
      j += std::pow(u(i, p), m) * squared_distance(centers, i, points, p);
  return j;
}

inline void fcm_centers(const PointMatrix& points, const Eigen::MatrixXd& u, double m,
                        PointMatrix& centers) {
  centers.resize(u.rows(), points.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    Eigen::RowVectorXd num = Eigen::RowVectorXd::Zero(points.cols());
    double den = 0.0;
    for (Eigen::Index p = 0; p < points.rows(); ++p) {
      const double w = std::pow(u(i, p), m);
      num += w * points.row(p);
      den += w;
    }
    centers.row(i) = num / den;
  }
}

// Optimal memberships for fixed centers. A point lying on a center belongs
// to it crisply (lowest index on ties).
inline void fcm_memberships(const PointMatrix& points, const PointMatrix& centers, double m,
                            Eigen::MatrixXd& u) {
  const Eigen::Index c = centers.rows();
  const double expo = 1.0 / (m - 1.0);
  u.resize(c, points.rows());
  Eigen::VectorXd d2(c);
  for (Eigen::Index p = 0; p < points.rows(); ++p) {
    Eigen::Index zero = -1;
    for (Eigen::Index i = 0; i < c; ++i) {
      d2(i) = squared_distance(centers, i, points, p);
      if (d2(i) == 0.0 && zero < 0) zero = i;
    }
    if (zero >= 0) {
      u.col(p).setZero();
      u(zero, p) = 1.0;
      continue;
    }
    for (Eigen::Index i = 0; i < c; ++i) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < c; ++k) s += std::pow(d2(i) / d2(k), expo);
      u(i, p) = 1.0 / s;
    }
  }
}

}  // namespace detail

/// Bezdek's alternating optimization of the FCM objective, starting from a
/// seeded random membership matrix with unit column sums.
inline ClusterResult fcm(const PointMatrix& points, std::size_t c, std::uint64_t seed,
                         const FcmOptions& opts = {}, const FcmObserver& observer = {}) {
  const Eigen::Index n = points.rows();
  if (c < 1) throw ParameterError("FCM needs c >= 1");
  if (static_cast<Eigen::Index>(c) > n)
    throw ParameterError("FCM needs c <= number of points");
  if (!(opts.m > 1.0)) throw ParameterError("FCM fuzziness exponent must exceed 1");
  if (!(opts.tol > 0.0)) throw ParameterError("FCM tolerance must be positive");

  const auto ci = static_cast<Eigen::Index>(c);
  Eigen::MatrixXd u(ci, n);
  Rng rng(seed);
  for (Eigen::Index p = 0; p < n; ++p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ci; ++i) {
      u(i, p) = rng.uniform() + 1e-3;
      s += u(i, p);
    }
    u.col(p) /= s;
  }

  ClusterResult res;
  detail::fcm_centers(points, u, opts.m, res.centers);
  res.cost_history.push_back(detail::fcm_cost(points, res.centers, u, opts.m));
  Eigen::MatrixXd next;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    detail::fcm_memberships(points, res.centers, opts.m, next);
    const double delta = (next - u).cwiseAbs().maxCoeff();
    u.swap(next);
    res.cost_history.push_back(detail::fcm_cost(points, res.centers, u, opts.m));
    if (observer) observer(it, u, res.centers);
    detail::fcm_centers(points, u, opts.m, res.centers);
    res.cost_history.push_back(detail::fcm_cost(points, res.centers, u, opts.m));
    res.iterations = it + 1;
    if (delta < opts.tol) break;
  }
  res.final_cost = res.cost_history.back();
  res.membership = std::move(u);
  return res;
}

// ---------------------------------------------------------------------------
// Subtractive clustering
// ---------------------------------------------------------------------------

struct SubtractiveParams {
  double radius = 0.2;         // r_a, in normalized units
  double squash = 1.25;        // r_b / r_a
  double accept_ratio = 0.5;
  double reject_ratio = 0.15;
  std::size_t max_centers = 100;

  void validate() const {
    if (!(radius > 0.0 && radius <= 1.0))
      throw ParameterError("subtractive radius must lie in (0, 1]");
    if (!(squash > 1.0)) throw ParameterError("subtractive squash factor must exceed 1");
    if (!(reject_ratio > 0.0 && reject_ratio < accept_ratio && accept_ratio <= 1.0))
      throw ParameterError("subtractive ratios need 0 < reject < accept <= 1");
    if (max_centers < 1) throw ParameterError("subtractive max_centers must be >= 1");
  }
};

/// Potential of every point: P_i = sum_j exp(-4 |x_i - x_j|^2 / r_a^2).
/// The j == i term contributes exactly 1.
inline std::vector<double> subtractive_potentials(const PointMatrix& points, double radius) {
  const Eigen::Index n = points.rows();
  const double alpha = 4.0 / (radius * radius);
  std::vector<double> pot(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      s += std::exp(-alpha * detail::squared_distance(points, i, points, j));
    pot[static_cast<std::size_t>(i)] = s;
  }
  return pot;
}

/// Chiu's cluster estimation. After each accepted center the potentials are
/// reduced by P* exp(-4 |x - x*|^2 / r_b^2). Candidates above
/// accept_ratio * P1 are accepted, below reject_ratio * P1 end the search,
/// and in between they are accepted only if d_min / r_a + P / P1 >= 1
/// (otherwise the candidate's potential is zeroed and the next one tried).
inline ClusterResult subtractive(const PointMatrix& points, const SubtractiveParams& params = {}) {
  params.validate();
  const Eigen::Index n = points.rows();
  if (n == 0) throw ParameterError("subtractive clustering needs at least one point");

  std::vector<double> pot = subtractive_potentials(points, params.radius);
  const double beta = 4.0 / (params.squash * params.radius * params.squash * params.radius);
  auto argmax = [&] {
    return static_cast<Eigen::Index>(std::max_element(pot.begin(), pot.end()) - pot.begin());
  };

  std::vector<Eigen::Index> centers;
  Eigen::Index cand = argmax();
  const double first = pot[static_cast<std::size_t>(cand)];
  double current = first;
  while (centers.size() < params.max_centers) {
    bool accept = false;
    if (current > params.accept_ratio * first) {
      accept = true;
    } else if (current < params.reject_ratio * first) {
      break;
    } else {
      double dmin = std::numeric_limits<double>::infinity();
      for (Eigen::Index c : centers)
        dmin = std::min(dmin, std::sqrt(detail::squared_distance(points, cand, points, c)));
      accept = dmin / params.radius + current / first >= 1.0;
    }
    if (accept) {
      centers.push_back(cand);
      for (Eigen::Index j = 0; j < n; ++j)
        pot[static_cast<std::size_t>(j)] -=
            current * std::exp(-beta * detail::squared_distance(points, j, points, cand));
    } else {
      pot[static_cast<std::size_t>(cand)] = 0.0;
    }
    cand = argmax();
    current = pot[static_cast<std::size_t>(cand)];
    if (!(current > 0.0)) break;
  }

  ClusterResult res;
  res.centers.resize(static_cast<Eigen::Index>(centers.size()), points.cols());
  for (std::size_t c = 0; c < centers.size(); ++c)
    res.centers.row(static_cast<Eigen::Index>(c)) = points.row(centers[c]);
  res.iterations = centers.size();
  res.final_cost = current;
  return res;
}

}  // namespace sandfrac

#endif  // SANDFRAC_CLUSTERING_HPP
