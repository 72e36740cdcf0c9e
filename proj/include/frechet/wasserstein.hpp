#pragma once

#include <vector>

#include "frechet/common.hpp"
#include "frechet/rng.hpp"

namespace frechet {

// ---------------------------------------------------------------------------
// Multivariate normal sampling via the symmetric square root.
// ---------------------------------------------------------------------------

struct MultivariateNormal {
  Vec mean;
  Mat cov;
  Mat sqrt_cov;
};

// Eigenvalues in [-tol::kPsdRepair, 0) are clipped to zero (rounding repair);
// anything more negative is a hard error.
inline MultivariateNormal make_mvn(const Vec& mean, const Mat& cov) {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size())
    throw SizeMismatch("covariance dimensions do not match the mean");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
    throw InvalidCovariance("covariance is not symmetric");
  const Mat sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  Vec lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) {
    if (lam[i] < -tol::kPsdRepair)
      throw InvalidCovariance("covariance has a significantly negative eigenvalue");
    if (lam[i] < 0.0) lam[i] = 0.0;
  }
  MultivariateNormal mvn;
  mvn.mean = mean;
  mvn.cov = sym;
  mvn.sqrt_cov = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  return mvn;
}

inline Vec sample_mvn(const MultivariateNormal& mvn, Rng& rng) {
  return mvn.mean + mvn.sqrt_cov * rng.normal_vec(static_cast<int>(mvn.mean.size()));
}

inline Mat sample_mvn_cloud(const MultivariateNormal& mvn, long count, Rng& rng) {
  Mat cloud(count, mvn.mean.size());
  for (long i = 0; i < count; ++i) cloud.row(i) = sample_mvn(mvn, rng).transpose();
  return cloud;
}

// ---------------------------------------------------------------------------
// Truncated transport distance between equal-size clouds:
//   W~1(a, b) = (1/n) min over permutations of sum_i min(1, ||a_i - b_pi(i)||).
// Exact via the Hungarian / shortest-augmenting-path method with dual
// potentials, O(n^3).
// ---------------------------------------------------------------------------

namespace detail {

inline double solve_assignment(const Mat& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(match[j] - 1, j - 1);
  return total;
}

inline bool lexicographic_less(const Mat& a, const Mat& b) {
  for (long i = 0; i < a.size(); ++i) {
    const double x = a(i / a.cols(), i % a.cols());
    const double y = b(i / b.cols(), i % b.cols());
    if (x < y) return true;
    if (x > y) return false;
  }
  return false;
}

}  // namespace detail

inline constexpr long kDefaultAssignmentCap = 512;

// Rows are points. Arguments are ordered canonically before solving so the
// result is bitwise symmetric in its inputs.
inline double truncated_w1_exact(const Mat& a, const Mat& b, long cap = kDefaultAssignmentCap) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw SizeMismatch("transport distance needs equal-size clouds of equal dimension");
  if (a.rows() < 1) throw SizeMismatch("clouds must be non-empty");
  if (a.rows() > cap)
    throw CapExceeded("cloud size exceeds the exact-assignment cap");
  const bool swap = detail::lexicographic_less(b, a);
  const Mat& p = swap ? b : a;
  const Mat& q = swap ? a : b;
  const long n = p.rows();
  Mat cost(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      cost(i, j) = std::min(1.0, (p.row(i) - q.row(j)).norm());
  return detail::solve_assignment(cost) / static_cast<double>(n);
}

struct WassersteinEstimate {
  double value = 0.0;
  double se = 0.0;
  long reps = 0;
};

// Mean exact distance between the fixed cloud and `reps` fresh same-size
// draws from the reference normal.
inline WassersteinEstimate w1_sample_vs_mvn(const Mat& cloud, const MultivariateNormal& mvn,
                                            long reps, std::uint64_t seed,
                                            long cap = kDefaultAssignmentCap) {
  if (reps < 1) throw ConfigError("transport comparison needs at least one repetition");
  double sum = 0.0, sum2 = 0.0;
  for (long r = 0; r < reps; ++r) {
    Rng rng(derive_stream(seed, static_cast<std::uint64_t>(r), 0));
    const Mat fresh = sample_mvn_cloud(mvn, cloud.rows(), rng);
    const double w = truncated_w1_exact(cloud, fresh, cap);
    sum += w;
    sum2 += w * w;
  }
  WassersteinEstimate est;
  est.reps = reps;
  est.value = sum / reps;
  est.se = reps > 1 ? std::sqrt(std::max(0.0, sum2 / reps - est.value * est.value) /
                                (reps - 1))
                    : 0.0;
  return est;
}

// Sampling floor of the estimator: mean distance between two independent
// fresh draws from the reference normal itself.
inline WassersteinEstimate w1_mvn_baseline(const MultivariateNormal& mvn, long size, long reps,
                                           std::uint64_t seed,
                                           long cap = kDefaultAssignmentCap) {
  if (reps < 1) throw ConfigError("baseline needs at least one repetition");
  double sum = 0.0, sum2 = 0.0;
  for (long r = 0; r < reps; ++r) {
    Rng rng_a(derive_stream(seed, static_cast<std::uint64_t>(r), 1));
    Rng rng_b(derive_stream(seed, static_cast<std::uint64_t>(r), 2));
    const Mat a = sample_mvn_cloud(mvn, size, rng_a);
    const Mat b = sample_mvn_cloud(mvn, size, rng_b);
    const double w = truncated_w1_exact(a, b, cap);
    sum += w;
    sum2 += w * w;
  }
  WassersteinEstimate est;
  est.reps = reps;
  est.value = sum / reps;
  est.se = reps > 1 ? std::sqrt(std::max(0.0, sum2 / reps - est.value * est.value) /
                                (reps - 1))
                    : 0.0;
  return est;
}

}  // namespace frechet
