#pragma once

#include <string>
#include <vector>

#include "frechet/moments.hpp"

namespace frechet {

struct Estimate {
  double value = 0.0;
  double se = 0.0;  // zero for deterministic backends
};

// ---------------------------------------------------------------------------
// Lindeberg functionals at the family center.
//
// halved:  (1/phi_n) sum_i E[ 1/2 d_i^2 ; 1/2 d_i^2 > eps phi_n ]
// natural: (1/phi_n) sum_i E[ d_i^2 ; d_i^2 > eps phi_n ]
// The halved form drives the consistency results, the natural form is the
// central-limit condition; both reduce to tail moments E[d^2; d^2 > tau].
// ---------------------------------------------------------------------------

inline Estimate local_lindeberg(FamilyMoments& fm, long n, double eps, bool halved = true) {
  if (!(eps > 0.0)) throw DomainError("lindeberg epsilon must be positive");
  const double phi = fm.phi(n);
  const double tau = (halved ? 2.0 : 1.0) * eps * phi;
  const double half = halved ? 0.5 : 1.0;
  Estimate out;
  double var = 0.0;
  for (const auto& g : fm.groups(n)) {
    out.value += g.count * half * g.oracle->dist_sq_tail(tau) / phi;
    const double se = g.count * half * g.oracle->dist_sq_tail_se(tau) / phi;
    var += se * se;
  }
  out.se = std::sqrt(var);
  return out;
}

// Semi-global (pairwise) functional
//   (1/(n phi_n)) sum_{i,j} E[ 1/2 dist(X_i,X_j)^2 ; 1/2 dist(X_i,X_j)^2 > eps phi_n ]
// over independent pairs. Estimated by Monte Carlo per distinct unordered law
// pair with multiplicities; bounded pairs whose supports cannot reach the
// threshold contribute an exact zero.
inline Estimate semi_global_lindeberg(FamilyMoments& fm, long n, double eps, long pair_draws,
                                      std::uint64_t seed) {
  if (!(eps > 0.0)) throw DomainError("lindeberg epsilon must be positive");
  if (pair_draws < 2) throw ConfigError("semi-global estimator needs at least 2 draws");
  const double phi = fm.phi(n);
  const double tau = eps * phi;
  const DistributionFamily& fam = fm.family();
  const Manifold& m = fam.manifold;
  const auto groups = fm.groups(n);

  Estimate out;
  double var = 0.0;
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a; b < groups.size(); ++b) {
      const auto& ga = groups[a];
      const auto& gb = groups[b];
      const double mult = (a == b)
                              ? static_cast<double>(ga.count) * (ga.count - 1)
                              : 2.0 * static_cast<double>(ga.count) * gb.count;
      if (mult == 0.0) continue;
      const double reach = ga.oracle->bound_radius() + gb.oracle->bound_radius();
      if (std::isfinite(reach) && 0.5 * reach * reach <= tau) continue;  // exact zero

      Rng rng(derive_stream(seed, static_cast<std::uint64_t>(ga.first_index),
                            static_cast<std::uint64_t>(gb.first_index)));
      double sum = 0.0, sum2 = 0.0;
      for (long t = 0; t < pair_draws; ++t) {
        const Vec x = exp_map(m, fam.center,
                              tangent_from_coords(fam.frame, ga.oracle->sample_coords(rng)));
        const Vec y = exp_map(m, fam.center,
                              tangent_from_coords(fam.frame, gb.oracle->sample_coords(rng)));
        const double r = dist(m, x, y);
        const double h = 0.5 * r * r;
        const double val = (h > tau) ? h : 0.0;
        sum += val;
        sum2 += val * val;
      }
      const double mean = sum / pair_draws;
      const double se =
          std::sqrt(std::max(0.0, sum2 / pair_draws - mean * mean) / pair_draws);
      out.value += mult * mean / (n * phi);
      const double c = mult * se / (n * phi);
      var += c * c;
    }
  }
  out.se = std::sqrt(var);
  return out;
}

// ---------------------------------------------------------------------------
// Normalized-sum covariance, pooled Hessian, and the predicted limiting
// covariance  H~^-1 V H~^-1  of  w = sqrt(2 phi_n) log_o(xhat_n).
// ---------------------------------------------------------------------------

struct CltPrediction {
  long n = 0;
  double phi = 0.0;
  double phi_se = 0.0;
  Mat v;              // covariance of (Y_1+...+Y_n)/sqrt(2 phi_n); unit trace
  Mat h_tilde;        // sum_i E[H_i(o)] / (2 phi_n)
  Mat h_tilde_inv;
  Mat predicted_cov;  // h_tilde_inv * v * h_tilde_inv
  double h_cond = 0.0;
};

inline CltPrediction predict_clt(FamilyMoments& fm, long n) {
  const int d = fm.family().manifold.dim;
  CltPrediction p;
  p.n = n;
  p.phi = fm.phi(n);
  p.phi_se = fm.phi_se(n);
  p.v = Mat::Zero(d, d);
  p.h_tilde = Mat::Zero(d, d);
  for (const auto& g : fm.groups(n)) {
    p.v += g.count * g.oracle->second_moments();
    p.h_tilde += g.count * g.oracle->expected_hessian();
  }
  p.v /= 2.0 * p.phi;
  p.h_tilde /= 2.0 * p.phi;

  Eigen::SelfAdjointEigenSolver<Mat> es(p.h_tilde);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > tol::kConditionNumberCap)
    throw SingularCorrection("pooled expected Hessian is singular or too ill-conditioned to invert");
  p.h_cond = hi / lo;
  p.h_tilde_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
  Mat pc = p.h_tilde_inv * p.v * p.h_tilde_inv;
  p.predicted_cov = 0.5 * (pc + pc.transpose());
  return p;
}

// Largest single-index energy share max_{m<=n} E[dist(X_m,o)^2] / phi_n; the
// classical negligibility precondition of the Feller-type converse.
inline double feller_max_term_ratio(FamilyMoments& fm, long n) {
  const double phi = fm.phi(n);
  double worst = 0.0;
  for (const auto& g : fm.groups(n))
    worst = std::max(worst, 2.0 * g.oracle->half_dist_sq() / phi);
  return worst;
}

// ---------------------------------------------------------------------------
// Finite-n report on the central-limit hypotheses.
// ---------------------------------------------------------------------------

struct CltConditionThresholds {
  double energy_per_index_min = 1e-6;  // phi_n / n bounded away from zero
  double hessian_drift_max = 0.5;      // transported-Hessian drift at the smallest rho
  double hessian_frob_max = 1e3;       // (1/phi_n) sum_i E||H_i(o)||_F^2
  double h_inverse_norm_max = 1e3;     // ||H~_n^{-1}||
  double lindeberg_max = 0.05;         // natural Lindeberg at every requested eps
};

struct LindebergPoint {
  double eps = 0.0;
  double value = 0.0;
  double se = 0.0;
};

struct CltConditionReport {
  long n = 0;
  double phi = 0.0;
  double energy_per_index = 0.0;  // phi_n / n
  bool energy_ok = false;
  // (rho, (1/phi_n) sum_i max over a deterministic ball grid of
  //  E||T H_i(x') T^t - H_i(o)||_F); grid maxima are lower bounds of the sup.
  std::vector<std::pair<double, double>> hessian_drift;
  double hessian_drift_at_min_rho = 0.0;
  bool drift_ok = false;
  double hessian_frob_avg = 0.0;
  bool frob_ok = false;
  double h_inverse_norm = 0.0;
  double h_cond = 0.0;
  bool invertible_ok = false;
  std::vector<LindebergPoint> lindeberg;  // natural variant
  bool lindeberg_ok = false;
  bool all_ok = false;
};

inline CltConditionReport clt_condition_report(FamilyMoments& fm, long n,
                                               const std::vector<double>& rho_list,
                                               const std::vector<double>& eps_list,
                                               const CltConditionThresholds& thr = {},
                                               long grid_per_rho = 64, long mc_draws = 128,
                                               std::uint64_t seed = 0x636f6e64ull) {
  const DistributionFamily& fam = fm.family();
  const Manifold& m = fam.manifold;
  CltConditionReport rep;
  rep.n = n;
  rep.phi = fm.phi_raw(n);
  rep.energy_per_index = rep.phi / n;
  rep.energy_ok = rep.energy_per_index >= thr.energy_per_index_min;

  // A point mass at the center fails the growth condition; the remaining
  // ratios are undefined, so report them as infinite with all flags down.
  if (!(rep.phi > 0.0)) {
    const double inf = std::numeric_limits<double>::infinity();
    for (double rho : rho_list) rep.hessian_drift.emplace_back(rho, inf);
    rep.hessian_drift_at_min_rho = inf;
    rep.hessian_frob_avg = inf;
    rep.h_inverse_norm = inf;
    rep.h_cond = inf;
    return rep;
  }

  // Transported-Hessian drift over ball grids. Flat space is exact: the
  // Hessians are identically the identity, so the drift vanishes.
  for (double rho : rho_list) {
    if (!(rho > 0.0) || rho >= injectivity_radius(m))
      throw DomainError("condition grid radius must lie in (0, injectivity radius)");
    double total = 0.0;
    if (m.family != Family::Euclidean) {
      std::size_t law_idx = 0;
      for (const auto& g : fm.groups(n)) {
        double worst = 0.0;
        for (long k = 1; k <= grid_per_rho; ++k) {
          const double radius = rho * radical_inverse(k, 2);
          const Vec dir = halton_direction(k, m.dim, 1);
          const Vec y = exp_map(m, fam.center, tangent_from_coords(fam.frame, radius * dir));
          const Mat frame_y = orthonormal_frame(m, y);
          const Mat t = transport_matrix(m, y, fam.center, frame_y, fam.frame);
          Rng rng(derive_stream(derive_stream(seed, static_cast<std::uint64_t>(g.first_index),
                                              static_cast<std::uint64_t>(law_idx)),
                                static_cast<std::uint64_t>(k), 7));
          double acc = 0.0;
          for (long tdraw = 0; tdraw < mc_draws; ++tdraw) {
            const Vec src = exp_map(m, fam.center,
                                    tangent_from_coords(fam.frame, g.oracle->sample_coords(rng)));
            const Mat ho = hessian_operator(m, fam.center, src, fam.frame);
            const Mat hy = hessian_operator(m, y, src, frame_y);
            acc += (t * hy * t.transpose() - ho).norm();
          }
          worst = std::max(worst, acc / mc_draws);
        }
        total += g.count * worst;
        ++law_idx;
      }
      total /= rep.phi;
    }
    rep.hessian_drift.emplace_back(rho, total);
  }
  double min_rho = std::numeric_limits<double>::infinity();
  for (const auto& [rho, val] : rep.hessian_drift)
    if (rho < min_rho) {
      min_rho = rho;
      rep.hessian_drift_at_min_rho = val;
    }
  rep.drift_ok = rep.hessian_drift.empty() || rep.hessian_drift_at_min_rho <= thr.hessian_drift_max;

  double frob = 0.0;
  for (const auto& g : fm.groups(n)) frob += g.count * g.oracle->hessian_frob_sq();
  rep.hessian_frob_avg = frob / rep.phi;
  rep.frob_ok = rep.hessian_frob_avg <= thr.hessian_frob_max;

  try {
    const CltPrediction p = predict_clt(fm, n);
    Eigen::SelfAdjointEigenSolver<Mat> es(p.h_tilde_inv);
    rep.h_inverse_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    rep.h_cond = p.h_cond;
    rep.invertible_ok = rep.h_inverse_norm <= thr.h_inverse_norm_max;
  } catch (const SingularCorrection&) {
    rep.h_inverse_norm = std::numeric_limits<double>::infinity();
    rep.h_cond = std::numeric_limits<double>::infinity();
    rep.invertible_ok = false;
  }

  rep.lindeberg_ok = true;
  for (double eps : eps_list) {
    const Estimate e = local_lindeberg(fm, n, eps, /*halved=*/false);
    rep.lindeberg.push_back({eps, e.value, e.se});
    if (e.value > thr.lindeberg_max) rep.lindeberg_ok = false;
  }

  rep.all_ok = rep.energy_ok && rep.drift_ok && rep.frob_ok && rep.invertible_ok &&
               rep.lindeberg_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Feller-type converse screen. The converse says: when every index is
// energy-negligible and phi_n diverges, a vanishing truncated transport
// distance forces the natural Lindeberg condition. With finite-n trend
// proxies, the verdicts are:
//   not_applicable - negligibility or growth preconditions fail
//   contradiction  - preconditions hold, distance vanishes, Lindeberg does not
//   consistent     - everything else
// ---------------------------------------------------------------------------

struct FellerConverseRow {
  long n = 0;
  double phi = 0.0;
  double max_term_ratio = 0.0;  // feller_max_term_ratio at this n
  double lindeberg = 0.0;       // natural local Lindeberg at a reference eps
  double w1 = 0.0;
  double w1_se = 0.0;
  double baseline = 0.0;
  double baseline_se = 0.0;
};

struct FellerConverseThresholds {
  double term_ratio_max = 0.05;
  double phi_growth_min = 4.0;  // phi_last / phi_first
  double lindeberg_max = 0.05;
  double w1_margin = 0.05;      // w1_last <= baseline_last + margin
};

struct FellerConverseReport {
  bool preconditions_hold = false;
  bool w1_vanishing = false;
  bool lindeberg_vanishing = false;
  double final_term_ratio = 0.0;
  double phi_growth = 0.0;
  double final_lindeberg = 0.0;
  double final_w1_gap = 0.0;  // w1_last - baseline_last
  std::string verdict;
};

inline FellerConverseReport feller_converse_check(const std::vector<FellerConverseRow>& rows,
                                                  const FellerConverseThresholds& thr = {}) {
  if (rows.size() < 2) throw ConfigError("converse screen needs at least two schedule rows");
  FellerConverseReport rep;
  const auto& first = rows.front();
  const auto& last = rows.back();
  rep.final_term_ratio = last.max_term_ratio;
  rep.phi_growth = last.phi / first.phi;
  bool phi_monotone = true;
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (rows[k].phi < rows[k - 1].phi) phi_monotone = false;
  rep.preconditions_hold = rep.final_term_ratio <= thr.term_ratio_max && phi_monotone &&
                           rep.phi_growth >= thr.phi_growth_min;
  rep.final_w1_gap = last.w1 - last.baseline;
  rep.w1_vanishing = last.w1 <= first.w1 && rep.final_w1_gap <= thr.w1_margin;
  rep.final_lindeberg = last.lindeberg;
  rep.lindeberg_vanishing = rep.final_lindeberg <= thr.lindeberg_max;
  if (!rep.preconditions_hold)
    rep.verdict = "not_applicable";
  else if (rep.w1_vanishing && !rep.lindeberg_vanishing)
    rep.verdict = "contradiction";
  else
    rep.verdict = "consistent";
  return rep;
}

}  // namespace frechet
