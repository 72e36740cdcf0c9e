#pragma once

#include <string>
#include <vector>

#include "frechet/certify.hpp"
#include "frechet/diagnostics.hpp"
#include "frechet/parallel.hpp"
#include "frechet/solver.hpp"
#include "frechet/wasserstein.hpp"

namespace frechet {

enum class ExperimentKind { Wlln, EuclideanApprox, ManifoldClt };

// Fixed salts that split the root seed into independent stream families; they
// are part of the reproducibility contract (see the README's determinism
// section) and must never change.
namespace seeds {
inline constexpr std::uint64_t kW1 = 0xA54FF53A5F1D36F1ull;
inline constexpr std::uint64_t kBaseline = 0x510E527FADE682D1ull;
inline constexpr std::uint64_t kConditions = 0x9B05688C2B3E6C1Full;
inline constexpr std::uint64_t kCertificate = 0x1F83D9ABFB41BD6Bull;
inline constexpr std::uint64_t kMoments = 0x6A09E667F3BCC908ull;
inline constexpr std::uint64_t kSemiGlobal = 0xBB67AE8584CAA73Bull;
}  // namespace seeds

struct SolverSettings {
  std::string algorithm = "gd";  // "gd" | "newton"
  int max_iters = 200;
  double grad_tol = 1e-10;
  double step_shrink = 0.5;
  double ball_radius = 0.0;  // 0 = automatic (see default_ball_radius)
};

struct ConditionSettings {
  bool check = true;
  std::vector<double> rho_list = {0.1};
  long grid = 64;
  long draws = 128;
  CltConditionThresholds thresholds;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Wlln;
  DistributionFamily family;
  std::vector<long> n_schedule = {16, 64, 256, 1024};
  long replicates = 256;
  std::uint64_t seed = 0;
  std::vector<double> epsilon_list = {0.1, 0.5};
  long w1_reps = 8;
  long assignment_cap = kDefaultAssignmentCap;
  SolverSettings solver;
  FamilyMoments::Backend backend = FamilyMoments::Backend::ClosedForm;
  long mc_draws = 20000;
  int threads = 1;
  ConditionSettings conditions;
  FellerConverseThresholds feller;
  bool keep_cloud = false;  // retain per-row normalized clouds (testing aid)
};

// Every stochastic figure carries its standard error and the number of
// replicates/draws behind it; deterministic backends report zero SEs.
struct ExperimentRow {
  long n = 0;
  double phi = 0.0, phi_se = 0.0;
  double max_term_ratio = 0.0;
  bool has_w1 = false;
  double w1 = 0.0, w1_se = 0.0;
  double baseline = 0.0, baseline_se = 0.0;
  double mean_error = 0.0, mean_error_se = 0.0;
  double ratio = 0.0, ratio_se = 0.0;
  std::vector<double> lindeberg_natural, lindeberg_natural_se;
  std::vector<double> lindeberg_halved, lindeberg_halved_se;
  long failures_nonconverged = 0;
  long failures_cutlocus = 0;
  long replicates_used = 0;
  bool aborted = false;
  // manifold CLT extras
  bool has_clt = false;
  Mat predicted_cov, sample_cov, sample_cov_se;
  double h_cond = 0.0;
  bool hypotheses_checked = false;
  bool hypotheses_ok = false;
  Mat cloud;  // populated only when ExperimentConfig::keep_cloud is set
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::Wlln;
  std::vector<double> epsilon_list;
  std::vector<ExperimentRow> rows;
  bool has_feller = false;
  FellerConverseReport feller;
  bool any_aborted = false;
};

inline double default_ball_radius(const Manifold& m, double r_max) {
  const double inj = injectivity_radius(m);
  if (!std::isfinite(inj)) return std::numeric_limits<double>::infinity();
  return std::min(0.499 * inj, std::max(0.45 * inj, 1.5 * r_max));
}

namespace detail {

struct ReplicateOut {
  enum class Status { Ok, NonConverged, CutLocus } status = Status::Ok;
  double mean_error = 0.0;
  double ratio = 0.0;
  Vec w;  // normalized tangent coordinates (CLT experiments)
};

inline void fill_lindeberg(FamilyMoments& fm, long n, const std::vector<double>& eps_list,
                           ExperimentRow& row) {
  for (double eps : eps_list) {
    const Estimate nat = local_lindeberg(fm, n, eps, /*halved=*/false);
    const Estimate hal = local_lindeberg(fm, n, eps, /*halved=*/true);
    row.lindeberg_natural.push_back(nat.value);
    row.lindeberg_natural_se.push_back(nat.se);
    row.lindeberg_halved.push_back(hal.value);
    row.lindeberg_halved_se.push_back(hal.se);
  }
}

struct MeanSe {
  double mean = 0.0, se = 0.0;
};

template <class Get>
MeanSe aggregate(const std::vector<ReplicateOut>& reps, Get&& get) {
  double sum = 0.0, sum2 = 0.0;
  long used = 0;
  for (const auto& r : reps) {
    if (r.status != ReplicateOut::Status::Ok) continue;
    const double v = get(r);
    sum += v;
    sum2 += v * v;
    ++used;
  }
  MeanSe out;
  if (used == 0) return out;
  out.mean = sum / used;
  if (used > 1)
    out.se = std::sqrt(std::max(0.0, sum2 / used - out.mean * out.mean) / (used - 1));
  return out;
}

inline SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions opts;
  opts.max_iters = cfg.solver.max_iters;
  opts.grad_tol = cfg.solver.grad_tol;
  opts.step_shrink = cfg.solver.step_shrink;
  opts.ball_center = cfg.family.center;
  opts.ball_radius = cfg.solver.ball_radius > 0.0
                         ? cfg.solver.ball_radius
                         : default_ball_radius(cfg.family.manifold, cfg.family.r_max);
  return opts;
}

inline SolveReport run_solver(const ExperimentConfig& cfg, const Sample& s,
                              const SolverOptions& opts) {
  if (cfg.solver.algorithm == "newton") return frechet_mean_newton(s, opts);
  if (cfg.solver.algorithm == "gd") return frechet_mean_gd(s, opts);
  throw ConfigError("unknown solver algorithm: " + cfg.solver.algorithm);
}

inline double energy_at_center(const Sample& s, const Vec& center) {
  double e = 0.0;
  for (const Vec& p : s.points) {
    const double r = dist(s.manifold, p, center);
    e += 0.5 * r * r;
  }
  return e;
}

// Shared replicate loop for the solve-based experiments. Writes one slot per
// replicate; slot content depends only on (seed, replicate, index) streams.
// ratio is the law-of-large-numbers quantity: empirical energy at the center
// over phi_n, whose expectation is exactly 1.
inline std::vector<ReplicateOut> run_replicates(const ExperimentConfig& cfg, long n, double phi,
                                                bool want_w) {
  const DistributionFamily& fam = cfg.family;
  const Manifold& m = fam.manifold;
  const SolverOptions opts = solver_options(cfg);
  std::vector<ReplicateOut> out(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](long r) {
    ReplicateOut& slot = out[r];
    const Sample s = draw_sample(fam, n, cfg.seed, static_cast<std::uint64_t>(r));
    const SolveReport rep = run_solver(cfg, s, opts);
    if (rep.cut_locus_aborted) {
      slot.status = ReplicateOut::Status::CutLocus;
      return;
    }
    if (!rep.converged) {
      slot.status = ReplicateOut::Status::NonConverged;
      return;
    }
    slot.mean_error = dist(m, rep.x, fam.center);
    slot.ratio = energy_at_center(s, fam.center) / phi;
    if (want_w) {
      const Vec log_xhat = log_map(m, fam.center, rep.x);
      slot.w = std::sqrt(2.0 * phi) * tangent_coords(m, fam.frame, log_xhat);
    }
  });
  return out;
}

inline void count_failures(const std::vector<ReplicateOut>& reps, ExperimentRow& row,
                           long replicates) {
  for (const auto& r : reps) {
    if (r.status == ReplicateOut::Status::NonConverged) ++row.failures_nonconverged;
    if (r.status == ReplicateOut::Status::CutLocus) ++row.failures_cutlocus;
  }
  row.replicates_used = replicates - row.failures_nonconverged - row.failures_cutlocus;
  row.aborted = (row.failures_nonconverged + row.failures_cutlocus) * 20 > replicates;  // > 5%
}

inline Mat collect_cloud(const std::vector<ReplicateOut>& reps, int d) {
  long used = 0;
  for (const auto& r : reps)
    if (r.status == ReplicateOut::Status::Ok) ++used;
  Mat cloud(used, d);
  long row = 0;
  for (const auto& r : reps)
    if (r.status == ReplicateOut::Status::Ok) cloud.row(row++) = r.w.transpose();
  return cloud;
}

inline void sample_covariance(const Mat& cloud, Mat& cov, Mat& cov_se) {
  const long r = cloud.rows();
  const int d = static_cast<int>(cloud.cols());
  const Vec mean = cloud.colwise().mean();
  Mat centered = cloud.rowwise() - mean.transpose();
  cov = centered.transpose() * centered / static_cast<double>(r - 1);
  cov_se.resize(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      cov_se(a, b) = std::sqrt((cov(a, a) * cov(b, b) + cov(a, b) * cov(a, b)) /
                               static_cast<double>(r - 1));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Law-of-large-numbers experiment: ball-restricted empirical means per
// replicate; reports mean dist(xhat, center) and the energy ratio
// F_hat(xhat)/phi_n, both of which should drift to their limits (0 and 1).
// ---------------------------------------------------------------------------

inline ExperimentResult run_wlln_experiment(ExperimentConfig cfg) {
  cfg.kind = ExperimentKind::Wlln;
  FamilyMoments fm(cfg.family, cfg.backend, cfg.mc_draws,
                   splitmix_mix(cfg.seed ^ seeds::kMoments));
  ExperimentResult result;
  result.kind = cfg.kind;
  result.epsilon_list = cfg.epsilon_list;
  for (long n : cfg.n_schedule) {
    ExperimentRow row;
    row.n = n;
    row.phi = fm.phi(n);
    row.phi_se = fm.phi_se(n);
    row.max_term_ratio = feller_max_term_ratio(fm, n);
    detail::fill_lindeberg(fm, n, cfg.epsilon_list, row);
    const auto reps = detail::run_replicates(cfg, n, row.phi, /*want_w=*/false);
    detail::count_failures(reps, row, cfg.replicates);
    const auto err = detail::aggregate(reps, [](const auto& r) { return r.mean_error; });
    const auto ratio = detail::aggregate(reps, [](const auto& r) { return r.ratio; });
    row.mean_error = err.mean;
    row.mean_error_se = err.se;
    row.ratio = ratio.mean;
    row.ratio_se = ratio.se;
    result.any_aborted |= row.aborted;
    result.rows.push_back(std::move(row));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Euclidean central-approximation experiment: no manifold solve; the cloud of
// normalized tangent sums (Y_1+...+Y_n)/sqrt(2 phi_n) is compared against
// MVN(0, V_n) by exact truncated transport distance, next to the sampling
// baseline of the estimator.
// ---------------------------------------------------------------------------

inline ExperimentResult run_euclidean_approx_experiment(ExperimentConfig cfg) {
  cfg.kind = ExperimentKind::EuclideanApprox;
  if (cfg.family.manifold.family != Family::Euclidean)
    throw ConfigError("the central-approximation experiment requires a Euclidean family");
  FamilyMoments fm(cfg.family, cfg.backend, cfg.mc_draws,
                   splitmix_mix(cfg.seed ^ seeds::kMoments));
  const int d = cfg.family.manifold.dim;
  ExperimentResult result;
  result.kind = cfg.kind;
  result.epsilon_list = cfg.epsilon_list;
  for (long n : cfg.n_schedule) {
    ExperimentRow row;
    row.n = n;
    const CltPrediction pred = predict_clt(fm, n);
    row.phi = pred.phi;
    row.phi_se = pred.phi_se;
    row.max_term_ratio = feller_max_term_ratio(fm, n);
    detail::fill_lindeberg(fm, n, cfg.epsilon_list, row);

    std::vector<detail::ReplicateOut> reps(cfg.replicates);
    const double root = std::sqrt(2.0 * row.phi);
    parallel_for(cfg.replicates, cfg.threads, [&](long r) {
      Vec sum = Vec::Zero(d);
      double energy = 0.0;
      for (long i = 1; i <= n; ++i) {
        Rng rng(derive_stream(cfg.seed, static_cast<std::uint64_t>(r),
                              static_cast<std::uint64_t>(i)));
        const Vec y = cfg.family.draw_tangent_coords(i, rng);
        sum += y;
        energy += 0.5 * y.squaredNorm();
      }
      reps[r].w = sum / root;
      reps[r].mean_error = sum.norm() / static_cast<double>(n);
      reps[r].ratio = energy / row.phi;
    });
    detail::count_failures(reps, row, cfg.replicates);
    const auto err = detail::aggregate(reps, [](const auto& r) { return r.mean_error; });
    const auto ratio = detail::aggregate(reps, [](const auto& r) { return r.ratio; });
    row.mean_error = err.mean;
    row.mean_error_se = err.se;
    row.ratio = ratio.mean;
    row.ratio_se = ratio.se;

    const Mat cloud = detail::collect_cloud(reps, d);
    const MultivariateNormal mvn = make_mvn(Vec::Zero(d), pred.v);
    const WassersteinEstimate w1 =
        w1_sample_vs_mvn(cloud, mvn, cfg.w1_reps,
                         derive_stream(cfg.seed ^ seeds::kW1, static_cast<std::uint64_t>(n), 0),
                         cfg.assignment_cap);
    const WassersteinEstimate base = w1_mvn_baseline(
        mvn, cloud.rows(), cfg.w1_reps,
        derive_stream(cfg.seed ^ seeds::kBaseline, static_cast<std::uint64_t>(n), 0),
        cfg.assignment_cap);
    row.has_w1 = true;
    row.w1 = w1.value;
    row.w1_se = w1.se;
    row.baseline = base.value;
    row.baseline_se = base.se;
    detail::sample_covariance(cloud, row.sample_cov, row.sample_cov_se);
    row.predicted_cov = pred.v;
    if (cfg.keep_cloud) row.cloud = cloud;
    result.rows.push_back(std::move(row));
  }

  std::vector<FellerConverseRow> fr;
  for (const auto& row : result.rows)
    fr.push_back({row.n, row.phi, row.max_term_ratio, row.lindeberg_natural.front(), row.w1,
                  row.w1_se, row.baseline, row.baseline_se});
  result.feller = feller_converse_check(fr, cfg.feller);
  result.has_feller = true;
  return result;
}

// ---------------------------------------------------------------------------
// Manifold central-approximation experiment: per replicate, a ball-restricted
// empirical mean; the cloud w = sqrt(2 phi_n) log_o(xhat) is compared against
// MVN(0, H~^-1 V H~^-1). On Euclidean families this reduces to the experiment
// above (the solve returns the arithmetic mean and log is subtraction).
// ---------------------------------------------------------------------------

inline ExperimentResult run_manifold_clt_experiment(ExperimentConfig cfg) {
  cfg.kind = ExperimentKind::ManifoldClt;
  FamilyMoments fm(cfg.family, cfg.backend, cfg.mc_draws,
                   splitmix_mix(cfg.seed ^ seeds::kMoments));
  const int d = cfg.family.manifold.dim;
  ExperimentResult result;
  result.kind = cfg.kind;
  result.epsilon_list = cfg.epsilon_list;
  for (long n : cfg.n_schedule) {
    ExperimentRow row;
    row.n = n;
    const CltPrediction pred = predict_clt(fm, n);
    row.phi = pred.phi;
    row.phi_se = pred.phi_se;
    row.max_term_ratio = feller_max_term_ratio(fm, n);
    row.has_clt = true;
    row.predicted_cov = pred.predicted_cov;
    row.h_cond = pred.h_cond;
    detail::fill_lindeberg(fm, n, cfg.epsilon_list, row);

    if (cfg.conditions.check) {
      row.hypotheses_checked = true;
      const CltConditionReport rep = clt_condition_report(
          fm, n, cfg.conditions.rho_list, cfg.epsilon_list, cfg.conditions.thresholds,
          cfg.conditions.grid, cfg.conditions.draws,
          derive_stream(cfg.seed ^ seeds::kConditions, static_cast<std::uint64_t>(n), 0));
      row.hypotheses_ok = rep.all_ok;
    }

    const auto reps = detail::run_replicates(cfg, n, row.phi, /*want_w=*/true);
    detail::count_failures(reps, row, cfg.replicates);
    const auto err = detail::aggregate(reps, [](const auto& r) { return r.mean_error; });
    const auto ratio = detail::aggregate(reps, [](const auto& r) { return r.ratio; });
    row.mean_error = err.mean;
    row.mean_error_se = err.se;
    row.ratio = ratio.mean;
    row.ratio_se = ratio.se;

    if (!row.aborted && row.replicates_used >= 2) {
      const Mat cloud = detail::collect_cloud(reps, d);
      const MultivariateNormal mvn = make_mvn(Vec::Zero(d), pred.predicted_cov);
      const WassersteinEstimate w1 =
          w1_sample_vs_mvn(cloud, mvn, cfg.w1_reps,
                           derive_stream(cfg.seed ^ seeds::kW1, static_cast<std::uint64_t>(n), 0),
                           cfg.assignment_cap);
      const WassersteinEstimate base = w1_mvn_baseline(
          mvn, cloud.rows(), cfg.w1_reps,
          derive_stream(cfg.seed ^ seeds::kBaseline, static_cast<std::uint64_t>(n), 0),
          cfg.assignment_cap);
      row.has_w1 = true;
      row.w1 = w1.value;
      row.w1_se = w1.se;
      row.baseline = base.value;
      row.baseline_se = base.se;
      detail::sample_covariance(cloud, row.sample_cov, row.sample_cov_se);
      if (cfg.keep_cloud) row.cloud = cloud;
    }
    result.any_aborted |= row.aborted;
    result.rows.push_back(std::move(row));
  }

  if (result.rows.size() >= 2 && !result.any_aborted) {
    std::vector<FellerConverseRow> fr;
    for (const auto& row : result.rows)
      fr.push_back({row.n, row.phi, row.max_term_ratio, row.lindeberg_natural.front(), row.w1,
                    row.w1_se, row.baseline, row.baseline_se});
    result.feller = feller_converse_check(fr, cfg.feller);
    result.has_feller = true;
  }
  return result;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::Wlln: return run_wlln_experiment(cfg);
    case ExperimentKind::EuclideanApprox: return run_euclidean_approx_experiment(cfg);
    case ExperimentKind::ManifoldClt: return run_manifold_clt_experiment(cfg);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace frechet
