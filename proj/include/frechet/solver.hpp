#pragma once

#include <optional>
#include <string>

#include "frechet/energy.hpp"

namespace frechet {

struct SolverOptions {
  int max_iters = 200;
  double grad_tol = 1e-10;       // on the total gradient norm ||sum_i log_x X_i||_g
  double init_step = 1.0;
  double step_shrink = 0.5;      // backtracking factor
  double armijo_c1 = 1e-4;
  std::optional<Vec> x0;         // default: first sample point
  std::optional<Vec> ball_center;
  double ball_radius = std::numeric_limits<double>::infinity();
  double max_cut_locus_fraction = 0.01;  // abort when more terms are skipped
};

struct SolveReport {
  Vec x;
  bool converged = false;
  int iters = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  bool hit_ball_boundary = false;
  int singular_hessian_fallbacks = 0;
  long cut_locus_skips = 0;
  bool cut_locus_aborted = false;
  std::string message;
};

namespace detail {

struct IterState {
  Vec mean_log;     // (1/n) sum log_x X_i over non-skipped terms
  double energy;    // full empirical energy (all terms)
  long skipped;
};

inline IterState eval_iterate(const Sample& s, const Vec& x) {
  IterState st;
  st.mean_log = Vec::Zero(ambient_size(s.manifold));
  st.energy = 0.0;
  st.skipped = 0;
  for (const Vec& p : s.points) {
    const double r = dist(s.manifold, x, p);
    st.energy += 0.5 * r * r;
    try {
      st.mean_log += log_map(s.manifold, x, p);
    } catch (const CutLocusError&) {
      ++st.skipped;
    }
  }
  st.mean_log /= static_cast<double>(s.size());
  return st;
}

inline double energy_at(const Sample& s, const Vec& x) {
  double e = 0.0;
  for (const Vec& p : s.points) {
    const double r = dist(s.manifold, x, p);
    e += 0.5 * r * r;
  }
  return e;
}

// Shared iteration driver: `direction` maps the current iterate and its mean
// pulled-back sample to a step tangent (and may flag a Hessian fallback).
template <class DirectionFn>
SolveReport iterate_mean(const Sample& s, const SolverOptions& opts, DirectionFn&& direction) {
  check_sample(s);
  const Manifold& m = s.manifold;
  const double n = s.size();

  Vec x = opts.x0.value_or(s.points.front());
  check_point(m, x);
  const bool balled = opts.ball_center.has_value();
  if (balled) {
    check_point(m, *opts.ball_center);
    if (dist(m, x, *opts.ball_center) > opts.ball_radius + 1e-12)
      throw DomainError("initial iterate lies outside the solver ball");
  }

  SolveReport rep;
  rep.x = x;
  for (int it = 0; it < opts.max_iters; ++it) {
    IterState st = eval_iterate(s, x);
    rep.cut_locus_skips += st.skipped;
    if (st.skipped > opts.max_cut_locus_fraction * n) {
      rep.x = x;
      rep.iters = it;
      rep.energy = st.energy;
      rep.grad_norm = n * metric_norm(m, st.mean_log);
      rep.cut_locus_aborted = true;
      rep.message = "aborted: more than the allowed fraction of sample points were at the cut locus";
      return rep;
    }
    const double total_grad = n * metric_norm(m, st.mean_log);
    rep.iters = it;
    rep.energy = st.energy;
    rep.grad_norm = total_grad;
    rep.x = x;
    if (total_grad <= opts.grad_tol) {
      rep.converged = true;
      return rep;
    }

    Vec d = direction(x, st, rep);
    // Descent rate of the total energy along d: <-grad F, d>_g = <sum log, d>_g.
    double dd = n * metric_dot(m, st.mean_log, d);
    if (!(dd > 0.0) || !is_finite(d)) {
      d = st.mean_log;
      dd = n * metric_dot(m, st.mean_log, d);
      ++rep.singular_hessian_fallbacks;
    }

    double eta = opts.init_step;
    bool accepted = false;
    // Near the minimum the per-step decrease drops below the rounding of the
    // energy itself; the ULP-scale slack lets contraction steps through the
    // plateau (the gradient check, not the energy, decides convergence).
    const double slack =
        8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(st.energy));
    for (int bt = 0; bt < 60; ++bt) {
      Vec cand = exp_map(m, x, eta * d);
      if (balled && dist(m, cand, *opts.ball_center) > opts.ball_radius) {
        rep.hit_ball_boundary = true;
        eta *= opts.step_shrink;
        continue;
      }
      if (energy_at(s, cand) <= st.energy - opts.armijo_c1 * eta * dd + slack) {
        x = cand;
        accepted = true;
        break;
      }
      eta *= opts.step_shrink;
    }
    if (!accepted) {
      rep.message = "line search stalled before reaching the gradient tolerance";
      return rep;
    }
  }
  // Final state after exhausting iterations.
  IterState st = eval_iterate(s, x);
  rep.x = x;
  rep.iters = opts.max_iters;
  rep.energy = st.energy;
  rep.grad_norm = n * metric_norm(m, st.mean_log);
  rep.converged = rep.grad_norm <= opts.grad_tol;
  if (!rep.converged) rep.message = "max_iters reached before the gradient tolerance";
  return rep;
}

}  // namespace detail

// Riemannian gradient descent on the empirical energy: step along the mean
// pulled-back sample (unit step is exact in the Euclidean case), Armijo
// backtracking, optional ball restriction.
inline SolveReport frechet_mean_gd(const Sample& s, const SolverOptions& opts = {}) {
  return detail::iterate_mean(
      s, opts, [](const Vec&, const detail::IterState& st, SolveReport&) { return st.mean_log; });
}

// Newton iteration: solves (sum_i H_i(x)) delta = sum_i log_x X_i in frame
// coordinates; falls back to the gradient direction when the pooled Hessian
// is near-singular or fails to give descent.
inline SolveReport frechet_mean_newton(const Sample& s, const SolverOptions& opts = {}) {
  const Manifold& m = s.manifold;
  return detail::iterate_mean(s, opts,
                              [&](const Vec& x, const detail::IterState& st, SolveReport& rep) -> Vec {
    const Mat frame = orthonormal_frame(m, x);
    Mat h = Mat::Zero(m.dim, m.dim);
    for (const Vec& p : s.points) {
      try {
        h += hessian_operator(m, x, p, frame);
      } catch (const CutLocusError&) {
        // same skip policy as the gradient; already counted by the driver
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > tol::kConditionNumberCap) {
      ++rep.singular_hessian_fallbacks;
      return st.mean_log;
    }
    const Vec g = tangent_coords(m, frame, st.mean_log) * static_cast<double>(s.size());
    const Vec delta = es.eigenvectors() *
                      (es.eigenvectors().transpose() * g).cwiseQuotient(es.eigenvalues());
    return tangent_from_coords(frame, delta);
  });
}

}  // namespace frechet
