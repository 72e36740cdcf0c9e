#pragma once

#include <vector>

#include "frechet/moments.hpp"

namespace frechet {

// ---------------------------------------------------------------------------
// Strict-local-minimum certificate. For each n, estimates
//   kappa_hat(n) = min over an annulus grid y of phi_n(y) / phi_n(o) - 1,
// the margin by which the center beats every competitor at distances in
// [rho0, rho1]. A strictly positive margin (beyond Monte Carlo error)
// certifies the uniform strict-local-minimum property on that annulus.
// ---------------------------------------------------------------------------

struct CertificateRow {
  long n = 0;
  double kappa_hat = 0.0;
  double se = 0.0;            // delta-method error of the minimizing ratio
  double phi_center = 0.0;
  double phi_center_se = 0.0;
  long grid = 0;
  long draws = 0;
};

inline std::vector<CertificateRow> strict_local_min_certificate(
    FamilyMoments& fm, const std::vector<long>& n_list, double rho0, double rho1, long grid,
    long mc_draws, std::uint64_t seed) {
  const DistributionFamily& fam = fm.family();
  const Manifold& m = fam.manifold;
  if (!(0.0 < rho0 && rho0 < rho1)) throw DomainError("annulus radii must satisfy 0 < rho0 < rho1");
  if (rho1 >= injectivity_radius(m)) throw DomainError("outer annulus radius exceeds the injectivity radius");
  if (grid < 1 || mc_draws < 2) throw ConfigError("certificate needs a grid and at least 2 draws");
  if (n_list.empty()) throw ConfigError("certificate needs at least one n");

  const long n_max = *std::max_element(n_list.begin(), n_list.end());
  const auto groups = fm.groups(n_max);

  // Grid points; slot 0 is the center itself.
  std::vector<Vec> pts;
  pts.push_back(fam.center);
  for (long k = 1; k <= grid; ++k) {
    const double radius = rho0 + (rho1 - rho0) * radical_inverse(k, 2);
    const Vec dir = halton_direction(k, m.dim, 1);
    pts.push_back(exp_map(m, fam.center, tangent_from_coords(fam.frame, radius * dir)));
  }

  // Per-law Monte Carlo with common random numbers: one draw stream per law
  // feeds every grid point, and competitors are scored by the paired
  // difference against the center. Sharing draws collapses the variance of
  // the ratio (the shared realization cancels) and keeps the min over the
  // grid from being dragged down by independent per-point noise.
  std::vector<std::vector<double>> mean(groups.size()), dmean(groups.size()),
      dsevar(groups.size());
  std::vector<double> sevar0(groups.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    mean[g].assign(pts.size(), 0.0);
    dmean[g].assign(pts.size(), 0.0);
    dsevar[g].assign(pts.size(), 0.0);
    std::vector<double> sum(pts.size(), 0.0), dsum(pts.size(), 0.0), dsum2(pts.size(), 0.0);
    double sum02 = 0.0;
    Rng rng(derive_stream(seed, static_cast<std::uint64_t>(groups[g].first_index), 0));
    for (long t = 0; t < mc_draws; ++t) {
      const Vec x = exp_map(m, fam.center,
                            tangent_from_coords(fam.frame, groups[g].oracle->sample_coords(rng)));
      const double r0 = dist(m, x, pts[0]);
      const double h0 = 0.5 * r0 * r0;
      sum[0] += h0;
      sum02 += h0 * h0;
      for (std::size_t k = 1; k < pts.size(); ++k) {
        const double r = dist(m, x, pts[k]);
        const double h = 0.5 * r * r;
        sum[k] += h;
        const double d = h - h0;
        dsum[k] += d;
        dsum2[k] += d * d;
      }
    }
    mean[g][0] = sum[0] / mc_draws;
    sevar0[g] = std::max(0.0, sum02 / mc_draws - mean[g][0] * mean[g][0]) / mc_draws;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      mean[g][k] = sum[k] / mc_draws;
      dmean[g][k] = dsum[k] / mc_draws;
      dsevar[g][k] = std::max(0.0, dsum2[k] / mc_draws - dmean[g][k] * dmean[g][k]) / mc_draws;
    }
  }

  std::vector<CertificateRow> rows;
  for (long n : n_list) {
    CertificateRow row;
    row.n = n;
    row.grid = grid;
    row.draws = mc_draws;
    double phi_o = 0.0, var_o = 0.0;
    std::vector<double> diff_k(pts.size(), 0.0), dvar_k(pts.size(), 0.0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      long count = 0;
      for (long i = 1; i <= n; ++i)
        if (fam.key(i) == groups[g].key) ++count;  // counts for this n
      if (count == 0) continue;
      phi_o += count * mean[g][0];
      var_o += static_cast<double>(count) * count * sevar0[g];
      for (std::size_t k = 1; k < pts.size(); ++k) {
        diff_k[k] += count * dmean[g][k];
        dvar_k[k] += static_cast<double>(count) * count * dsevar[g][k];
      }
    }
    if (!(phi_o > 0.0))
      throw DegenerateModel("certificate undefined: aggregate energy vanishes at the center");
    row.phi_center = phi_o;
    row.phi_center_se = std::sqrt(var_o);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 1;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      const double ratio = diff_k[k] / phi_o;
      if (ratio < best) {
        best = ratio;
        arg = k;
      }
    }
    row.kappa_hat = best;
    // Delta method on diff/phi; the correlation between the paired difference
    // and the center energy is dropped, which only widens the band.
    row.se = std::sqrt(dvar_k[arg] / (phi_o * phi_o) +
                       best * best * var_o / (phi_o * phi_o));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Linear growth of the aggregate energy away from a minimizer o:
//   phi_n(y) >= n dist(y, o)^2 / 16.
// Valid whenever o minimizes phi_n; callers assert that premise. Reported
// per test point so callers can render the margin.
// ---------------------------------------------------------------------------

struct GrowthCheckRow {
  Vec y;
  double lhs = 0.0;  // phi_n(y) (or its estimate)
  double se = 0.0;
  double rhs = 0.0;  // n dist(y, o)^2 / 16
  bool pass = false;
};

// Empirical form: phi_n(y) = sum_i 1/2 dist(X_i, y)^2 over the sample.
inline std::vector<GrowthCheckRow> growth_bound_check(const Sample& s, const Vec& o,
                                                      const std::vector<Vec>& test_points) {
  check_sample(s);
  check_point(s.manifold, o);
  std::vector<GrowthCheckRow> rows;
  for (const Vec& y : test_points) {
    check_point(s.manifold, y);
    GrowthCheckRow row;
    row.y = y;
    for (const Vec& p : s.points) {
      const double r = dist(s.manifold, p, y);
      row.lhs += 0.5 * r * r;
    }
    const double rho = dist(s.manifold, y, o);
    row.rhs = s.size() * rho * rho / 16.0;
    row.pass = row.lhs >= row.rhs;
    rows.push_back(row);
  }
  return rows;
}

// Model form: phi_n(y) estimated by Monte Carlo through the family oracles.
inline std::vector<GrowthCheckRow> growth_bound_check(FamilyMoments& fm, long n,
                                                      const std::vector<Vec>& test_points,
                                                      long mc_draws, std::uint64_t seed) {
  const DistributionFamily& fam = fm.family();
  const Manifold& m = fam.manifold;
  if (mc_draws < 2) throw ConfigError("growth check needs at least 2 draws");
  std::vector<GrowthCheckRow> rows;
  std::uint64_t salt = 0;
  for (const Vec& y : test_points) {
    check_point(m, y);
    GrowthCheckRow row;
    row.y = y;
    double var = 0.0;
    for (const auto& g : fm.groups(n)) {
      Rng rng(derive_stream(seed, static_cast<std::uint64_t>(g.first_index), salt));
      double sum = 0.0, sum2 = 0.0;
      for (long t = 0; t < mc_draws; ++t) {
        const Vec x = exp_map(m, fam.center,
                              tangent_from_coords(fam.frame, g.oracle->sample_coords(rng)));
        const double r = dist(m, x, y);
        const double h = 0.5 * r * r;
        sum += h;
        sum2 += h * h;
      }
      const double mean = sum / mc_draws;
      row.lhs += g.count * mean;
      var += static_cast<double>(g.count) * g.count *
             std::max(0.0, sum2 / mc_draws - mean * mean) / mc_draws;
    }
    row.se = std::sqrt(var);
    const double rho = dist(m, y, fam.center);
    row.rhs = n * rho * rho / 16.0;
    row.pass = row.lhs >= row.rhs;
    rows.push_back(row);
    ++salt;
  }
  return rows;
}

}  // namespace frechet
