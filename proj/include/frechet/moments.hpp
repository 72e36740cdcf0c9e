#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "frechet/families.hpp"
#include "frechet/quadrature.hpp"

namespace frechet {

// Per-index law moments at the family center, in the center's frame. Two
// backends: deterministic closed forms (analytic reductions plus 1-d
// Gauss-Legendre quadrature over the exact truncated radial density, accurate
// to machine precision) and plain Monte Carlo with recorded draw counts and
// standard errors. Both use the same truncated laws the samplers draw from,
// so identities like trace(V_n) = 1 hold without truncation mismatch.
class TangentLawOracle {
 public:
  virtual ~TangentLawOracle() = default;
  virtual Vec sample_coords(Rng& rng) const = 0;
  virtual double half_dist_sq() const = 0;            // E[ 1/2 dist(X,center)^2 ]
  virtual Mat second_moments() const = 0;             // E[ y y^T ], y = frame coords
  virtual Mat expected_hessian() const = 0;           // E[ H(center) ]
  virtual double hessian_frob_sq() const = 0;         // E || H(center) ||_F^2
  virtual double dist_sq_tail(double tau) const = 0;  // E[ dist^2 ; dist^2 > tau ]
  virtual double bound_radius() const = 0;            // sup dist (inf if unbounded)
  virtual bool closed_form() const = 0;
  virtual long draws() const { return 0; }
  virtual double half_dist_sq_se() const { return 0.0; }
  virtual double dist_sq_tail_se(double) const { return 0.0; }
};

namespace detail {

// j-pairing of the complex projective frame: the complex structure maps
// column 2k to 2k+1 and column 2k+1 to -column 2k by construction.
inline int j_partner(int axis) { return (axis % 2 == 0) ? axis + 1 : axis - 1; }

class ClosedFormOracle final : public TangentLawOracle {
 public:
  ClosedFormOracle(const DistributionFamily& fam, long index)
      : fam_(fam), index_(index), key_(fam.key(index)) {
    const double sigma = key_.sigma;
    switch (fam_.law) {
      case TangentLaw::TruncatedGaussian:
        hi_ = std::min(fam_.r_max, 12.0 * sigma);
        break;
      case TangentLaw::UniformBall:
        hi_ = std::min(fam_.r_max, sigma);
        break;
      case TangentLaw::TwoPoint:
        hi_ = sigma;
        if (sigma > fam_.r_max)
          throw DegenerateModel("two-point scale exceeds the support radius r_max");
        break;
    }
    point_mass_ = !(hi_ > 0.0);
    if (!point_mass_ && fam_.law != TangentLaw::TwoPoint) {
      norm_ = radial_integral([](double) { return 1.0; }, 0.0);
      if (!(norm_ > 0.0)) throw DegenerateModel("law normalization vanished");
    }
  }

  Vec sample_coords(Rng& rng) const override { return fam_.draw_tangent_coords(index_, rng); }

  double half_dist_sq() const override { return 0.5 * expect([](double r) { return r * r; }); }

  Mat second_moments() const override {
    const int d = fam_.manifold.dim;
    const double er2 = expect([](double r) { return r * r; });
    if (key_.axis < 0) return (er2 / d) * Mat::Identity(d, d);
    Mat m = Mat::Zero(d, d);
    m(key_.axis, key_.axis) = er2;
    return m;
  }

  Mat expected_hessian() const override {
    const Manifold& m = fam_.manifold;
    const int d = m.dim;
    const double k = m.kappa;
    switch (m.family) {
      case Family::Euclidean:
        return Mat::Identity(d, d);
      case Family::Sphere:
      case Family::Hyperbolic: {
        const double ef = expect([&](double r) { return f_kappa(k, r); });
        if (key_.axis < 0)
          return ((1.0 + (d - 1) * ef) / d) * Mat::Identity(d, d);
        Mat h = ef * Mat::Identity(d, d);
        h(key_.axis, key_.axis) = 1.0;
        return h;
      }
      case Family::ComplexProjective: {
        const double ek = expect([&](double r) { return f_kappa(k, r); });
        const double eq = expect([&](double r) { return f_kappa(k / 4.0, r); });
        if (key_.axis < 0)
          return ((1.0 + ek + (d - 2) * eq) / d) * Mat::Identity(d, d);
        Mat h = eq * Mat::Identity(d, d);
        h(key_.axis, key_.axis) = 1.0;
        const int j = j_partner(key_.axis);
        h(j, j) = ek;
        return h;
      }
    }
    throw UnsupportedManifold("unknown family");
  }

  double hessian_frob_sq() const override {
    const Manifold& m = fam_.manifold;
    const int d = m.dim;
    const double k = m.kappa;
    switch (m.family) {
      case Family::Euclidean:
        return static_cast<double>(d);
      case Family::Sphere:
      case Family::Hyperbolic:
        return expect([&](double r) {
          const double f = f_kappa(k, r);
          return 1.0 + (d - 1) * f * f;
        });
      case Family::ComplexProjective:
        return expect([&](double r) {
          const double fk = f_kappa(k, r);
          const double fq = f_kappa(k / 4.0, r);
          return 1.0 + fk * fk + (d - 2) * fq * fq;
        });
    }
    throw UnsupportedManifold("unknown family");
  }

  double dist_sq_tail(double tau) const override {
    if (tau < 0.0) tau = 0.0;
    if (fam_.law == TangentLaw::TwoPoint)
      return (hi_ * hi_ > tau) ? hi_ * hi_ : 0.0;
    if (tau >= hi_ * hi_) return 0.0;
    return radial_integral([](double r) { return r * r; }, std::sqrt(tau)) / norm_;
  }

  double bound_radius() const override {
    if (point_mass_) return 0.0;
    if (fam_.law == TangentLaw::TruncatedGaussian) return fam_.r_max;
    return hi_;
  }

  bool closed_form() const override { return true; }

 private:
  // E[g(r)] over the exact truncated radial law of r = dist(X, center).
  template <class G>
  double expect(G&& g) const {
    if (point_mass_) return g(0.0);
    if (fam_.law == TangentLaw::TwoPoint) return g(hi_);
    return radial_integral(g, 0.0) / norm_;
  }

  // integral of g(r) * r^p * base(r) over [lo, hi_], p = d-1 for isotropic
  // laws and 0 for axis laws.
  template <class G>
  double radial_integral(G&& g, double lo) const {
    const int p = (key_.axis < 0) ? fam_.manifold.dim - 1 : 0;
    const double sigma = key_.sigma;
    const bool gaussian = fam_.law == TangentLaw::TruncatedGaussian;
    return integrate(
        [&](double r) {
          double w = 1.0;
          for (int q = 0; q < p; ++q) w *= r;
          if (gaussian) w *= std::exp(-0.5 * r * r / (sigma * sigma));
          return g(r) * w;
        },
        lo, hi_);
  }

  DistributionFamily fam_;
  long index_;
  DistributionFamily::LawKey key_;
  double hi_ = 0.0;    // support bound of the radial coordinate
  double norm_ = 1.0;  // radial normalizing constant
  bool point_mass_ = false;
};

class MonteCarloOracle final : public TangentLawOracle {
 public:
  MonteCarloOracle(const DistributionFamily& fam, long index, long draws, std::uint64_t seed)
      : fam_(fam), index_(index), draws_(draws) {
    if (draws < 2) throw ConfigError("Monte Carlo oracle needs at least 2 draws");
    const Manifold& m = fam.manifold;
    const int d = m.dim;
    Rng rng(seed);
    second_ = Mat::Zero(d, d);
    hess_ = Mat::Zero(d, d);
    r2_.resize(draws);
    double sum_r2 = 0.0, sum_r4 = 0.0, sum_frob = 0.0;
    for (long t = 0; t < draws; ++t) {
      const Vec c = fam.draw_tangent_coords(index_, rng);
      const double r2 = c.squaredNorm();
      r2_[t] = r2;
      sum_r2 += r2;
      sum_r4 += r2 * r2;
      second_ += c * c.transpose();
      const Vec point = exp_map(m, fam.center, tangent_from_coords(fam.frame, c));
      const Mat h = hessian_operator(m, fam.center, point, fam.frame);
      hess_ += h;
      sum_frob += h.squaredNorm();
    }
    second_ /= static_cast<double>(draws);
    hess_ /= static_cast<double>(draws);
    frob_ = sum_frob / draws;
    mean_r2_ = sum_r2 / draws;
    var_r2_ = std::max(0.0, sum_r4 / draws - mean_r2_ * mean_r2_);
    std::sort(r2_.begin(), r2_.end());
    suffix_r2_.assign(draws + 1, 0.0);
    suffix_r4_.assign(draws + 1, 0.0);
    for (long t = draws - 1; t >= 0; --t) {
      suffix_r2_[t] = suffix_r2_[t + 1] + r2_[t];
      suffix_r4_[t] = suffix_r4_[t + 1] + r2_[t] * r2_[t];
    }
  }

  Vec sample_coords(Rng& rng) const override { return fam_.draw_tangent_coords(index_, rng); }
  double half_dist_sq() const override { return 0.5 * mean_r2_; }
  Mat second_moments() const override { return second_; }
  Mat expected_hessian() const override { return hess_; }
  double hessian_frob_sq() const override { return frob_; }

  double dist_sq_tail(double tau) const override {
    const long k = std::upper_bound(r2_.begin(), r2_.end(), tau) - r2_.begin();
    return suffix_r2_[k] / static_cast<double>(draws_);
  }

  double bound_radius() const override {
    switch (fam_.law) {
      case TangentLaw::TruncatedGaussian: return fam_.r_max;
      case TangentLaw::UniformBall: return std::min(fam_.r_max, fam_.key(index_).sigma);
      case TangentLaw::TwoPoint: return fam_.key(index_).sigma;
    }
    return fam_.r_max;
  }

  bool closed_form() const override { return false; }
  long draws() const override { return draws_; }
  double half_dist_sq_se() const override { return 0.5 * std::sqrt(var_r2_ / draws_); }

  double dist_sq_tail_se(double tau) const override {
    const long k = std::upper_bound(r2_.begin(), r2_.end(), tau) - r2_.begin();
    const double mean = suffix_r2_[k] / draws_;
    const double mom2 = suffix_r4_[k] / draws_;
    return std::sqrt(std::max(0.0, mom2 - mean * mean) / draws_);
  }

 private:
  DistributionFamily fam_;
  long index_;
  long draws_;
  Mat second_, hess_;
  double frob_ = 0.0, mean_r2_ = 0.0, var_r2_ = 0.0;
  std::vector<double> r2_, suffix_r2_, suffix_r4_;
};

}  // namespace detail

// Shared-oracle view of a family: indices with identical laws reuse one
// oracle. Not thread-safe; build before fanning out replicate work.
class FamilyMoments {
 public:
  enum class Backend { ClosedForm, MonteCarlo };

  explicit FamilyMoments(const DistributionFamily& fam, Backend backend = Backend::ClosedForm,
                         long mc_draws = 20000, std::uint64_t mc_seed = 0x6d6f6d656e7473ull)
      : fam_(fam), backend_(backend), mc_draws_(mc_draws), mc_seed_(mc_seed) {}

  struct LawGroup {
    DistributionFamily::LawKey key;
    long count = 0;
    long first_index = 0;
    const TangentLawOracle* oracle = nullptr;
  };

  const DistributionFamily& family() const { return fam_; }
  Backend backend() const { return backend_; }
  long mc_draws() const { return mc_draws_; }
  std::uint64_t mc_seed() const { return mc_seed_; }

  const TangentLawOracle& oracle_at(long index) { return fetch(fam_.key(index), index); }

  std::vector<LawGroup> groups(long n) {
    std::vector<LawGroup> out;
    long first = 1;
    for (const auto& [key, count] : group_laws(fam_, n)) {
      LawGroup g;
      g.key = key;
      g.count = count;
      for (long i = first; i <= n; ++i)
        if (fam_.key(i) == key) {
          g.first_index = i;
          break;
        }
      g.oracle = &fetch(key, g.first_index);
      out.push_back(g);
    }
    return out;
  }

  // Aggregate energy at the center: phi_n = sum_i E[ 1/2 dist(X_i, center)^2 ].
  // phi_raw admits the degenerate zero value, for reports that must flag a
  // failed growth condition instead of throwing.
  double phi_raw(long n) {
    double p = 0.0;
    for (const auto& g : groups(n)) p += g.count * g.oracle->half_dist_sq();
    if (!std::isfinite(p))
      throw DegenerateModel("aggregate energy overflows double precision at this n");
    return p;
  }

  double phi(long n) {
    const double p = phi_raw(n);
    if (!(p > 0.0)) throw DegenerateModel("aggregate energy is zero (point mass at the center)");
    return p;
  }

  double phi_se(long n) {
    double v = 0.0;
    for (const auto& g : groups(n)) {
      const double se = g.oracle->half_dist_sq_se();
      v += (g.count * se) * (g.count * se);
    }
    return std::sqrt(v);
  }

 private:
  const TangentLawOracle& fetch(const DistributionFamily::LawKey& key, long index) {
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::unique_ptr<TangentLawOracle> oracle;
      if (backend_ == Backend::ClosedForm)
        oracle = std::make_unique<detail::ClosedFormOracle>(fam_, index);
      else
        oracle = std::make_unique<detail::MonteCarloOracle>(
            fam_, index, mc_draws_, derive_stream(mc_seed_, static_cast<std::uint64_t>(index), 0));
      it = cache_.emplace(key, std::move(oracle)).first;
    }
    return *it->second;
  }

  DistributionFamily fam_;
  Backend backend_;
  long mc_draws_;
  std::uint64_t mc_seed_;
  std::map<DistributionFamily::LawKey, std::unique_ptr<TangentLawOracle>> cache_;
};

}  // namespace frechet
