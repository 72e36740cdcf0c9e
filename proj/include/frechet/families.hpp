#pragma once

#include <tuple>
#include <vector>

#include "frechet/energy.hpp"
#include "frechet/manifold.hpp"
#include "frechet/rng.hpp"

namespace frechet {

// Tangent-space laws at a fixed center point. All shipped laws are symmetric
// about the origin of the tangent space, so the center is a local Fréchet
// mean of every index by construction.
enum class TangentLaw { TruncatedGaussian, UniformBall, TwoPoint };

// Per-index scale sigma_i; indices are 1-based throughout.
struct ScaleSchedule {
  enum class Kind { Constant, Alternating, Geometric };
  Kind kind = Kind::Constant;
  std::vector<double> values = {1.0};  // Constant: values[0]; Alternating: cycle
  double ratio = 2.0;                  // Geometric: values[0] * ratio^(i-1)

  double at(long i) const {
    switch (kind) {
      case Kind::Constant: return values[0];
      case Kind::Alternating: return values[(i - 1) % values.size()];
      case Kind::Geometric: return values[0] * std::pow(ratio, static_cast<double>(i - 1));
    }
    throw ConfigError("unknown scale schedule kind");
  }
};

// Per-index direction structure. AlternatingBlocks: consecutive blocks of
// lengths 1, base, base^2, ... each use a single coordinate axis, cycling
// through axis_cycle axes, so the axis mix oscillates forever and per-index
// covariances have no Cesaro limit while each index stays well behaved.
struct ShapeSchedule {
  enum class Kind { Isotropic, FixedAxis, AlternatingBlocks };
  Kind kind = Kind::Isotropic;
  int axis = 0;
  long block_base = 4;
  int axis_cycle = 2;

  bool isotropic() const { return kind == Kind::Isotropic; }

  int axis_at(long i) const {
    switch (kind) {
      case Kind::Isotropic:
        throw ConfigError("isotropic shape has no per-index axis");
      case Kind::FixedAxis:
        return axis;
      case Kind::AlternatingBlocks: {
        long cum = 0, len = 1;
        for (long j = 0; j < 64; ++j) {
          if (i <= cum + len) return static_cast<int>(j % axis_cycle);
          cum += len;
          len *= block_base;
        }
        throw ConfigError("alternating block index out of range");
      }
    }
    throw ConfigError("unknown shape schedule kind");
  }
};

struct DistributionFamily {
  Manifold manifold;
  Vec center;
  Mat frame;  // orthonormal frame at center; all tangent draws are frame coords
  TangentLaw law = TangentLaw::TruncatedGaussian;
  ScaleSchedule scale;
  ShapeSchedule shape;
  double r_max = 1.0;  // all draws satisfy dist(X_i, center) <= r_max
  bool symmetrize = false;

  // Identity of the index-i law; indices sharing a key are identically
  // distributed, which the estimators exploit to share oracles.
  struct LawKey {
    double sigma;
    int axis;  // -1 for isotropic

    bool operator==(const LawKey& o) const { return sigma == o.sigma && axis == o.axis; }
    bool operator<(const LawKey& o) const {
      return std::tie(sigma, axis) < std::tie(o.sigma, o.axis);
    }
  };

  LawKey key(long i) const {
    const double sigma = scale.at(i);
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
      throw DegenerateModel("scale schedule left its valid range");
    if (law != TangentLaw::TwoPoint && shape.isotropic()) return {sigma, -1};
    const int ax = shape.isotropic() ? 0 : shape.axis_at(i);
    return {sigma, ax};
  }

  // Tangent draw in frame coordinates; rejection keeps ||v||_g <= r_max.
  Vec draw_tangent_coords(long i, Rng& rng) const {
    const LawKey k = key(i);
    const int d = manifold.dim;
    Vec c = Vec::Zero(d);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      switch (law) {
        case TangentLaw::TruncatedGaussian:
          if (k.axis < 0) {
            c = k.sigma * rng.normal_vec(d);
          } else {
            c.setZero();
            c[k.axis] = k.sigma * rng.normal();
          }
          break;
        case TangentLaw::UniformBall:
          if (k.axis < 0) {
            Vec dir = rng.normal_vec(d);
            const double nd = dir.norm();
            if (nd < 1e-12) continue;
            c = (k.sigma * std::pow(rng.uniform(), 1.0 / d) / nd) * dir;
          } else {
            c.setZero();
            c[k.axis] = k.sigma * (2.0 * rng.uniform() - 1.0);
          }
          break;
        case TangentLaw::TwoPoint:
          if (k.sigma > r_max)
            throw DegenerateModel("two-point scale exceeds the support radius r_max");
          c.setZero();
          c[k.axis] = k.sigma * rng.sign();
          break;
      }
      if (c.norm() <= r_max) {
        if (symmetrize) c *= rng.sign();
        return c;
      }
    }
    throw DegenerateModel("tangent law rejection acceptance rate is too low");
  }

  Vec draw_point(long i, Rng& rng) const {
    return exp_map(manifold, center, tangent_from_coords(frame, draw_tangent_coords(i, rng)));
  }
};

inline DistributionFamily make_family(const Manifold& m, const Vec& center, TangentLaw law,
                                      const ScaleSchedule& scale, const ShapeSchedule& shape,
                                      double r_max, bool symmetrize = false) {
  check_point(m, center);
  if (!(r_max > 0.0)) throw ConfigError("r_max must be positive");
  if (r_max >= 0.5 * injectivity_radius(m))
    throw ConfigError("r_max must be below half the injectivity radius");
  for (double v : scale.values)
    if (!(v >= 0.0)) throw ConfigError("scale values must be nonnegative");
  if (scale.values.empty()) throw ConfigError("scale schedule needs at least one value");
  if (scale.kind == ScaleSchedule::Kind::Geometric && !(scale.ratio > 0.0))
    throw ConfigError("geometric scale ratio must be positive");
  if (!shape.isotropic()) {
    const int top = shape.kind == ShapeSchedule::Kind::FixedAxis ? shape.axis
                                                                 : shape.axis_cycle - 1;
    if (top >= m.dim || shape.axis < 0 || shape.axis_cycle < 1)
      throw ConfigError("shape axis exceeds the manifold dimension");
    if (shape.kind == ShapeSchedule::Kind::AlternatingBlocks && shape.block_base < 2)
      throw ConfigError("alternating block base must be at least 2");
  }
  if (law == TangentLaw::TwoPoint && shape.isotropic() && m.dim != 1)
    throw ConfigError("two-point law needs an axis shape in dimension > 1");
  DistributionFamily f{m, center, orthonormal_frame(m, center), law, scale, shape,
                       r_max, symmetrize};
  return f;
}

// Draws X_1..X_n; X_i depends only on (root, replicate, i) so any evaluation
// order and thread count reproduce the same sample.
inline Sample draw_sample(const DistributionFamily& fam, long n, std::uint64_t root,
                          std::uint64_t replicate = 0) {
  if (n < 1) throw ConfigError("sample size must be at least 1");
  Sample s{fam.manifold, {}};
  s.points.reserve(n);
  for (long i = 1; i <= n; ++i) {
    Rng rng(derive_stream(root, replicate, static_cast<std::uint64_t>(i)));
    s.points.push_back(fam.draw_point(i, rng));
  }
  return s;
}

// Distinct laws among indices 1..n with multiplicities, in first-seen order.
inline std::vector<std::pair<DistributionFamily::LawKey, long>> group_laws(
    const DistributionFamily& fam, long n) {
  std::vector<std::pair<DistributionFamily::LawKey, long>> out;
  for (long i = 1; i <= n; ++i) {
    const auto k = fam.key(i);
    bool found = false;
    for (auto& [key, count] : out)
      if (key == k) {
        ++count;
        found = true;
        break;
      }
    if (!found) out.emplace_back(k, 1);
  }
  return out;
}

}  // namespace frechet
