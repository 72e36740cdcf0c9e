#pragma once

#include <vector>

#include "frechet/manifold.hpp"

namespace frechet {

struct Sample {
  Manifold manifold;
  std::vector<Vec> points;

  int size() const { return static_cast<int>(points.size()); }
};

inline void check_sample(const Sample& s) {
  if (s.points.empty()) throw DegenerateModel("sample is empty");
  for (const Vec& p : s.points) check_point(s.manifold, p);
}

// Empirical energy F(x) = sum_i 1/2 dist(X_i, x)^2 and its gradient
// -sum_i log_x(X_i). Points at or near the cut locus of x still contribute to
// the value (dist is defined there) but are omitted from the gradient and
// counted; gradient_complete reports whether any were skipped.
struct EnergySummary {
  double value = 0.0;
  Vec gradient;          // ambient representative at x
  double gradient_norm = 0.0;
  int cut_locus_count = 0;
  bool gradient_complete = true;
};

inline EnergySummary empirical_energy(const Sample& s, const Vec& x) {
  check_sample(s);
  check_point(s.manifold, x);
  EnergySummary out;
  out.gradient = Vec::Zero(ambient_size(s.manifold));
  Vec pull = Vec::Zero(ambient_size(s.manifold));
  for (const Vec& p : s.points) {
    const double r = dist(s.manifold, x, p);
    out.value += 0.5 * r * r;
    try {
      pull += log_map(s.manifold, x, p);
    } catch (const CutLocusError&) {
      ++out.cut_locus_count;
    }
  }
  out.gradient = -pull;
  out.gradient_norm = metric_norm(s.manifold, pull);
  out.gradient_complete = (out.cut_locus_count == 0);
  return out;
}

}  // namespace frechet
