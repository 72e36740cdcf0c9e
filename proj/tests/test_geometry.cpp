#include <catch2/catch_amalgamated.hpp>

#include <frechet/manifold.hpp>
#include <frechet/rng.hpp>

#include <cmath>
#include <vector>

using namespace frechet;

namespace {

Vec base_point(const Manifold& m) {
  Vec c = Vec::Zero(ambient_size(m));
  switch (m.family) {
    case Family::Euclidean: break;
    case Family::Sphere: c[c.size() - 1] = 1.0; break;
    case Family::Hyperbolic: c[0] = 1.0 / std::sqrt(-m.kappa); break;
    case Family::ComplexProjective: c[0] = 1.0; break;
  }
  return c;
}

// Tangent with metric length uniform in (lo, hi); direction isotropic in the
// g-orthonormal frame, so the length equals the geodesic distance after exp.
Vec random_tangent(const Manifold& m, const Vec& x, Rng& rng, double lo, double hi) {
  const Mat frame = orthonormal_frame(m, x);
  Vec c = rng.normal_vec(m.dim);
  if (c.norm() < 1e-12) c.setOnes();
  c *= (lo + (hi - lo) * rng.uniform()) / c.norm();
  return tangent_from_coords(frame, c);
}

Vec random_point(const Manifold& m, Rng& rng, double spread) {
  const Vec b = base_point(m);
  return exp_map(m, b, random_tangent(m, b, rng, 0.0, spread));
}

// Largest geodesic radius the pair tests may use: safely inside the
// injectivity radius on compact models, a fixed window elsewhere.
double safe_radius(const Manifold& m, double frac) {
  const double inj = injectivity_radius(m);
  return frac * (std::isfinite(inj) ? inj : 4.0);
}

const std::vector<Manifold> kModels = {
    Manifold::euclidean(1),          Manifold::euclidean(3),
    Manifold::sphere(2, 1.0),        Manifold::sphere(3, 2.5),
    Manifold::hyperbolic(2, -1.0),   Manifold::hyperbolic(3, -0.7),
    Manifold::complex_projective(1, 4.0), Manifold::complex_projective(2, 1.0),
};

}  // namespace

TEST_CASE("exp/log round trips on random pairs") {
  Rng rng(0x51a7e57ull);
  for (const Manifold& m : kModels) {
    INFO("family " << static_cast<int>(m.family) << " dim " << m.dim << " kappa " << m.kappa);
    const double hi = safe_radius(m, 0.90);
    double worst_log = 0.0, worst_dist = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Vec x = random_point(m, rng, safe_radius(m, 0.40));
      const Vec v = random_tangent(m, x, rng, 1e-3, hi);
      const Vec y = exp_map(m, x, v);
      REQUIRE_NOTHROW(check_point(m, y));
      const Vec back = log_map(m, x, y);
      worst_log = std::max(worst_log, metric_norm(m, back - v));
      worst_dist = std::max(worst_dist, std::abs(dist(m, x, y) - metric_norm(m, v)));
    }
    CHECK(worst_log <= 1e-9);
    CHECK(worst_dist <= 1e-9);
  }
}

TEST_CASE("distance axioms on random triples") {
  Rng rng(0xd157ull);
  for (const Manifold& m : kModels) {
    INFO("family " << static_cast<int>(m.family) << " dim " << m.dim << " kappa " << m.kappa);
    for (int t = 0; t < 200; ++t) {
      const Vec a = random_point(m, rng, safe_radius(m, 0.45));
      const Vec b = random_point(m, rng, safe_radius(m, 0.45));
      const Vec c = random_point(m, rng, safe_radius(m, 0.45));
      CHECK(dist(m, a, a) <= 1e-12);
      CHECK(std::abs(dist(m, a, b) - dist(m, b, a)) <= 1e-12);
      CHECK(dist(m, a, c) <= dist(m, a, b) + dist(m, b, c) + 1e-12);
    }
  }
}

TEST_CASE("parallel transport is a linear isometry") {
  Rng rng(0x7247ull);
  for (const Manifold& m : kModels) {
    INFO("family " << static_cast<int>(m.family) << " dim " << m.dim << " kappa " << m.kappa);
    double worst_norm = 0.0, worst_pair = 0.0, worst_id = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Vec x = random_point(m, rng, safe_radius(m, 0.40));
      const Vec y = random_point(m, rng, safe_radius(m, 0.40));
      if (dist(m, x, y) > 0.95 * injectivity_radius(m)) continue;
      const Vec u = random_tangent(m, x, rng, 0.1, 2.0);
      const Vec v = random_tangent(m, x, rng, 0.1, 2.0);
      const Vec pu = transport(m, x, y, u);
      const Vec pv = transport(m, x, y, v);
      REQUIRE_NOTHROW(check_tangent(m, y, pu));
      worst_norm = std::max(worst_norm, std::abs(metric_norm(m, pu) - metric_norm(m, u)));
      worst_pair = std::max(worst_pair, std::abs(metric_dot(m, pu, pv) - metric_dot(m, u, v)));
      worst_id = std::max(worst_id, metric_norm(m, transport(m, x, x, u) - u));
    }
    CHECK(worst_norm <= 1e-10);
    CHECK(worst_pair <= 1e-10);
    CHECK(worst_id <= 1e-12);
  }
}

TEST_CASE("transport matrix is orthogonal and reproduces transport") {
  Rng rng(0x9a12ull);
  for (const Manifold& m : kModels) {
    INFO("family " << static_cast<int>(m.family) << " dim " << m.dim << " kappa " << m.kappa);
    for (int t = 0; t < 50; ++t) {
      const Vec x = random_point(m, rng, safe_radius(m, 0.40));
      const Vec y = random_point(m, rng, safe_radius(m, 0.40));
      if (dist(m, x, y) > 0.95 * injectivity_radius(m)) continue;
      const Mat fx = orthonormal_frame(m, x);
      const Mat fy = orthonormal_frame(m, y);
      const Mat tm = transport_matrix(m, x, y, fx, fy);
      CHECK((tm.transpose() * tm - Mat::Identity(m.dim, m.dim)).cwiseAbs().maxCoeff() <= 1e-10);
      const Vec v = random_tangent(m, x, rng, 0.1, 1.0);
      const Vec lhs = tm * tangent_coords(m, fx, v);
      const Vec rhs = tangent_coords(m, fy, transport(m, x, y, v));
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
    }
    // Source equal to base: the matrix collapses to the identity.
    const Vec x = random_point(m, rng, safe_radius(m, 0.30));
    const Mat fx = orthonormal_frame(m, x);
    CHECK((transport_matrix(m, x, x, fx, fx) - Mat::Identity(m.dim, m.dim))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("orthonormal frames and coordinate round trips") {
  Rng rng(0xf4a3eull);
  for (const Manifold& m : kModels) {
    INFO("family " << static_cast<int>(m.family) << " dim " << m.dim << " kappa " << m.kappa);
    for (int t = 0; t < 100; ++t) {
      const Vec x = random_point(m, rng, safe_radius(m, 0.45));
      const Mat f = orthonormal_frame(m, x);
      REQUIRE(f.cols() == m.dim);
      Mat gram(m.dim, m.dim);
      for (int r = 0; r < m.dim; ++r) {
        REQUIRE_NOTHROW(check_tangent(m, x, f.col(r)));
        for (int s = 0; s < m.dim; ++s) gram(r, s) = metric_dot(m, f.col(r), f.col(s));
      }
      CHECK((gram - Mat::Identity(m.dim, m.dim)).cwiseAbs().maxCoeff() <= 1e-12);

      const Vec coords = rng.normal_vec(m.dim);
      CHECK((tangent_coords(m, f, tangent_from_coords(f, coords)) - coords)
                .cwiseAbs()
                .maxCoeff() <= 1e-12);
      const Vec v = random_tangent(m, x, rng, 0.1, 1.0);
      CHECK(metric_norm(m, tangent_from_coords(f, tangent_coords(m, f, v)) - v) <= 1e-12);
      // Determinism: the frame is a pure function of the point.
      CHECK((orthonormal_frame(m, x) - f).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("closed-form Hessian matches finite differences") {
  Rng rng(0xbe55ull);
  for (const Manifold& m : kModels) {
    INFO("family " << static_cast<int>(m.family) << " dim " << m.dim << " kappa " << m.kappa);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const Vec x = random_point(m, rng, safe_radius(m, 0.30));
      const Vec v = random_tangent(m, x, rng, 0.05, safe_radius(m, 0.60));
      const Vec src = exp_map(m, x, v);
      const Mat frame = orthonormal_frame(m, x);
      const Mat cf = hessian_operator(m, x, src, frame);
      const Mat fd = finite_difference_hessian(m, x, src, frame, 1e-4);
      worst = std::max(worst, (cf - fd).cwiseAbs().maxCoeff());
      CHECK((cf - cf.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("Hessian eigenstructure at a point and at the source") {
  Rng rng(0xcafe5ull);
  for (const Manifold& m : kModels) {
    const Vec x = random_point(m, rng, safe_radius(m, 0.30));
    const Mat frame = orthonormal_frame(m, x);
    // Coincident source: the quadratic is exactly 1/2 |v|^2 in normal coords.
    CHECK((hessian_operator(m, x, x, frame) - Mat::Identity(m.dim, m.dim))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    // Radial direction always carries eigenvalue one.
    const Vec v = random_tangent(m, x, rng, 0.3, safe_radius(m, 0.50));
    const Vec src = exp_map(m, x, v);
    const Mat h = hessian_operator(m, x, src, frame);
    Vec l = tangent_coords(m, frame, log_map(m, x, src));
    l /= l.norm();
    CHECK((h * l - l).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("complex projective line with curvature four matches the round sphere") {
  const Manifold cp = Manifold::complex_projective(1, 4.0);
  const Manifold s2 = Manifold::sphere(2, 4.0);
  auto hopf = [](const Vec& p) {
    const CVec z = detail::to_complex(p);
    const std::complex<double> cross = z[0] * std::conj(z[1]);
    Vec n(3);
    n[0] = 2.0 * cross.real();
    n[1] = 2.0 * cross.imag();
    n[2] = std::norm(z[0]) - std::norm(z[1]);
    return n;
  };
  Rng rng(0x40f5ull);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const Vec p = random_point(cp, rng, safe_radius(cp, 0.49));
    const Vec q = random_point(cp, rng, safe_radius(cp, 0.49));
    const Vec np = hopf(p), nq = hopf(q);
    REQUIRE(std::abs(np.norm() - 1.0) <= 1e-12);
    REQUIRE_NOTHROW(check_point(s2, np));
    worst = std::max(worst, std::abs(dist(cp, p, q) - dist(s2, np, nq)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("complex structure squares to minus one and is isometric") {
  const Manifold m = Manifold::complex_projective(2, 4.0);
  Rng rng(0x1e57ull);
  for (int t = 0; t < 100; ++t) {
    const Vec x = random_point(m, rng, safe_radius(m, 0.40));
    const Vec v = random_tangent(m, x, rng, 0.1, 1.0);
    const Vec jv = complex_structure(m, x, v);
    REQUIRE_NOTHROW(check_tangent(m, x, jv));
    CHECK(std::abs(metric_norm(m, jv) - metric_norm(m, v)) <= 1e-12);
    CHECK(std::abs(metric_dot(m, jv, v)) <= 1e-12);
    CHECK(metric_norm(m, complex_structure(m, x, jv) + v) <= 1e-12);
  }
  CHECK_THROWS_AS(complex_structure(Manifold::sphere(2, 1.0), Vec::Unit(3, 2), Vec::Unit(3, 0)),
                  UnsupportedManifold);
}

TEST_CASE("radial curvature factor: pinned values, limits, poles") {
  CHECK(f_kappa(0.0, 2.7) == 1.0);
  CHECK(f_kappa(1.0, 0.0) == 1.0);
  CHECK(std::abs(f_kappa(1.0, M_PI / 2.0)) <= 1e-15);
  CHECK(f_kappa(-1.0, 1.0) == Catch::Approx(1.3130352854993312).epsilon(1e-14));
  CHECK(f_kappa(1.0, M_PI / 3.0) == Catch::Approx(0.6045997880780728).epsilon(1e-14));
  // Small-distance expansion f = 1 - kappa s^2 / 3 + O(s^4).
  for (double kappa : {4.0, 1.0, -1.0, -0.25}) {
    const double s = 1e-3;
    CHECK(std::abs(f_kappa(kappa, s) - (1.0 - kappa * s * s / 3.0)) <= 1e-11);
    CHECK(std::abs(one_minus_f_over_s2(kappa, 1e-8) - kappa / 3.0) <= 1e-6);
    CHECK(std::abs(one_minus_f_over_s2(kappa, 0.5) -
                   (1.0 - f_kappa(kappa, 0.5)) / 0.25) <= 1e-12);
  }
  CHECK_THROWS_AS(f_kappa(1.0, M_PI), DomainError);
  CHECK_THROWS_AS(f_kappa(1.0, -0.1), DomainError);
}

TEST_CASE("pinned sphere geodesics") {
  const Manifold m = Manifold::sphere(2, 1.0);
  const Vec e1 = Vec::Unit(3, 0), e3 = Vec::Unit(3, 2);
  // Quarter great circle from the north pole lands on the equator.
  CHECK((exp_map(m, e3, (M_PI / 2.0) * e1) - e1).cwiseAbs().maxCoeff() <= 1e-12);
  // The geodesic velocity transports to the velocity at the endpoint.
  CHECK((transport(m, e3, e1, e1) - (-e3)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(dist(m, e3, e1) == Catch::Approx(M_PI / 2.0).epsilon(1e-14));
}

TEST_CASE("cut locus guard") {
  const Manifold s = Manifold::sphere(2, 1.0);
  const Vec e3 = Vec::Unit(3, 2);
  const Vec anti = -e3;
  CHECK(dist(s, e3, anti) == Catch::Approx(M_PI).epsilon(1e-14));
  CHECK_THROWS_AS(log_map(s, e3, anti), CutLocusError);
  CHECK_THROWS_AS(transport(s, e3, anti, Vec::Unit(3, 0)), CutLocusError);

  const Manifold cp = Manifold::complex_projective(1, 4.0);
  Vec p = Vec::Zero(4), q = Vec::Zero(4);
  p[0] = 1.0;  // [1 : 0]
  q[1] = 1.0;  // [0 : 1], orthogonal line = cut locus of p
  CHECK(dist(cp, p, q) == Catch::Approx(injectivity_radius(cp)).epsilon(1e-14));
  CHECK_THROWS_AS(log_map(cp, p, q), CutLocusError);
}

TEST_CASE("phase canonicalization of projective representatives") {
  const Manifold m = Manifold::complex_projective(2, 4.0);
  Rng rng(0xfa5eull);
  for (int t = 0; t < 50; ++t) {
    const Vec p = random_point(m, rng, safe_radius(m, 0.45));
    const double theta = 2.0 * M_PI * rng.uniform() - M_PI;
    CVec z = detail::to_complex(p);
    z *= std::polar(1.0, theta);
    const auto [canon, phase] = canonicalize(m, detail::from_complex(z));
    CHECK((canon - p).cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE_NOTHROW(check_point(m, canon));
    // Undoing the reported unit phase recovers the rotated representative.
    CHECK(std::abs(std::abs(phase) - 1.0) <= 1e-14);
    CVec back = detail::to_complex(canon);
    back *= std::conj(phase);
    CHECK((detail::from_complex(back) - detail::from_complex(z)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("metric scaling conventions") {
  const Manifold s = Manifold::sphere(2, 4.0);
  const Vec e3 = Vec::Unit(3, 2);
  const Vec u = Vec::Unit(3, 0), w = Vec::Unit(3, 1);
  CHECK(metric_dot(s, u, u) == Catch::Approx(0.25).epsilon(1e-15));
  CHECK(metric_dot(s, u, w) == 0.0);
  CHECK(injectivity_radius(s) == Catch::Approx(M_PI / 2.0).epsilon(1e-15));
  // Unit-speed geodesic: metric-unit tangent covers distance one.
  const Vec v = 2.0 * u;  // metric norm 1
  CHECK(metric_norm(s, v) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(dist(s, e3, exp_map(s, e3, v)) == Catch::Approx(1.0).epsilon(1e-12));

  const Manifold h = Manifold::hyperbolic(2, -4.0);
  Vec x0 = Vec::Zero(3);
  x0[0] = 0.5;  // Minkowski norm -1/4
  REQUIRE_NOTHROW(check_point(h, x0));
  const Vec t = Vec::Unit(3, 1);
  CHECK(metric_norm(h, t) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(dist(h, x0, exp_map(h, x0, t)) == Catch::Approx(1.0).epsilon(1e-12));

  const Manifold e = Manifold::euclidean(2);
  CHECK(metric_dot(e, Vec::Unit(2, 0), Vec::Unit(2, 0)) == 1.0);
}

TEST_CASE("constructor and validation errors") {
  CHECK_THROWS_AS(Manifold::euclidean(0), UnsupportedManifold);
  CHECK_THROWS_AS(Manifold::sphere(2, -1.0), UnsupportedManifold);
  CHECK_THROWS_AS(Manifold::sphere(0, 1.0), UnsupportedManifold);
  CHECK_THROWS_AS(Manifold::hyperbolic(2, 1.0), UnsupportedManifold);
  CHECK_THROWS_AS(Manifold::complex_projective(0, 4.0), UnsupportedManifold);
  CHECK_THROWS_AS(Manifold::complex_projective(1, -4.0), UnsupportedManifold);

  const Manifold s = Manifold::sphere(2, 1.0);
  CHECK_THROWS_AS(check_point(s, Vec::Zero(4)), SizeMismatch);
  CHECK_THROWS_AS(check_point(s, 0.9 * Vec::Unit(3, 2)), InvalidPoint);
  Vec bad = Vec::Unit(3, 2);
  bad[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(check_point(s, bad), InvalidPoint);
  CHECK_THROWS_AS(check_tangent(s, Vec::Unit(3, 2), Vec::Unit(3, 2)), InvalidTangent);

  const Manifold h = Manifold::hyperbolic(2, -1.0);
  Vec sheet = Vec::Zero(3);
  sheet[0] = -1.0;
  CHECK_THROWS_AS(check_point(h, sheet), InvalidPoint);

  const Manifold cp = Manifold::complex_projective(1, 4.0);
  Vec rep = Vec::Zero(4);
  rep[0] = -1.0;  // unit but pivot phase is pi, not canonical
  CHECK_THROWS_AS(check_point(cp, rep), InvalidPoint);
  Vec tan = Vec::Zero(4);
  tan[2] = 1.0;  // i * x is vertical, never horizontal
  Vec at = Vec::Zero(4);
  at[0] = 1.0;
  CHECK_THROWS_AS(check_tangent(cp, at, tan), InvalidTangent);
}
