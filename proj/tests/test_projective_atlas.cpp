#include <cmath>
#include <vector>

#include "doctest.h"
#include "rpnflat/errors.hpp"
#include "rpnflat/projective_atlas.hpp"
#include "rpnflat/rng.hpp"

using namespace rpnflat;

namespace {

using Vec = std::vector<double>;

Vec vec(std::span<const double> s) { return {s.begin(), s.end()}; }

double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
  }
  return m;
}

// Coordinates in [-10, 10] with |a_k| >= 1e-2 (keeps every overlap open).
Vec random_affine(Rng& rng, std::size_t n) {
  Vec a(n);
  for (auto& v : a) {
    do v = rng.uniform(-10.0, 10.0);
    while (std::abs(v) < 1e-2);
  }
  return a;
}

Vec random_sphere(Rng& rng, std::size_t n) {
  for (;;) {
    Vec p(n + 1);
    double norm = 0.0;
    for (auto& v : p) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : p) v /= norm;
    if (p[0] < 1.0 - 1e-6) return p;
  }
}

}  // namespace

TEST_CASE("chart ids") {
  CHECK_THROWS_AS(ChartId(0), SpecError);
  CHECK_NOTHROW(ChartId(3).require_valid(2));
  CHECK_THROWS_AS(ChartId(4).require_valid(2), SpecError);
  CHECK(ChartId(3).slot() == 2);
}

TEST_CASE("projective points are canonical") {
  CHECK(ProjectivePoint({-2, -4}) == ProjectivePoint({1, 2}));
  CHECK(ProjectivePoint({2, 4, 6}) == ProjectivePoint({1, 2, 3}));
  CHECK(vec(ProjectivePoint({0, -3, 1.5}).coords()) == Vec{0, 1, -0.5});
  CHECK(approx_equal(ProjectivePoint({1, 2}), ProjectivePoint({1, 2 + 1e-13}), 1e-12));
  CHECK_THROWS_AS(ProjectivePoint({0, 0, 0}), DomainError);
  CHECK_THROWS_AS(ProjectivePoint({}), DomainError);
  CHECK_THROWS_AS(ProjectivePoint({NAN, 1}), DomainError);
  CHECK_THROWS_AS(AffinePoint(ChartId(1), {INFINITY}), DomainError);
}

TEST_CASE("chart_map examples") {
  CHECK(vec(chart_map(ChartId(1), ProjectivePoint({1, 2, 3})).coords()) == Vec{2, 3});
  CHECK(vec(chart_map(ChartId(1), ProjectivePoint({2, 4, 6})).coords()) == Vec{2, 3});
  CHECK_THROWS_AS(chart_map(ChartId(1), ProjectivePoint({0, 1, 5})), NotInChartError);
  CHECK(chart_map(ChartId(2), ProjectivePoint({1, 2, 3})).chart() == ChartId(2));
}

TEST_CASE("chart_map is scale invariant") {
  Rng rng(derive_seed(kDefaultSeed, 20));
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 5;
    Vec x = random_affine(rng, n + 1);
    const ProjectivePoint p(x);
    for (double lambda : {-2.0, 0.5}) {
      Vec y = x;
      for (auto& v : y) v *= lambda;
      for (int i = 1; i <= static_cast<int>(n) + 1; ++i) {
        CHECK(chart_map(ChartId(i), ProjectivePoint(y)) == chart_map(ChartId(i), p));
      }
    }
    // 1e6 is not a power of two, so the rescaled vector carries its own rounding.
    Vec y = x;
    for (auto& v : y) v *= 1e6;
    for (int i = 1; i <= static_cast<int>(n) + 1; ++i) {
      CHECK(max_rel_diff(chart_map(ChartId(i), ProjectivePoint(y)).coords(),
                         chart_map(ChartId(i), p).coords()) <= 1e-15);
    }
  }
}

TEST_CASE("chart_inverse examples and round trip") {
  CHECK(chart_inverse(AffinePoint(ChartId(2), {5, 7})) == ProjectivePoint({5, 1, 7}));
  CHECK(chart_inverse(AffinePoint(ChartId(1), {0, 0})) == ProjectivePoint({1, 0, 0}));

  Rng rng(derive_seed(kDefaultSeed, 21));
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const ChartId i(1 + trial % static_cast<int>(n + 1));
    const AffinePoint a(i, random_affine(rng, n));
    const AffinePoint back = chart_map(i, chart_inverse(a));
    CHECK(back.chart() == i);
    worst = std::max(worst, max_rel_diff(back.coords(), a.coords()));
  }
  CHECK(worst <= 1e-15);
}

TEST_CASE("transition examples") {
  const auto s = transition(ChartId(1), AffinePoint(ChartId(2), {2, 4, 6}));
  CHECK(s.chart() == ChartId(1));
  CHECK(vec(s.coords()) == Vec{0.5, 2, 3});
  CHECK(vec(transition(ChartId(1), AffinePoint(ChartId(2), {1, -3.5, 8})).coords()) == Vec{1, -3.5, 8});
  CHECK_THROWS_AS(transition(ChartId(1), AffinePoint(ChartId(2), {0, 1, 1})), NotInOverlapError);
  // Identity transition.
  CHECK(vec(transition(ChartId(3), AffinePoint(ChartId(3), {2, 5})).coords()) == Vec{2, 5});
}

TEST_CASE("transition matches the closed form 1/t1, t2/t1, t3/t1") {
  Rng rng(derive_seed(kDefaultSeed, 22));
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec t = random_affine(rng, 3);
    const Vec want{1.0 / t[0], t[1] / t[0], t[2] / t[0]};
    worst = std::max(worst, max_rel_diff(transition(ChartId(1), AffinePoint(ChartId(2), t)).coords(), want));
  }
  CHECK(worst <= 1e-15);
}

TEST_CASE("pairwise and triple cocycles") {
  Rng rng(derive_seed(kDefaultSeed, 23));
  for (std::size_t n : {2u, 3u, 5u}) {
    double pair_err = 0.0;
    double triple_err = 0.0;
    const int charts = static_cast<int>(n) + 1;
    for (int i = 1; i <= charts; ++i) {
      for (int j = 1; j <= charts; ++j) {
        for (int trial = 0; trial < 1000; ++trial) {
          const AffinePoint a(ChartId(j), random_affine(rng, n));
          const auto there = transition(ChartId(i), a);
          const auto back = transition(ChartId(j), there);
          pair_err = std::max(pair_err, max_rel_diff(back.coords(), a.coords()));
          const ChartId k(1 + trial % charts);
          const auto via = transition(k, there);
          const auto direct = transition(k, a);
          triple_err = std::max(triple_err, max_rel_diff(via.coords(), direct.coords()));
        }
      }
    }
    CAPTURE(n);
    CHECK(pair_err < 1e-12);
    CHECK(triple_err < 1e-12);
  }
}

TEST_CASE("transition on jets gives the closed-form Jacobian") {
  const Vec t{2.0, 3.0, 4.0};
  const auto seeds = seed_jets(t, 1);
  const auto s = transition_coords<Jet>(ChartId(1), ChartId(2), seeds);
  // s1 = 1/t1, s2 = t2/t1, s3 = t3/t1
  CHECK(s[0].partial(MultiIndex({1, 0, 0})) == -0.25);
  CHECK(s[1].partial(MultiIndex({1, 0, 0})) == -0.75);
  CHECK(s[1].partial(MultiIndex({0, 1, 0})) == 0.5);
  CHECK(s[2].partial(MultiIndex({1, 0, 0})) == -1.0);
  CHECK(s[2].partial(MultiIndex({0, 0, 1})) == 0.5);
  CHECK(s[0].partial(MultiIndex({0, 1, 0})) == 0.0);
}

TEST_CASE("boundary axis") {
  CHECK(boundary_axis(ChartId(1), ChartId(2)) == 0);
  CHECK(boundary_axis(ChartId(1), ChartId(4)) == 0);
  CHECK(boundary_axis(ChartId(3), ChartId(1)) == 1);
  CHECK(boundary_axis(ChartId(2), ChartId(3)) == 1);
  CHECK(boundary_axis(ChartId(4), ChartId(2)) == 2);
  // The chosen axis is exactly where transition leaves the overlap.
  Vec t{1.0, 2.0, 3.0};
  t[boundary_axis(ChartId(4), ChartId(2))] = 0.0;
  CHECK_THROWS_AS(transition(ChartId(4), AffinePoint(ChartId(2), t)), NotInOverlapError);
}

TEST_CASE("classify examples") {
  const auto inf = classify(ProjectivePoint({0, 1, 2}), ChartId(1));
  REQUIRE(std::holds_alternative<ProjectivePoint>(inf));
  CHECK(std::get<ProjectivePoint>(inf) == ProjectivePoint({1, 2}));
  CHECK(std::get<ProjectivePoint>(inf).dim() == 1);

  const auto fin = classify(ProjectivePoint({3, 1, 2}), ChartId(1));
  REQUIRE(std::holds_alternative<AffinePoint>(fin));
  CHECK(max_rel_diff(std::get<AffinePoint>(fin).coords(), Vec{1.0 / 3.0, 2.0 / 3.0}) < 1e-16);
}

TEST_CASE("classify partitions sampled points") {
  Rng rng(derive_seed(kDefaultSeed, 24));
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 5;
    Vec x(n + 1);
    for (auto& v : x) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(-5.0, 5.0);
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) x[0] = 1.0;
    const ProjectivePoint p(x);
    for (int i = 1; i <= static_cast<int>(n) + 1; ++i) {
      const auto r = classify(p, ChartId(i));
      const bool on_infinity = p.coords()[static_cast<std::size_t>(i - 1)] == 0.0;
      CHECK(std::holds_alternative<ProjectivePoint>(r) == on_infinity);
      if (on_infinity) {
        const auto& q = std::get<ProjectivePoint>(r);
        CHECK(q.dim() == n - 1);
        double mx = 0.0;
        for (double v : q.coords()) mx = std::max(mx, std::abs(v));
        CHECK(mx == 1.0);
      } else {
        CHECK(std::get<AffinePoint>(r) == chart_map(ChartId(i), p));
      }
    }
  }
}

TEST_CASE("stereographic examples") {
  CHECK(stereo(SpherePoint({-1, 0, 0})) == Vec{0, 0});
  const Vec origin{0, 0, 0};
  const auto south = stereo_inverse(origin);
  CHECK(vec(south.coords()) == Vec{-1, 0, 0, 0});
  CHECK_THROWS_AS(stereo(SpherePoint({1, 0})), PoleError);
  CHECK_THROWS_AS(SpherePoint({0.5, 0.5}), DomainError);
  // Equator maps to the unit sphere of R^n.
  CHECK(stereo(SpherePoint({0, 0, 1})) == Vec{0, 1});
}

TEST_CASE("stereographic round trips") {
  Rng rng(derive_seed(kDefaultSeed, 25));
  double sphere_err = 0.0;
  double plane_err = 0.0;
  double norm_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const Vec p = random_sphere(rng, n);
    const auto x = stereo(SpherePoint(p));
    const auto q = stereo_inverse(x);
    sphere_err = std::max(sphere_err, max_rel_diff(q.coords(), p));
    double norm = 0.0;
    for (double v : q.coords()) norm += v * v;
    norm_err = std::max(norm_err, std::abs(norm - 1.0));

    Vec y(n);
    for (auto& v : y) v = rng.uniform(-50.0, 50.0);
    plane_err = std::max(plane_err, max_rel_diff(stereo(stereo_inverse(y)), y));
  }
  CHECK(sphere_err < 1e-12);
  CHECK(plane_err < 1e-12);
  CHECK(norm_err < 1e-12);
}

TEST_CASE("atlas check suite passes") {
  const auto checks = run_atlas_checks({});
  CHECK(checks.size() >= 8);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CAPTURE(c.dim);
    CHECK(c.cases > 0);
    CHECK(c.passed);
    CHECK(c.max_error <= c.tolerance);
  }
}
