#include "rpnflat/projective_atlas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "rpnflat/rng.hpp"

namespace rpnflat {

ChartId::ChartId(int index) : index_(index) {
  if (index < 1) throw SpecError("chart indices are 1-based; got " + std::to_string(index));
}

void ChartId::require_valid(std::size_t dim) const {
  if (static_cast<std::size_t>(index_) > dim + 1) {
    throw SpecError("chart " + std::to_string(index_) + " does not exist in RP^" +
                    std::to_string(dim));
  }
}

ProjectivePoint::ProjectivePoint(std::vector<double> homogeneous) : coords_(std::move(homogeneous)) {
  if (coords_.empty()) throw DomainError("projective point needs at least one coordinate");
  double scale = 0.0;
  for (double v : coords_) {
    if (!std::isfinite(v)) throw DomainError("non-finite homogeneous coordinate");
    scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) throw DomainError("homogeneous coordinates are all zero");
  const auto first = std::find_if(coords_.begin(), coords_.end(), [](double v) { return v != 0.0; });
  if (*first < 0.0) scale = -scale;
  for (double& v : coords_) v /= scale;
}

bool approx_equal(const ProjectivePoint& a, const ProjectivePoint& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t k = 0; k < a.coords().size(); ++k) {
    if (std::abs(a.coords()[k] - b.coords()[k]) > tol) return false;
  }
  return true;
}

AffinePoint::AffinePoint(ChartId chart, std::vector<double> coords)
    : chart_(chart), coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("affine point must have dimension >= 1");
  for (double v : coords_) {
    if (!std::isfinite(v)) throw DomainError("non-finite affine coordinate");
  }
  chart_.require_valid(coords_.size());
}

AffinePoint chart_map(ChartId i, const ProjectivePoint& p) {
  return AffinePoint(i, dehomogenize<double>(i, p.coords()));
}

ProjectivePoint chart_inverse(const AffinePoint& a) {
  return ProjectivePoint(homogenize<double>(a.chart(), a.coords()));
}

AffinePoint transition(ChartId target, const AffinePoint& a) {
  return AffinePoint(target, transition_coords<double>(target, a.chart(), a.coords()));
}

ChartClassification classify(const ProjectivePoint& p, ChartId i) {
  i.require_valid(p.dim());
  if (p.dim() == 0) throw DomainError("RP^0 has no affine charts to classify against");
  if (p.coords()[i.slot()] != 0.0) return chart_map(i, p);
  std::vector<double> rest;
  rest.reserve(p.dim());
  for (std::size_t k = 0; k < p.coords().size(); ++k) {
    if (k != i.slot()) rest.push_back(p.coords()[k]);
  }
  return ProjectivePoint(std::move(rest));
}

std::size_t boundary_axis(ChartId i, ChartId j) {
  if (i == j) throw SpecError("a chart has no hyperplane at infinity within itself");
  return i.slot() < j.slot() ? i.slot() : i.slot() - 1;
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw DomainError("sphere point needs at least two coordinates");
  double norm2 = 0.0;
  for (double v : coords_) {
    if (!std::isfinite(v)) throw DomainError("non-finite sphere coordinate");
    norm2 += v * v;
  }
  if (std::abs(norm2 - 1.0) > 1e-12) throw DomainError("sphere point is not of unit norm");
}

std::vector<double> stereo(const SpherePoint& p) {
  const double y = p.height();
  // 1 - y, computed as |x|^2 / (1 + y) in the upper hemisphere to avoid
  // cancellation near the pole.
  double gap = 1.0 - y;
  if (y > 0.0) {
    double rest = 0.0;
    for (std::size_t k = 1; k < p.coords().size(); ++k) rest += p.coords()[k] * p.coords()[k];
    gap = rest / (1.0 + y);
  }
  if (y == 1.0 || gap == 0.0) throw PoleError("stereographic projection of the north pole");
  std::vector<double> x;
  x.reserve(p.dim());
  for (std::size_t k = 1; k < p.coords().size(); ++k) x.push_back(p.coords()[k] / gap);
  return x;
}

SpherePoint stereo_inverse(std::span<const double> x) {
  if (x.empty()) throw DomainError("stereo_inverse needs a point of dimension >= 1");
  double d = 0.0;
  for (double v : x) d += v * v;
  if (!std::isfinite(d)) throw DomainError("stereo_inverse: |x|^2 is not finite");
  std::vector<double> p;
  p.reserve(x.size() + 1);
  p.push_back((d - 1.0) / (d + 1.0));
  for (double v : x) p.push_back(2.0 * v / (d + 1.0));
  return SpherePoint(std::move(p));
}

namespace {

double scaled_error(std::span<const double> got, std::span<const double> want) {
  double err = 0.0;
  for (std::size_t k = 0; k < want.size(); ++k) {
    err = std::max(err, std::abs(got[k] - want[k]) / std::max(1.0, std::abs(want[k])));
  }
  return err;
}

std::vector<double> sample_affine(Rng& rng, std::size_t n, double box, double margin) {
  std::vector<double> a(n);
  for (double& v : a) {
    const double mag = rng.uniform(margin, box);
    v = rng.uniform() < 0.5 ? -mag : mag;
  }
  return a;
}

std::vector<double> sample_sphere(Rng& rng, std::size_t n, double max_height) {
  for (;;) {
    std::vector<double> p(n + 1);
    double norm2 = 0.0;
    for (double& v : p) {
      v = rng.normal();
      norm2 += v * v;
    }
    const double norm = std::sqrt(norm2);
    for (double& v : p) v /= norm;
    if (p[0] < max_height) return p;
  }
}

AtlasCheck finish(std::string name, std::size_t dim, std::size_t cases, double max_error,
                  double tolerance) {
  return {std::move(name), dim, cases, max_error, tolerance, max_error < tolerance};
}

}  // namespace

std::vector<AtlasCheck> run_atlas_checks(const AtlasCheckConfig& config) {
  std::vector<AtlasCheck> checks;
  for (std::size_t n : config.dims) {
    Rng rng(derive_seed(config.seed, n));
    const int charts = static_cast<int>(n) + 1;

    double round_trip = 0.0;
    double cocycle = 0.0;
    double triple = 0.0;
    double scale = 0.0;
    std::size_t partition_failures = 0;
    std::size_t pair_cases = 0;
    std::size_t triple_cases = 0;
    for (std::size_t s = 0; s < config.samples; ++s) {
      const auto raw = sample_affine(rng, n, config.box, config.margin);
      for (int j = 1; j <= charts; ++j) {
        const AffinePoint a(ChartId(j), raw);
        const auto back = chart_map(ChartId(j), chart_inverse(a));
        round_trip = std::max(round_trip, scaled_error(back.coords(), a.coords()));
        for (int i = 1; i <= charts; ++i) {
          if (i == j) continue;
          const auto b = transition(ChartId(i), a);
          cocycle = std::max(cocycle, scaled_error(transition(ChartId(j), b).coords(), a.coords()));
          ++pair_cases;
          // One third chart per pair keeps the triple check linear in samples.
          const int k = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(charts));
          if (k == i || k == j) continue;
          const auto direct = transition(ChartId(k), a);
          const auto via = transition(ChartId(k), b);
          triple = std::max(triple, scaled_error(via.coords(), direct.coords()));
          ++triple_cases;
        }
      }

      auto homogeneous = homogenize<double>(ChartId(1), raw);
      const ProjectivePoint p(homogeneous);
      for (double lambda : {-2.0, 0.5, 1e6}) {
        std::vector<double> scaled(homogeneous);
        for (double& v : scaled) v *= lambda;
        const ProjectivePoint q(scaled);
        for (int i = 1; i <= charts; ++i) {
          scale = std::max(scale, scaled_error(chart_map(ChartId(i), q).coords(),
                                               chart_map(ChartId(i), p).coords()));
        }
      }

      // Zero out a random subset of slots so both classify branches occur.
      for (double& v : homogeneous) {
        if (rng.uniform() < 0.3) v = 0.0;
      }
      if (std::all_of(homogeneous.begin(), homogeneous.end(), [](double v) { return v == 0.0; })) {
        homogeneous[0] = 1.0;
      }
      const ProjectivePoint z(homogeneous);
      for (int i = 1; i <= charts; ++i) {
        const auto c = classify(z, ChartId(i));
        const bool in_chart = z.coords()[static_cast<std::size_t>(i - 1)] != 0.0;
        const bool ok = in_chart ? std::holds_alternative<AffinePoint>(c)
                                 : std::holds_alternative<ProjectivePoint>(c) &&
                                       std::get<ProjectivePoint>(c).dim() + 1 == n;
        if (!ok) ++partition_failures;
      }
    }
    checks.push_back(finish("chart_round_trip", n, config.samples * charts, round_trip, 1e-15));
    checks.push_back(finish("cocycle_pair", n, pair_cases, cocycle, 1e-12));
    checks.push_back(finish("cocycle_triple", n, triple_cases, triple, 1e-12));
    checks.push_back(finish("scale_invariance", n, config.samples * 3, scale, 1e-15));
    checks.push_back(finish("classify_partition", n, config.samples * charts,
                            static_cast<double>(partition_failures), 0.5));

    double sphere_first = 0.0;
    double sphere_second = 0.0;
    for (std::size_t s = 0; s < config.samples; ++s) {
      const SpherePoint p(sample_sphere(rng, n, 1.0 - 1e-6));
      const auto x = stereo(p);
      sphere_first = std::max(sphere_first, scaled_error(stereo_inverse(x).coords(), p.coords()));
      sphere_second = std::max(sphere_second, scaled_error(stereo(stereo_inverse(x)), x));
    }
    checks.push_back(finish("stereo_sphere_round_trip", n, config.samples, sphere_first, 1e-12));
    checks.push_back(finish("stereo_plane_round_trip", n, config.samples, sphere_second, 1e-12));
  }

  // Closed form of the (1, 2) transition in RP^3: (1/t1, t2/t1, t3/t1).
  Rng rng(derive_seed(config.seed, 0xC105Eull));
  double closed = 0.0;
  for (std::size_t s = 0; s < config.samples; ++s) {
    const auto t = sample_affine(rng, 3, config.box, config.margin);
    const auto got = transition(ChartId(1), AffinePoint(ChartId(2), t));
    const std::vector<double> want{1.0 / t[0], t[1] / t[0], t[2] / t[0]};
    closed = std::max(closed, scaled_error(got.coords(), want));
  }
  checks.push_back(finish("closed_form_1_2", 3, config.samples, closed, 1e-15));
  return checks;
}

}  // namespace rpnflat
