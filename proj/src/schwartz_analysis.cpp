#include "rpnflat/schwartz_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpnflat/derivative_transport.hpp"
#include "rpnflat/errors.hpp"
#include "rpnflat/parallel.hpp"

namespace rpnflat {

std::string_view to_string(PairVerdict v) {
  switch (v) {
    case PairVerdict::Bounded: return "Bounded";
    case PairVerdict::Diverging: return "Diverging";
    case PairVerdict::Inconclusive: break;
  }
  return "Inconclusive";
}

std::string_view to_string(SchwartzVerdict v) {
  switch (v) {
    case SchwartzVerdict::SchwartzConsistent: return "SchwartzConsistent";
    case SchwartzVerdict::NotSchwartz: return "NotSchwartz";
    case SchwartzVerdict::Inconclusive: break;
  }
  return "Inconclusive";
}

std::string_view to_string(FlatVerdict v) {
  switch (v) {
    case FlatVerdict::FlatConsistent: return "FlatConsistent";
    case FlatVerdict::Diverging: return "Diverging";
    case FlatVerdict::Inconclusive: break;
  }
  return "Inconclusive";
}

SamplingGrid SamplingGrid::cube(std::size_t dim, double lo, double hi, std::size_t points_per_axis) {
  SamplingGrid g;
  g.ranges.assign(dim, {lo, hi});
  g.points_per_axis = points_per_axis;
  return g;
}

void SamplingGrid::validate() const {
  if (ranges.empty()) throw SpecError("sampling grid has no axes");
  if (points_per_axis < 2) throw SpecError("sampling grid needs at least 2 points per axis");
  for (const auto& [lo, hi] : ranges) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi)) {
      throw SpecError("sampling grid range must be finite with lo <= hi");
    }
  }
  if (annulus && !(annulus->first >= 0.0 && annulus->first <= annulus->second)) {
    throw SpecError("annulus must satisfy 0 <= lo <= hi");
  }
}

std::vector<std::vector<double>> SamplingGrid::points() const {
  validate();
  const std::size_t n = dim();
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= points_per_axis;
  const double last = static_cast<double>(points_per_axis - 1);
  std::vector<std::vector<double>> out;
  std::vector<double> x(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto idx = static_cast<double>(rest % points_per_axis);
      rest /= points_per_axis;
      const auto [lo, hi] = ranges[k];
      x[k] = lo + (hi - lo) * (idx / last);
      norm2 += x[k] * x[k];
    }
    if (annulus) {
      const double r = std::sqrt(norm2);
      if (r < annulus->first || r > annulus->second) continue;
    }
    out.push_back(x);
  }
  return out;
}

namespace {

constexpr std::size_t kBlock = 2048;

struct GridSups {
  // Indexed [alpha * betas + beta]; -1 while no finite sample has been seen.
  std::vector<double> sups;
  std::size_t non_finite = 0;
};

GridSups grid_sups(const ScalarField& f, const std::vector<std::vector<double>>& points,
                   const std::vector<MultiIndex>& alphas, const std::vector<MultiIndex>& betas,
                   int order, std::size_t workers) {
  const std::size_t blocks = (points.size() + kBlock - 1) / kBlock;
  const std::size_t pairs = alphas.size() * betas.size();
  std::vector<GridSups> partial(blocks);
  const auto layout = JetLayout::get(f.dim(), order);
  std::vector<std::size_t> beta_slot;
  for (const auto& b : betas) beta_slot.push_back(layout->index_of(b));

  detail::parallel_for(blocks, workers, [&](std::size_t blk) {
    GridSups& acc = partial[blk];
    acc.sups.assign(pairs, -1.0);
    std::vector<double> mono(alphas.size());
    std::vector<double> deriv(betas.size());
    const std::size_t end = std::min(points.size(), (blk + 1) * kBlock);
    for (std::size_t k = blk * kBlock; k < end; ++k) {
      const auto& x = points[k];
      const Jet j = f.eval_jet(x, order);
      for (std::size_t a = 0; a < alphas.size(); ++a) mono[a] = alphas[a].monomial(x);
      for (std::size_t b = 0; b < betas.size(); ++b) {
        deriv[b] = layout->factorial(beta_slot[b]) * j.coeffs()[beta_slot[b]];
      }
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        for (std::size_t b = 0; b < betas.size(); ++b) {
          const double v = std::abs(mono[a] * deriv[b]);
          double& s = acc.sups[a * betas.size() + b];
          if (!std::isfinite(v)) {
            ++acc.non_finite;
          } else if (v > s) {
            s = v;
          }
        }
      }
    }
  });

  GridSups merged;
  merged.sups.assign(pairs, -1.0);
  for (const auto& p : partial) {
    merged.non_finite += p.non_finite;
    for (std::size_t k = 0; k < pairs; ++k) merged.sups[k] = std::max(merged.sups[k], p.sups[k]);
  }
  return merged;
}

}  // namespace

double estimate_seminorm(const ScalarField& f, const MultiIndex& alpha, const MultiIndex& beta,
                         const SamplingGrid& grid, std::size_t workers) {
  if (alpha.dim() != f.dim() || beta.dim() != f.dim() || grid.dim() != f.dim()) {
    throw SpecError("multi-index and grid dimensions must match the field");
  }
  const auto points = grid.points();
  const auto sups = grid_sups(f, points, {alpha}, {beta}, beta.order(), workers);
  return std::max(0.0, sups.sups[0]);
}

std::size_t default_points_per_axis(std::size_t dim) {
  if (dim == 1) return 4001;
  auto p = static_cast<std::size_t>(std::pow(2e5, 1.0 / static_cast<double>(dim)));
  p = std::clamp<std::size_t>(p, 5, 4001);
  return p % 2 == 1 ? p : p + 1;
}

PairVerdict decide_pair(std::span<const double> sups, std::span<const double> radii,
                        const Thresholds& th) {
  const std::size_t L = sups.size();
  if (L < 2 || radii.size() != L) return PairVerdict::Inconclusive;
  const double last = sups[L - 1];
  if (last > th.abs_floor) {
    const double earlier = *std::max_element(sups.begin(), sups.end() - 1);
    if (last > th.growth_factor * earlier) return PairVerdict::Diverging;
    if (L >= 3) {
      const double a = sups[L - 3];
      const double b = sups[L - 2];
      if (a > 0.0 && a < b && b < last) {
        const double slope = std::log(last / a) / std::log(radii[L - 1] / radii[L - 3]);
        if (slope >= th.growth_exponent) return PairVerdict::Diverging;
      }
    }
  }
  if (last <= th.decay_ceiling && last <= sups[L - 2]) return PairVerdict::Bounded;
  return PairVerdict::Inconclusive;
}

SeminormReport classify_schwartz(const ScalarField& f, const ClassifyConfig& config) {
  const auto& radii = config.radii;
  if (radii.size() < 3) throw SpecError("classification needs at least three radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k]) || (k && !(radii[k] > radii[k - 1]))) {
      throw SpecError("radii must be positive, finite and strictly increasing");
    }
  }
  if (config.max_alpha < 0 || config.max_beta < 0 || config.max_alpha > 6 || config.max_beta > 6) {
    throw SpecError("order budgets must lie in [0, 6]");
  }
  const std::size_t n = f.dim();
  const std::size_t ppa = config.points_per_axis ? config.points_per_axis : default_points_per_axis(n);
  const auto alphas = enumerate_multiindices(n, config.max_alpha);
  const auto betas = enumerate_multiindices(n, config.max_beta);

  SeminormReport report{f.name(), n, config, ppa, {}, 0, SchwartzVerdict::Inconclusive};
  report.rows.reserve(alphas.size() * betas.size());
  for (const auto& a : alphas) {
    for (const auto& b : betas) report.rows.push_back({a, b, {}, PairVerdict::Inconclusive});
  }

  double inner = 0.0;
  for (double outer : radii) {
    SamplingGrid grid = SamplingGrid::cube(n, -outer, outer, ppa);
    grid.annulus = {inner, outer};
    const auto sups = grid_sups(f, grid.points(), alphas, betas, config.max_beta, config.workers);
    report.non_finite += sups.non_finite;
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
      report.rows[k].sups.push_back(std::max(0.0, sups.sups[k]));
    }
    inner = outer;
  }

  bool all_bounded = true;
  bool any_diverging = false;
  for (auto& row : report.rows) {
    row.verdict = decide_pair(row.sups, radii, config.thresholds);
    all_bounded = all_bounded && row.verdict == PairVerdict::Bounded;
    any_diverging = any_diverging || row.verdict == PairVerdict::Diverging;
  }
  report.verdict = any_diverging  ? SchwartzVerdict::NotSchwartz
                   : all_bounded ? SchwartzVerdict::SchwartzConsistent
                                 : SchwartzVerdict::Inconclusive;
  return report;
}

void FlatnessSpec::validate(std::size_t dim) const {
  source.require_valid(dim);
  target.require_valid(dim);
  if (source == target) throw SpecError("flatness needs two distinct charts");
  if (base_point.size() != dim) throw SpecError("base point dimension does not match the field");
  for (double v : base_point) {
    if (!std::isfinite(v)) throw SpecError("base point must be finite");
  }
  if (base_point[boundary_axis(source, target)] != 0.0) {
    throw SpecError("base point is not on the hyperplane at infinity of chart " +
                    std::to_string(source.index()));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) throw SpecError("radius must be positive");
  if (max_weight < 0 || max_order < 0 || max_order > 6) {
    throw SpecError("weight must be >= 0 and derivative order in [0, 6]");
  }
  if (levels < 1 || levels > 60) throw SpecError("levels must lie in [1, 60]");
  if (samples_per_level < 0) throw SpecError("samples per level must be >= 0");
}

FlatVerdict decide_flatness(std::span<const std::optional<double>> level_sups,
                            const Thresholds& th) {
  std::optional<double> first;
  std::optional<double> last;
  double peak = 0.0;
  for (const auto& q : level_sups) {
    if (!q) continue;
    if (!first) first = q;
    last = q;
    peak = std::max(peak, *q);
  }
  if (!first) return FlatVerdict::Inconclusive;
  if (*last > th.abs_floor && *last > th.growth_factor * *first) return FlatVerdict::Diverging;
  if (peak <= th.growth_factor * std::max(*first, th.abs_floor)) return FlatVerdict::FlatConsistent;
  return FlatVerdict::Inconclusive;
}

FlatnessReport verify_flatness(const ScalarField& f, const FlatnessSpec& spec, std::size_t workers) {
  const std::size_t n = f.dim();
  spec.validate(n);
  const std::size_t axis = boundary_axis(spec.source, spec.target);
  const auto alphas = enumerate_multiindices(n, spec.max_order);
  const std::size_t rows = static_cast<std::size_t>(spec.max_weight + 1) * alphas.size();

  struct LevelResult {
    std::vector<double> sups;
    std::vector<std::size_t> non_finite;
    std::size_t samples = 0;
  };
  std::vector<LevelResult> results(static_cast<std::size_t>(spec.levels));

  detail::parallel_for(results.size(), workers, [&](std::size_t m) {
    LevelResult& out = results[m];
    out.sups.assign(rows, -1.0);
    out.non_finite.assign(rows, 0);
    const double hi = std::ldexp(spec.radius, -static_cast<int>(m));
    const double lo = 0.5 * hi;

    auto visit = [&](const std::vector<double>& t) {
      const auto table = pushforward_derivatives(f, spec.source, AffinePoint(spec.target, t),
                                                 spec.max_order);
      const double tb = t[axis];
      for (int p = 0; p <= spec.max_weight; ++p) {
        const double w = std::pow(tb, -p);
        for (std::size_t k = 0; k < alphas.size(); ++k) {
          const std::size_t row = static_cast<std::size_t>(p) * alphas.size() + k;
          const double v = std::abs(p == 0 ? table.values[k] : table.values[k] * w);
          if (!std::isfinite(v)) {
            ++out.non_finite[row];
          } else if (v > out.sups[row]) {
            out.sups[row] = v;
          }
        }
      }
      ++out.samples;
    };

    for (double u : {hi, lo}) {
      for (double sign : {1.0, -1.0}) {
        auto t = spec.base_point;
        t[axis] = sign * u;
        visit(t);
      }
    }
    Rng rng(derive_seed(spec.seed, m));
    std::vector<double> dir(n);
    for (int s = 0; s < spec.samples_per_level; ++s) {
      auto t = spec.base_point;
      const double u = rng.uniform(lo, hi);
      t[axis] = rng.uniform() < 0.5 ? -u : u;
      if (n > 1) {
        const double reach = std::sqrt(std::max(0.0, spec.radius * spec.radius - u * u));
        double norm2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          dir[k] = k == axis ? 0.0 : rng.normal();
          norm2 += dir[k] * dir[k];
        }
        const double rho = reach * std::pow(rng.uniform(), 1.0 / static_cast<double>(n - 1));
        const double scale = norm2 > 0.0 ? rho / std::sqrt(norm2) : 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k != axis) t[k] += scale * dir[k];
        }
      }
      visit(t);
    }
  });

  FlatnessReport report{f.name(), spec, {}, {}, FlatVerdict::Inconclusive};
  for (std::size_t m = 0; m < results.size(); ++m) {
    const double hi = std::ldexp(spec.radius, -static_cast<int>(m));
    report.levels.push_back({static_cast<int>(m), 0.5 * hi, hi, results[m].samples});
  }
  bool all_flat = true;
  bool any_diverging = false;
  for (int p = 0; p <= spec.max_weight; ++p) {
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const std::size_t row = static_cast<std::size_t>(p) * alphas.size() + k;
      FlatnessRow r{p, alphas[k], {}, {}, FlatVerdict::Inconclusive};
      for (const auto& level : results) {
        const double s = level.sups[row];
        r.level_sups.push_back(s >= 0.0 ? std::optional<double>(s) : std::nullopt);
        r.non_finite.push_back(level.non_finite[row]);
      }
      r.verdict = decide_flatness(r.level_sups, spec.thresholds);
      all_flat = all_flat && r.verdict == FlatVerdict::FlatConsistent;
      any_diverging = any_diverging || r.verdict == FlatVerdict::Diverging;
      report.rows.push_back(std::move(r));
    }
  }
  report.verdict = any_diverging ? FlatVerdict::Diverging
                   : all_flat    ? FlatVerdict::FlatConsistent
                                 : FlatVerdict::Inconclusive;
  return report;
}

std::vector<std::vector<double>> boundary_base_points(std::size_t dim, std::size_t boundary,
                                                      std::size_t count, double spread,
                                                      std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  if (count == 0) return out;
  out.emplace_back(dim, 0.0);
  if (dim == 1) return out;
  Rng rng(derive_seed(seed, 0xBA5Eull));
  while (out.size() < count) {
    std::vector<double> a(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      if (k != boundary) a[k] = rng.uniform(-spread, spread);
    }
    out.push_back(std::move(a));
  }
  return out;
}

ExtensionReport extension_report(const ScalarField& f, const ExtensionConfig& config) {
  const std::size_t n = f.dim();
  config.source.require_valid(n);
  struct Job {
    ChartId target;
    std::size_t base_index;
    FlatnessSpec spec;
  };
  std::vector<Job> jobs;
  for (int j = 1; j <= static_cast<int>(n) + 1; ++j) {
    const ChartId target(j);
    if (target == config.source) continue;
    const auto bases = boundary_base_points(n, boundary_axis(config.source, target),
                                            config.base_points, config.base_spread,
                                            config.flatness.seed);
    for (std::size_t b = 0; b < bases.size(); ++b) {
      FlatnessSpec spec = config.flatness;
      spec.source = config.source;
      spec.target = target;
      spec.base_point = bases[b];
      spec.validate(n);
      jobs.push_back({target, b, std::move(spec)});
    }
  }

  std::vector<std::optional<FlatnessReport>> reports(jobs.size());
  detail::parallel_for(jobs.size(), config.workers,
                       [&](std::size_t k) { reports[k] = verify_flatness(f, jobs[k].spec, 1); });

  ExtensionReport out{f.name(), n, config.source, {}, FlatVerdict::Inconclusive};
  bool all_flat = true;
  bool any_diverging = false;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    all_flat = all_flat && reports[k]->verdict == FlatVerdict::FlatConsistent;
    any_diverging = any_diverging || reports[k]->verdict == FlatVerdict::Diverging;
    out.entries.push_back({jobs[k].target, jobs[k].base_index, std::move(*reports[k])});
  }
  out.verdict = any_diverging ? FlatVerdict::Diverging
                : all_flat    ? FlatVerdict::FlatConsistent
                              : FlatVerdict::Inconclusive;
  return out;
}

}  // namespace rpnflat
