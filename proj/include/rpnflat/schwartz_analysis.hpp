#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpnflat/multiindex.hpp"
#include "rpnflat/projective_atlas.hpp"
#include "rpnflat/rng.hpp"
#include "rpnflat/scalar_field.hpp"

namespace rpnflat {

/// Decision-rule constants shared by the classifier and the flatness check.
struct Thresholds {
  double growth_factor = 10.0;
  double abs_floor = 1e-6;
  double decay_ceiling = 1e-3;
  /// Minimum log-log slope of a strictly increasing annulus tail that counts
  /// as polynomial growth.
  double growth_exponent = 0.5;
};

/// Tensor grid over per-axis ranges, optionally restricted to the closed
/// annulus lo <= |x| <= hi. The point set is a pure function of the fields.
struct SamplingGrid {
  std::vector<std::pair<double, double>> ranges;
  std::size_t points_per_axis = 2;
  std::optional<std::pair<double, double>> annulus;

  static SamplingGrid cube(std::size_t dim, double lo, double hi, std::size_t points_per_axis);

  std::size_t dim() const { return ranges.size(); }
  /// SpecError on fewer than 2 points per axis, empty or non-finite ranges.
  void validate() const;
  std::vector<std::vector<double>> points() const;
};

/// max over the grid of |x^alpha (d^beta f)(x)|. A lower bound on the true
/// supremum; non-finite samples are skipped.
double estimate_seminorm(const ScalarField& f, const MultiIndex& alpha, const MultiIndex& beta,
                         const SamplingGrid& grid, std::size_t workers = 1);

enum class PairVerdict { Bounded, Diverging, Inconclusive };
enum class SchwartzVerdict { SchwartzConsistent, NotSchwartz, Inconclusive };

std::string_view to_string(PairVerdict v);
std::string_view to_string(SchwartzVerdict v);

struct ClassifyConfig {
  int max_alpha = 3;
  int max_beta = 3;
  std::vector<double> radii{1.5, 3.0, 6.0, 12.0};
  /// 0 selects default_points_per_axis(dim).
  std::size_t points_per_axis = 0;
  Thresholds thresholds;
  std::size_t workers = 1;
};

std::size_t default_points_per_axis(std::size_t dim);

struct SeminormRow {
  MultiIndex alpha;
  MultiIndex beta;
  /// One sup per annulus [R_{k-1}, R_k], R_0 = 0.
  std::vector<double> sups;
  PairVerdict verdict;
};

struct SeminormReport {
  std::string function;
  std::size_t dim;
  ClassifyConfig config;
  std::size_t points_per_axis;
  std::vector<SeminormRow> rows;
  std::size_t non_finite = 0;
  SchwartzVerdict verdict;
};

/// Per-pair verdict from annulus sups S_1..S_L over radii R_1..R_L:
///   Diverging    S_L > abs_floor and either S_L > growth_factor * max_{k<L} S_k
///                or S_{L-2} < S_{L-1} < S_L with log(S_L/S_{L-2}) / log(R_L/R_{L-2})
///                >= growth_exponent;
///   Bounded      S_L <= decay_ceiling and S_L <= S_{L-1};
///   Inconclusive otherwise.
PairVerdict decide_pair(std::span<const double> sups, std::span<const double> radii,
                        const Thresholds& th);

/// NotSchwartz if any (alpha, beta) pair diverges, SchwartzConsistent if all are
/// bounded. Requires at least three radii. Rows are ordered by alpha then
/// beta, each in graded-lex order.
SeminormReport classify_schwartz(const ScalarField& f, const ClassifyConfig& config);

enum class FlatVerdict { FlatConsistent, Diverging, Inconclusive };
std::string_view to_string(FlatVerdict v);

struct FlatnessSpec {
  ChartId source{1};
  ChartId target{2};
  /// Point of the target chart on the source chart's hyperplane at infinity.
  std::vector<double> base_point;
  double radius = 0.5;
  int max_weight = 3;
  int max_order = 3;
  int levels = 20;
  int samples_per_level = 256;
  std::uint64_t seed = kDefaultSeed;
  Thresholds thresholds;

  /// SpecError if malformed, including a base point off the hyperplane.
  void validate(std::size_t dim) const;
};

struct FlatnessLevel {
  int level;
  double band_lo;
  double band_hi;
  std::size_t samples;
};

struct FlatnessRow {
  int p;
  MultiIndex alpha;
  /// sup of |t_b^{-p} d^alpha g| per level; nullopt if no sample was finite.
  std::vector<std::optional<double>> level_sups;
  std::vector<std::size_t> non_finite;
  FlatVerdict verdict;
};

struct FlatnessReport {
  std::string function;
  FlatnessSpec spec;
  std::vector<FlatnessLevel> levels;
  std::vector<FlatnessRow> rows;
  FlatVerdict verdict;
};

/// Per-row verdict from level sups Q_m (first/final = first/last non-empty level):
///   Diverging       final > abs_floor and final > growth_factor * first;
///   FlatConsistent  max_m Q_m <= growth_factor * max(first, abs_floor);
///   Inconclusive    otherwise (including rows with no finite level).
FlatVerdict decide_flatness(std::span<const std::optional<double>> level_sups, const Thresholds& th);

/// Samples the punctured ball B_r(a) in dyadic bands |t_b| in [r 2^{-m-1}, r 2^{-m}]
/// (band edges on the axis through a, plus seeded uniform points), and records
/// sup |t_b^{-p} d^alpha g| for g = f o transition(source, .), p <= max_weight,
/// |alpha| <= max_order. Levels run in parallel; results do not depend on `workers`.
FlatnessReport verify_flatness(const ScalarField& f, const FlatnessSpec& spec,
                               std::size_t workers = 1);

struct ExtensionConfig {
  ChartId source{1};
  std::size_t base_points = 8;
  /// Free coordinates of generated base points lie in [-spread, spread].
  double base_spread = 2.0;
  /// Template for every run; source, target and base_point are overwritten.
  FlatnessSpec flatness;
  std::size_t workers = 1;
};

struct ExtensionEntry {
  ChartId target;
  std::size_t base_index;
  FlatnessReport report;
};

struct ExtensionReport {
  std::string function;
  std::size_t dim;
  ChartId source;
  std::vector<ExtensionEntry> entries;
  FlatVerdict verdict;
};

/// Base points on {t_b = 0} in a target chart: the origin first, then seeded
/// points. Dimension 1 has a single base point.
std::vector<std::vector<double>> boundary_base_points(std::size_t dim, std::size_t boundary,
                                                      std::size_t count, double spread,
                                                      std::uint64_t seed);

/// verify_flatness against every other chart over a set of boundary base points.
ExtensionReport extension_report(const ScalarField& f, const ExtensionConfig& config);

}  // namespace rpnflat
