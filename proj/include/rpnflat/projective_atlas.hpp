#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rpnflat/errors.hpp"
#include "rpnflat/jet.hpp"

namespace rpnflat {

/// 1-based index of a standard affine chart U_i = {x_i != 0} of RP^n.
class ChartId {
 public:
  /// Throws SpecError if index < 1.
  explicit ChartId(int index);

  int index() const { return index_; }
  /// 0-based homogeneous slot.
  std::size_t slot() const { return static_cast<std::size_t>(index_ - 1); }

  /// SpecError unless 1 <= index <= dim + 1.
  void require_valid(std::size_t dim) const;

  friend auto operator<=>(const ChartId&, const ChartId&) = default;

 private:
  int index_;
};

/// A point of RP^n held as its canonical homogeneous representative: scaled so
/// the largest |coordinate| is 1, then signed so the first nonzero coordinate
/// is positive. Two representatives of the same line therefore compare equal.
class ProjectivePoint {
 public:
  /// Throws DomainError if the vector is empty, non-finite or all zero.
  explicit ProjectivePoint(std::vector<double> homogeneous);

  /// n, for a point of RP^n (n + 1 homogeneous coordinates).
  std::size_t dim() const { return coords_.size() - 1; }
  std::span<const double> coords() const { return coords_; }

  friend bool operator==(const ProjectivePoint&, const ProjectivePoint&) = default;

 private:
  std::vector<double> coords_;
};

/// Canonical coordinates agree to `tol` in max-norm.
bool approx_equal(const ProjectivePoint& a, const ProjectivePoint& b, double tol);

/// Coordinates of a point in one affine chart.
class AffinePoint {
 public:
  /// Throws DomainError on non-finite entries.
  AffinePoint(ChartId chart, std::vector<double> coords);

  ChartId chart() const { return chart_; }
  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }

  friend bool operator==(const AffinePoint&, const AffinePoint&) = default;

 private:
  ChartId chart_;
  std::vector<double> coords_;
};

namespace detail {

inline double constant_term(double x) { return x; }
inline double constant_term(const Jet& x) { return x.value(); }
inline double one_like(double) { return 1.0; }
inline Jet one_like(const Jet& ref) { return Jet::constant(ref.dim(), ref.order(), 1.0); }

}  // namespace detail

/// phi_j^{-1} on raw coordinates: insert 1 at slot j.
template <class T>
std::vector<T> homogenize(ChartId j, std::span<const T> affine) {
  if (affine.empty()) throw DomainError("affine point must have dimension >= 1");
  j.require_valid(affine.size());
  std::vector<T> x;
  x.reserve(affine.size() + 1);
  for (std::size_t k = 0; k < affine.size(); ++k) {
    if (k == j.slot()) x.push_back(detail::one_like(affine[k]));
    x.push_back(affine[k]);
  }
  if (j.slot() == affine.size()) x.push_back(detail::one_like(affine.back()));
  return x;
}

/// phi_i on raw homogeneous coordinates: divide by x_i and drop slot i.
/// NotInChartError if the constant term of x_i is exactly zero.
template <class T>
std::vector<T> dehomogenize(ChartId i, std::span<const T> homogeneous) {
  if (homogeneous.size() < 2) throw DomainError("need at least two homogeneous coordinates");
  i.require_valid(homogeneous.size() - 1);
  const T& pivot = homogeneous[i.slot()];
  if (detail::constant_term(pivot) == 0.0) {
    throw NotInChartError("point lies on the hyperplane at infinity of chart " +
                          std::to_string(i.index()));
  }
  std::vector<T> a;
  a.reserve(homogeneous.size() - 1);
  for (std::size_t k = 0; k < homogeneous.size(); ++k) {
    if (k != i.slot()) a.push_back(homogeneous[k] / pivot);
  }
  return a;
}

/// phi_i o phi_j^{-1} on raw coordinates (doubles or jets).
/// NotInOverlapError when the slot-i homogeneous coordinate vanishes.
template <class T>
std::vector<T> transition_coords(ChartId i, ChartId j, std::span<const T> affine) {
  auto x = homogenize(j, affine);
  i.require_valid(affine.size());
  if (detail::constant_term(x[i.slot()]) == 0.0) {
    throw NotInOverlapError("point is not in the overlap of charts " + std::to_string(i.index()) +
                            " and " + std::to_string(j.index()));
  }
  return dehomogenize<T>(i, x);
}

/// phi_i. NotInChartError if the canonical x_i is exactly 0.
AffinePoint chart_map(ChartId i, const ProjectivePoint& p);
/// phi_i^{-1} for i = a.chart().
ProjectivePoint chart_inverse(const AffinePoint& a);
/// Re-express `a` (in chart a.chart()) in chart `target`.
AffinePoint transition(ChartId target, const AffinePoint& a);

/// Either the chart-i coordinates or, for points with x_i = 0, the point of
/// RP^{n-1} obtained by deleting slot i.
using ChartClassification = std::variant<AffinePoint, ProjectivePoint>;
ChartClassification classify(const ProjectivePoint& p, ChartId i);

/// 0-based position, within chart-j coordinates, of homogeneous slot i; the
/// hyperplane at infinity of chart i is {t_k = 0} for this k. Requires i != j.
std::size_t boundary_axis(ChartId i, ChartId j);

/// A point (y, x_1, ..., x_n) of the unit sphere S^n; y is the height axis and
/// (1, 0, ..., 0) is the north pole.
class SpherePoint {
 public:
  /// DomainError unless |coords|^2 = 1 within 1e-12 and dim >= 1.
  explicit SpherePoint(std::vector<double> coords);

  double height() const { return coords_[0]; }
  std::size_t dim() const { return coords_.size() - 1; }
  std::span<const double> coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

/// Projection from the north pole onto R^n: x_k / (1 - y). PoleError at y = 1.
std::vector<double> stereo(const SpherePoint& p);
/// Inverse projection: with d = |x|^2, y = (d - 1) / (d + 1), x_k' = 2 x_k / (d + 1).
SpherePoint stereo_inverse(std::span<const double> x);

struct AtlasCheckConfig {
  std::vector<std::size_t> dims{2, 3, 5};
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  /// Sampled affine coordinates lie in [-box, box] with |a_k| >= margin.
  double box = 10.0;
  double margin = 1e-2;
};

struct AtlasCheck {
  std::string name;
  std::size_t dim = 0;
  std::size_t cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Runs the atlas invariant suite (chart round trip, pairwise and triple
/// cocycles, closed-form transition, scale invariance, classify partition,
/// stereographic round trips).
std::vector<AtlasCheck> run_atlas_checks(const AtlasCheckConfig& config);

}  // namespace rpnflat
