#pragma once

#include <cstddef>
#include <vector>

#include "rpnflat/multiindex.hpp"
#include "rpnflat/projective_atlas.hpp"
#include "rpnflat/scalar_field.hpp"

namespace rpnflat {

/// First-order derivative transport between two charts at a point t of the
/// target chart: grad f(s) = M(t) * grad g(t), where s = transition(source, t),
/// f is the source-chart representative and g = f o transition.
struct TransportMatrix {
  ChartId source;
  ChartId target;
  AffinePoint point;
  std::size_t dim;
  /// Row-major dim x dim.
  std::vector<double> entries;

  double operator()(std::size_t row, std::size_t col) const { return entries[row * dim + col]; }
  std::vector<double> apply(std::span<const double> v) const;
};

/// For (1, 2) the matrix is emitted in closed form: first row
/// (-t1^2, -t1 t2, ..., -t1 tn), t1 on the rest of the diagonal, zeros
/// elsewhere. Other pairs use the transposed Jacobian of the inverse
/// transition, evaluated with order-1 jets. NotInOverlapError off the overlap.
TransportMatrix first_order_matrix(ChartId source, const AffinePoint& t);

/// Same matrix, always through the jet route (no closed form).
TransportMatrix first_order_matrix_from_jets(ChartId source, const AffinePoint& t);

/// (d^alpha g)(t) for |alpha| <= order, rows in graded-lex order.
struct DerivativeTable {
  ChartId source;
  AffinePoint point;
  int order;
  /// Coordinate whose vanishing marks the source chart's hyperplane at infinity.
  std::size_t boundary_axis;
  std::vector<MultiIndex> indices;
  std::vector<double> values;

  /// OrderError if |alpha| > order.
  double at(const MultiIndex& alpha) const;
};

/// g = f o transition(source, .), as a field on the target chart.
ScalarField pullback(const ScalarField& f, ChartId source, ChartId target);

/// Derivative table of g = f o transition(source, .) at t, by seeding jets at
/// t and pushing them through the transition. NotInOverlapError if t lies on
/// the source chart's hyperplane at infinity.
DerivativeTable pushforward_derivatives(const ScalarField& f, ChartId source, const AffinePoint& t,
                                        int order);

/// t_b^{-p} (d^alpha g)(t) where t_b is the boundary coordinate (t1 when the
/// source chart is 1). BoundaryError if t_b == 0.
double weighted_derivative(const DerivativeTable& table, int p, const MultiIndex& alpha);

}  // namespace rpnflat
