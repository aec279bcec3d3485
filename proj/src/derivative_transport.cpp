#include "rpnflat/derivative_transport.hpp"

#include <cmath>
#include <utility>

namespace rpnflat {

std::vector<double> TransportMatrix::apply(std::span<const double> v) const {
  std::vector<double> out(dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) out[r] += (*this)(r, c) * v[c];
  }
  return out;
}

namespace {

void require_overlap(ChartId source, const AffinePoint& t) {
  source.require_valid(t.dim());
  if (source == t.chart()) return;
  if (t.coords()[boundary_axis(source, t.chart())] == 0.0) {
    throw NotInOverlapError("point lies on the hyperplane at infinity of chart " +
                            std::to_string(source.index()));
  }
}

}  // namespace

TransportMatrix first_order_matrix_from_jets(ChartId source, const AffinePoint& t) {
  require_overlap(source, t);
  const std::size_t n = t.dim();
  const auto s = transition(source, t);
  // grad f(s) = (dt/ds)^T grad g(t), with t = transition(target, s).
  const auto seeds = seed_jets(s.coords(), 1);
  const auto back = transition_coords<Jet>(t.chart(), source, seeds);
  std::vector<double> entries(n * n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      entries[row * n + col] = back[col].partial(MultiIndex::unit(n, row));
    }
  }
  return {source, t.chart(), t, n, std::move(entries)};
}

TransportMatrix first_order_matrix(ChartId source, const AffinePoint& t) {
  if (source.index() != 1 || t.chart().index() != 2) return first_order_matrix_from_jets(source, t);
  require_overlap(source, t);
  const std::size_t n = t.dim();
  const auto c = t.coords();
  std::vector<double> entries(n * n, 0.0);
  entries[0] = -c[0] * c[0];
  for (std::size_t k = 1; k < n; ++k) {
    entries[k] = -c[0] * c[k];
    entries[k * n + k] = c[0];
  }
  return {source, t.chart(), t, n, std::move(entries)};
}

double DerivativeTable::at(const MultiIndex& alpha) const {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] == alpha) return values[k];
  }
  throw OrderError("multi-index " + alpha.to_string() + " is not in the derivative table");
}

ScalarField pullback(const ScalarField& f, ChartId source, ChartId target) {
  source.require_valid(f.dim());
  target.require_valid(f.dim());
  return ScalarField(f.name() + "@chart" + std::to_string(target.index()), f.dim(),
                     [f, source, target](std::span<const Jet> t) {
                       const auto s = transition_coords<Jet>(source, target, t);
                       return f.apply(s);
                     });
}

DerivativeTable pushforward_derivatives(const ScalarField& f, ChartId source, const AffinePoint& t,
                                        int order) {
  if (order < 0) throw OrderError("derivative order must be >= 0");
  if (t.dim() != f.dim()) throw DomainError("point and field dimensions differ");
  require_overlap(source, t);
  const auto seeds = seed_jets(t.coords(), order);
  const Jet g = f.apply(transition_coords<Jet>(source, t.chart(), seeds));
  const auto& layout = g.layout();
  std::vector<double> values(layout.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = layout.factorial(k) * g.coeffs()[k];
  const std::size_t axis = source == t.chart() ? 0 : boundary_axis(source, t.chart());
  return {source, t, order, axis, layout.indices(), std::move(values)};
}

double weighted_derivative(const DerivativeTable& table, int p, const MultiIndex& alpha) {
  if (p < 0) throw SpecError("weight exponent must be non-negative");
  const double tb = table.point.coords()[table.boundary_axis];
  if (tb == 0.0) throw BoundaryError("weighted derivative evaluated on the boundary hyperplane");
  const double d = table.at(alpha);
  return p == 0 ? d : d * std::pow(tb, -p);
}

}  // namespace rpnflat
