// Shared sampling and comparison helpers for the transport tests and the
// acceptance binary.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "rpnflat/derivative_transport.hpp"
#include "rpnflat/rng.hpp"

namespace oracle {

/// Coordinates with |t_k| in [lo, hi] and random sign.
inline std::vector<double> signed_band(rpnflat::Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> t(n);
  for (auto& v : t) v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(lo, hi);
  return t;
}

/// True when moving every coordinate by one ulp changes no entry of the table
/// by more than `tol` relative to the table's largest entry. Points failing this
/// are ill-conditioned in double precision (for example sin(e^{s^2}) at large
/// s), so no double-precision method can meet a 1e-4 comparison there.
inline bool well_conditioned(const rpnflat::ScalarField& f, rpnflat::ChartId source,
                             const rpnflat::AffinePoint& t, int order, double tol = 1e-7) {
  const auto base = rpnflat::pushforward_derivatives(f, source, t, order);
  std::vector<double> moved(t.coords().begin(), t.coords().end());
  for (auto& v : moved) v = std::nextafter(v, std::numeric_limits<double>::infinity());
  const auto near = rpnflat::pushforward_derivatives(f, source, rpnflat::AffinePoint(t.chart(), moved), order);
  double scale = 0.0;
  for (double v : base.values) {
    if (!std::isfinite(v)) return false;
    scale = std::max(scale, std::abs(v));
  }
  for (std::size_t k = 0; k < base.values.size(); ++k) {
    if (std::abs(base.values[k] - near.values[k]) > tol * scale) return false;
  }
  return true;
}

struct FdComparison {
  std::size_t compared = 0;
  std::size_t skipped = 0;
  double worst = 0.0;
};

/// pushforward_derivatives against extended-precision finite differences of the
/// directly composed function. A point is skipped when the table is below
/// 1e-30, when double evaluation is ill-conditioned there, or when the h = 1e-5
/// stencil does not resolve g (Richardson estimate above 1e-6 of an entry, as
/// for the oscillator phase e^{1/t^2} near t = 0.3). Partials that vanish by
/// symmetry are compared against the table's largest entry.
inline void compare_with_fd(const rpnflat::ScalarField& f, const std::string& name, rpnflat::ChartId source,
                            const rpnflat::AffinePoint& t, int order, FdComparison& acc) {
  const auto table = rpnflat::pushforward_derivatives(f, source, t, order);
  if (std::abs(table.values[0]) < 1e-30 || !well_conditioned(f, source, t, order)) {
    ++acc.skipped;
    return;
  }
  const auto g = composed(corpus_formula(name), source.index(), t.chart().index());
  const std::vector<double> x(t.coords().begin(), t.coords().end());
  double scale = 0.0;
  for (double v : table.values) scale = std::max(scale, std::abs(v));
  std::vector<FdEstimate> fd;
  double fd_scale = 0.0;
  for (const auto& alpha : table.indices) {
    fd.push_back(fd_estimate(g, x, {alpha.exponents().begin(), alpha.exponents().end()}));
    fd_scale = std::max(fd_scale, std::abs(fd.back().value));
  }
  for (const auto& e : fd) {
    if (e.error > 1e-6 * std::max(std::abs(e.value), 1e-8 * fd_scale)) {
      ++acc.skipped;
      return;
    }
  }
  for (std::size_t k = 0; k < table.indices.size(); ++k) {
    acc.worst = std::max(acc.worst, rel_err(table.values[k], fd[k].value, 1e-8 * scale));
  }
  ++acc.compared;
}

}  // namespace oracle
