#include "rpnflat/multiindex.hpp"

#include <numeric>
#include <stdexcept>

namespace rpnflat {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("multi-index exponents must be non-negative");
  }
}

MultiIndex MultiIndex::zero(std::size_t dim) { return MultiIndex(std::vector<int>(dim, 0)); }

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw std::out_of_range("unit multi-index axis out of range");
  std::vector<int> e(dim, 0);
  e[axis] = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::order() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0); }

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int e : exponents_) {
    for (int k = 2; k <= e; ++k) f *= k;
  }
  return f;
}

double MultiIndex::monomial(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("monomial: dimension mismatch");
  double v = 1.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    for (int p = 0; p < exponents_[k]; ++p) v *= x[k];
  }
  return v;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("multi-index dimension mismatch");
  std::vector<int> e(exponents_);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] += other.exponents_[k];
  return MultiIndex(std::move(e));
}

bool MultiIndex::divides(const MultiIndex& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (exponents_[k] > other.exponents_[k]) return false;
  }
  return true;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(exponents_[k]);
  }
  return s + ")";
}

namespace {

// Compositions of `remaining` into slots [slot, n), lexicographically descending.
void compositions(std::vector<int>& cur, std::size_t slot, int remaining,
                  std::vector<MultiIndex>& out) {
  if (slot + 1 == cur.size()) {
    cur[slot] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[slot] = e;
    compositions(cur, slot + 1, remaining - e, out);
  }
  cur[slot] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(std::size_t dim, int max_order) {
  if (dim == 0) throw std::invalid_argument("enumerate_multiindices: dimension must be >= 1");
  if (max_order < 0) throw std::invalid_argument("enumerate_multiindices: order must be >= 0");
  std::vector<MultiIndex> out;
  out.reserve(multiindex_count(dim, max_order));
  std::vector<int> cur(dim, 0);
  for (int d = 0; d <= max_order; ++d) compositions(cur, 0, d, out);
  return out;
}

std::uint64_t multiindex_count(std::size_t dim, int max_order) {
  // C(dim + K, K) built incrementally; exact for desk-scale sizes.
  std::uint64_t c = 1;
  for (int k = 1; k <= max_order; ++k) c = c * (dim + static_cast<std::uint64_t>(k)) / k;
  return c;
}

}  // namespace rpnflat
