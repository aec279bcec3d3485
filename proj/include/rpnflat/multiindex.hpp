#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rpnflat {

/// Exponent vector alpha in Z_{>=0}^n. Indexes both monomials x^alpha and
/// mixed partials d^alpha.
class MultiIndex {
 public:
  MultiIndex() = default;
  /// Throws std::invalid_argument if any exponent is negative.
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(std::size_t dim);
  /// e_axis: one in slot `axis`, zero elsewhere.
  static MultiIndex unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return exponents_.size(); }
  int operator[](std::size_t k) const { return exponents_[k]; }
  std::span<const int> exponents() const { return exponents_; }

  /// |alpha| = sum of exponents.
  int order() const;
  /// alpha! = prod alpha_k!
  double factorial() const;
  /// x^alpha. Requires x.size() == dim().
  double monomial(std::span<const double> x) const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// True if every exponent is <= the corresponding one in `other`.
  bool divides(const MultiIndex& other) const;

  /// "(1,0,2)"
  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exponents_;
};

/// All alpha with |alpha| <= max_order in graded lexicographic order: by total
/// degree, then lexicographically descending within a degree, so that for
/// n = 2, K = 1 the order is (0,0), (1,0), (0,1). Report rows use this order.
std::vector<MultiIndex> enumerate_multiindices(std::size_t dim, int max_order);

/// C(dim + max_order, dim), the length of enumerate_multiindices(dim, max_order).
std::uint64_t multiindex_count(std::size_t dim, int max_order);

}  // namespace rpnflat
