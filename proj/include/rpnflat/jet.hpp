#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "rpnflat/multiindex.hpp"

namespace rpnflat {

/// Shared, immutable bookkeeping for all jets of a given (dim, order): the
/// graded-lex index list and the truncated product table.
class JetLayout {
 public:
  struct Term {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  /// Cached per (dim, order); thread-safe.
  static std::shared_ptr<const JetLayout> get(std::size_t dim, int order);

  JetLayout(std::size_t dim, int order);

  std::size_t dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  int degree(std::size_t k) const { return degree_[k]; }
  double factorial(std::size_t k) const { return factorial_[k]; }

  /// Position of alpha in graded-lex order. Throws OrderError if |alpha| > order.
  std::size_t index_of(const MultiIndex& alpha) const;

  /// Every (a, b) with |a| + |b| <= order that lands on `out`.
  std::span<const Term> terms_into(std::size_t out) const {
    return {terms_.data() + offsets_[out], terms_.data() + offsets_[out + 1]};
  }

 private:
  std::size_t dim_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<Term> terms_;
  std::vector<std::size_t> offsets_;
  std::map<MultiIndex, std::uint32_t> rank_;
};

/// Truncated multivariate Taylor expansion at a point. Coefficients are stored
/// densely in graded-lex order, normalized as coeff(alpha) = d^alpha f / alpha!.
class Jet {
 public:
  /// The zero jet.
  Jet(std::size_t dim, int order);

  static Jet constant(std::size_t dim, int order, double value);
  /// x_axis expanded around `value`.
  static Jet variable(std::size_t dim, int order, double value, std::size_t axis);
  /// Takes ownership of coefficients laid out per `layout`.
  Jet(std::shared_ptr<const JetLayout> layout, std::vector<double> coeffs);

  std::size_t dim() const { return layout_->dim(); }
  int order() const { return layout_->order(); }
  const JetLayout& layout() const { return *layout_; }
  const std::shared_ptr<const JetLayout>& layout_ptr() const { return layout_; }

  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  /// Taylor coefficient; OrderError if |alpha| > order.
  double coeff(const MultiIndex& alpha) const;
  /// d^alpha f at the expansion point: alpha! * coeff(alpha).
  double partial(const MultiIndex& alpha) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(Jet a, double s);
  friend Jet operator+(double s, Jet a) { return std::move(a) + s; }
  friend Jet operator-(Jet a, double s) { return std::move(a) + (-s); }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator/(double s, const Jet& a);

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> coeffs_;
};

/// 1 / a. SingularPointError if a.value() == 0.
Jet recip(const Jet& a);
Jet exp(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
/// a^k for any integer k; negative k goes through recip.
Jet powi(const Jet& a, int k);

/// Coordinate jets x_0 .. x_{n-1} expanded around `point`.
std::vector<Jet> seed_jets(std::span<const double> point, int order);

/// d^alpha f at the expansion point.
inline double extract_partial(const Jet& j, const MultiIndex& alpha) { return j.partial(alpha); }

}  // namespace rpnflat
