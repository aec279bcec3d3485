#include "rpnflat/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "rpnflat/errors.hpp"

namespace rpnflat {

JetLayout::JetLayout(std::size_t dim, int order)
    : dim_(dim), order_(order), indices_(enumerate_multiindices(dim, order)) {
  const std::size_t n = indices_.size();
  degree_.reserve(n);
  factorial_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    degree_.push_back(indices_[k].order());
    factorial_.push_back(indices_[k].factorial());
    rank_.emplace(indices_[k], static_cast<std::uint32_t>(k));
  }
  std::vector<std::vector<Term>> by_out(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (degree_[a] + degree_[b] > order_) continue;
      const auto c = rank_.at(indices_[a] + indices_[b]);
      by_out[c].push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), c});
    }
  }
  offsets_.reserve(n + 1);
  offsets_.push_back(0);
  for (auto& terms : by_out) {
    terms_.insert(terms_.end(), terms.begin(), terms.end());
    offsets_.push_back(terms_.size());
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(std::size_t dim, int order) {
  if (dim == 0) throw ShapeError("jet dimension must be >= 1");
  if (order < 0) throw ShapeError("jet order must be >= 0");
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(dim, order);
  return slot;
}

std::size_t JetLayout::index_of(const MultiIndex& alpha) const {
  if (alpha.dim() != dim_) throw ShapeError("multi-index dimension does not match jet");
  const int d = alpha.order();
  if (d > order_) {
    throw OrderError("requested |alpha| = " + std::to_string(d) + " exceeds jet order " +
                     std::to_string(order_));
  }
  return rank_.at(alpha);
}

namespace {

void require_same_shape(const Jet& a, const Jet& b) {
  if (a.layout_ptr() != b.layout_ptr()) {
    throw ShapeError("jet operands differ in dimension or order");
  }
}

}  // namespace

Jet::Jet(std::size_t dim, int order)
    : layout_(JetLayout::get(dim, order)), coeffs_(layout_->size(), 0.0) {}

Jet::Jet(std::shared_ptr<const JetLayout> layout, std::vector<double> coeffs)
    : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != layout_->size()) throw ShapeError("coefficient count does not match layout");
}

Jet Jet::constant(std::size_t dim, int order, double value) {
  Jet j(dim, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(std::size_t dim, int order, double value, std::size_t axis) {
  if (axis >= dim) throw ShapeError("variable axis out of range");
  Jet j(dim, order);
  j.coeffs_[0] = value;
  // First-order indices follow the constant term in graded-lex order.
  if (order >= 1) j.coeffs_[1 + axis] = 1.0;
  return j;
}

double Jet::coeff(const MultiIndex& alpha) const { return coeffs_[layout_->index_of(alpha)]; }

double Jet::partial(const MultiIndex& alpha) const {
  const auto k = layout_->index_of(alpha);
  return layout_->factorial(k) * coeffs_[k];
}

Jet Jet::operator-() const {
  Jet r(*this);
  for (double& c : r.coeffs_) c = -c;
  return r;
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet operator+(Jet a, double s) {
  a.coeffs_[0] += s;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_same_shape(a, b);
  const auto& layout = a.layout();
  std::vector<double> out(layout.size(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    double acc = 0.0;
    for (const auto& t : layout.terms_into(c)) acc += a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
    out[c] = acc;
  }
  return Jet(a.layout_, std::move(out));
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet operator/(double s, const Jet& a) { return recip(a) *= s; }

Jet recip(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) throw SingularPointError("reciprocal of a jet with zero constant term");
  const auto& layout = a.layout();
  const auto in = a.coeffs();
  std::vector<double> r(layout.size(), 0.0);
  r[0] = 1.0 / a0;
  // a * r = 1  =>  r[g] = -(1/a0) * sum_{alpha != 0} a[alpha] r[g - alpha]
  for (std::size_t g = 1; g < r.size(); ++g) {
    double acc = 0.0;
    for (const auto& t : layout.terms_into(g)) {
      if (t.lhs != 0) acc += in[t.lhs] * r[t.rhs];
    }
    r[g] = -acc / a0;
  }
  return Jet(a.layout_ptr(), std::move(r));
}

Jet exp(const Jet& a) {
  const auto& layout = a.layout();
  const auto in = a.coeffs();
  std::vector<double> e(layout.size(), 0.0);
  e[0] = std::exp(in[0]);
  // Euler-operator recurrence: |g| e[g] = sum_{alpha != 0} |alpha| a[alpha] e[g - alpha]
  for (std::size_t g = 1; g < e.size(); ++g) {
    double acc = 0.0;
    for (const auto& t : layout.terms_into(g)) {
      if (t.lhs != 0) acc += layout.degree(t.lhs) * in[t.lhs] * e[t.rhs];
    }
    e[g] = acc / layout.degree(g);
  }
  return Jet(a.layout_ptr(), std::move(e));
}

namespace {

std::pair<Jet, Jet> sincos(const Jet& a) {
  const auto& layout = a.layout();
  const auto in = a.coeffs();
  std::vector<double> s(layout.size(), 0.0);
  std::vector<double> c(layout.size(), 0.0);
  s[0] = std::sin(in[0]);
  c[0] = std::cos(in[0]);
  for (std::size_t g = 1; g < s.size(); ++g) {
    double as = 0.0;
    double ac = 0.0;
    for (const auto& t : layout.terms_into(g)) {
      if (t.lhs == 0) continue;
      const double w = layout.degree(t.lhs) * in[t.lhs];
      as += w * c[t.rhs];
      ac -= w * s[t.rhs];
    }
    s[g] = as / layout.degree(g);
    c[g] = ac / layout.degree(g);
  }
  return {Jet(a.layout_ptr(), std::move(s)), Jet(a.layout_ptr(), std::move(c))};
}

}  // namespace

Jet sin(const Jet& a) { return sincos(a).first; }
Jet cos(const Jet& a) { return sincos(a).second; }

Jet powi(const Jet& a, int k) {
  if (k < 0) return recip(powi(a, -k));
  Jet result = Jet::constant(a.dim(), a.order(), 1.0);
  Jet base = a;
  unsigned e = static_cast<unsigned>(k);
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

std::vector<Jet> seed_jets(std::span<const double> point, int order) {
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t k = 0; k < point.size(); ++k) {
    out.push_back(Jet::variable(point.size(), order, point[k], k));
  }
  return out;
}

}  // namespace rpnflat
