#include "rpnflat/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rpnflat/errors.hpp"

namespace rpnflat {

ScalarField::ScalarField(std::string name, std::size_t dim, JetFunction fn)
    : name_(std::move(name)), dim_(dim), fn_(std::move(fn)) {
  if (dim_ == 0) throw DomainError("scalar field dimension must be >= 1");
}

Jet ScalarField::eval_jet(std::span<const double> x, int order) const {
  if (x.size() != dim_) {
    throw DomainError(name_ + ": expected a point of dimension " + std::to_string(dim_) +
                      ", got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError(name_ + ": non-finite coordinate");
  }
  const auto seeds = seed_jets(x, order);
  return fn_(seeds);
}

double ScalarField::eval(std::span<const double> x) const { return eval_jet(x, 0).value(); }

Jet ScalarField::apply(std::span<const Jet> inputs) const {
  if (inputs.size() != dim_) throw DomainError(name_ + ": wrong number of input jets");
  return fn_(inputs);
}

std::string_view to_string(SchwartzClass c) {
  return c == SchwartzClass::Schwartz ? "Schwartz" : "NotSchwartz";
}

namespace {

// Summed in ascending order of value so that point evaluation is bit-for-bit
// invariant under permutations of the coordinates.
Jet sum_of_squares(std::span<const Jet> x, std::size_t first) {
  std::vector<Jet> squares;
  squares.reserve(x.size());
  for (std::size_t k = first; k < x.size(); ++k) squares.push_back(x[k] * x[k]);
  std::stable_sort(squares.begin(), squares.end(),
                   [](const Jet& a, const Jet& b) { return a.value() < b.value(); });
  Jet acc(x[0].dim(), x[0].order());
  for (const auto& s : squares) acc += s;
  return acc;
}

ScalarField gaussian_nd(std::size_t n) {
  return {"gaussian_nd", n, [](std::span<const Jet> x) { return exp(-sum_of_squares(x, 0)); }};
}

ScalarField poly_gaussian(std::size_t n) {
  return {"poly_gaussian", n,
          [](std::span<const Jet> x) { return x[0] * exp(-sum_of_squares(x, 0)); }};
}

// e^{-x1^2} sin(e^{x1^2}), times a Gaussian in the remaining coordinates so
// the failure to decay stays confined to the x1 direction.
ScalarField oscillator(std::size_t n) {
  return {"oscillator", n, [](std::span<const Jet> x) {
            const Jet u = x[0] * x[0];
            Jet h = exp(-u) * sin(exp(u));
            if (x.size() > 1) h = h * exp(-sum_of_squares(x, 1));
            return h;
          }};
}

ScalarField runge(std::size_t n) {
  return {"runge", n, [](std::span<const Jet> x) { return recip(1.0 + sum_of_squares(x, 0)); }};
}

ScalarField polynomial(std::size_t n) {
  return {"polynomial", n, [](std::span<const Jet> x) { return 1.0 + x[0] * x[0]; }};
}

ScalarField constant(std::string name, std::size_t n, double c) {
  return {std::move(name), n, [c](std::span<const Jet> x) {
            return Jet::constant(x[0].dim(), x[0].order(), c);
          }};
}

}  // namespace

std::vector<CorpusEntry> builtin_corpus(std::size_t dim) {
  if (dim == 0) throw DomainError("corpus dimension must be >= 1");
  return {
      {"gaussian_nd", gaussian_nd(dim), SchwartzClass::Schwartz},
      {"poly_gaussian", poly_gaussian(dim), SchwartzClass::Schwartz},
      {"oscillator", oscillator(dim), SchwartzClass::NotSchwartz},
      {"runge", runge(dim), SchwartzClass::NotSchwartz},
      {"polynomial", polynomial(dim), SchwartzClass::NotSchwartz},
  };
}

std::optional<ScalarField> find_field(std::string_view name, std::size_t dim) {
  if (dim == 0) return std::nullopt;
  for (auto& entry : builtin_corpus(dim)) {
    if (entry.name == name) return std::move(entry.field);
  }
  if (name == "zero") return constant("zero", dim, 0.0);
  if (name == "one") return constant("one", dim, 1.0);
  if (name == "gaussian_1d" && dim == 1) {
    return ScalarField("gaussian_1d", 1, [](std::span<const Jet> x) { return exp(-(x[0] * x[0])); });
  }
  return std::nullopt;
}

std::optional<SchwartzClass> expected_class(std::string_view name) {
  if (name == "gaussian_1d" || name == "zero") return SchwartzClass::Schwartz;
  if (name == "one") return SchwartzClass::NotSchwartz;
  for (const auto& entry : builtin_corpus(1)) {
    if (entry.name == name) return entry.expected_class;
  }
  return std::nullopt;
}

std::vector<std::string> field_names() {
  std::vector<std::string> names;
  for (const auto& entry : builtin_corpus(1)) names.push_back(entry.name);
  names.insert(names.end(), {"gaussian_1d", "zero", "one"});
  return names;
}

}  // namespace rpnflat
