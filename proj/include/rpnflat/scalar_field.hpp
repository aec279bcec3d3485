#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpnflat/jet.hpp"

namespace rpnflat {

/// A smooth real-valued function on R^n, evaluated through jet arithmetic so
/// that point values and all partials up to any order come from one formula.
class ScalarField {
 public:
  using JetFunction = std::function<Jet(std::span<const Jet>)>;

  ScalarField(std::string name, std::size_t dim, JetFunction fn);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }

  /// f(x). Identical bits to eval_jet(x, 0).value().
  double eval(std::span<const double> x) const;
  /// Taylor jet of f at x to the given order.
  Jet eval_jet(std::span<const double> x, int order) const;
  /// f applied to caller-supplied input jets (used for composition).
  Jet apply(std::span<const Jet> inputs) const;

 private:
  std::string name_;
  std::size_t dim_;
  JetFunction fn_;
};

enum class SchwartzClass { Schwartz, NotSchwartz };

std::string_view to_string(SchwartzClass c);

struct CorpusEntry {
  std::string name;
  ScalarField field;
  SchwartzClass expected_class;
};

/// gaussian_nd, poly_gaussian, oscillator, runge, polynomial in dimension n.
std::vector<CorpusEntry> builtin_corpus(std::size_t dim);

/// Corpus entries plus the auxiliary fields `zero`, `one` and `gaussian_1d`
/// (n = 1 only). Returns nullopt for unknown names.
std::optional<ScalarField> find_field(std::string_view name, std::size_t dim);

/// Expected class of a corpus entry or auxiliary field, nullopt for unknown names.
std::optional<SchwartzClass> expected_class(std::string_view name);

std::vector<std::string> field_names();

}  // namespace rpnflat
