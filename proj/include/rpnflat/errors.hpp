#pragma once

#include <stdexcept>
#include <string>

namespace rpnflat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A jet reciprocal was requested at a point where the constant term is zero.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// A partial derivative of higher order than the jet carries was requested.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes (dimension, truncation order) do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The projective point lies on the hyperplane at infinity of the chart.
class NotInChartError : public Error {
 public:
  using Error::Error;
};

/// The affine point is outside the overlap of two charts.
class NotInOverlapError : public Error {
 public:
  using Error::Error;
};

/// Stereographic projection from the north pole itself.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of a scalar field (wrong dimension, non-finite).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Weighted derivative requested on the boundary hyperplane itself.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Malformed analysis specification or run configuration.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace rpnflat
