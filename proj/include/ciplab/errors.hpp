#pragma once

#include <stdexcept>
#include <string>

namespace cip {

/// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// (+inf) + (-inf): only reachable through a corrupted model, never a value.
struct IndeterminateSum : Error {
  IndeterminateSum() : Error("indeterminate sum (+inf) + (-inf)") {}
};

/// Scaling by c <= 0. Zero-weight terms must be dropped before arithmetic.
struct NonPositiveScale : Error {
  explicit NonPositiveScale(double c)
      : Error("scale factor must be strictly positive, got " + std::to_string(c)) {}
};

struct EmptySequence : Error {
  EmptySequence() : Error("sup of an empty sequence") {}
};

struct DimensionMismatch : Error {
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

/// Structural convexity certification failed; `path` locates the offending node.
struct ConvexityRejected : Error {
  std::string path;
  explicit ConvexityRejected(std::string where, const std::string& why)
      : Error("convexity rejected at " + where + ": " + why), path(std::move(where)) {}
};

/// Problem-definition document does not conform to the schema.
struct SchemaError : Error {
  std::string path;
  SchemaError(std::string where, const std::string& why)
      : Error("schema error at " + where + ": " + why), path(std::move(where)) {}
};

struct UnknownInstance : Error {
  explicit UnknownInstance(const std::string& name) : Error("unknown corpus instance: " + name) {}
};

/// Simplex exceeded its pivot budget despite Bland's rule; treated as a bug flag.
struct CyclingDetected : Error {
  CyclingDetected() : Error("simplex pivot budget exhausted (cycling?)") {}
};

struct AllMinusInf : Error {
  AllMinusInf() : Error("scalar maximization: oracle is -inf on the whole sampled range") {}
};

}  // namespace cip
