#pragma once

#include <stdexcept>
#include <string>

namespace qwork {

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidArgument,
  Config,
  Numerical,
  Truncation,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidDimension : Error {
  explicit InvalidDimension(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};

struct NumericalFailure : Error {
  NumericalFailure(const std::string& w, double residual)
      : Error(ErrorKind::Numerical, w), residual(residual) {}
  double residual;
};

struct TruncationError : Error {
  TruncationError(const std::string& w, double edge_weight)
      : Error(ErrorKind::Truncation, w), edge_weight(edge_weight) {}
  double edge_weight;
};

struct UnsupportedQuench : Error {
  explicit UnsupportedQuench(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};

struct EmptyPeakSet : Error {
  explicit EmptyPeakSet(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

struct NoOverlap : Error {
  explicit NoOverlap(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

struct DegenerateFit : Error {
  explicit DegenerateFit(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};

}  // namespace qwork
