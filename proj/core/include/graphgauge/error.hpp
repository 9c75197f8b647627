#pragma once

#include <stdexcept>
#include <string>

namespace graphgauge {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix handed to a projection does not lie in the span of the generators.
class SpanError : public Error {
 public:
  SpanError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A group element failed its unitarity / orthogonality check.
class GroupError : public Error {
 public:
  GroupError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A vertex was used in a role it does not have, or across a missing edge.
class GraphError : public Error {
 public:
  using Error::Error;
};

// Configuration validation failure; field() names the offending parameter.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A report could not be written to its destination.
class OutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphgauge
