#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hlma {

// Argument outside the mathematical domain of a kernel (e.g. elliptic modulus >= 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid geometric description (nonpositive radius, eps >= 1, ...).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Coincident or intersecting filaments; the coupling integral is not defined.
class SingularGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky/LU breakdown of the element inductance matrix.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, std::ptrdiff_t pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  std::ptrdiff_t pivot() const noexcept { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

// A reduced model is used outside the parameter range where it is defined.
class ModelValidityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoPullInError : public std::runtime_error {
 public:
  NoPullInError() : std::runtime_error("no pull-in detected") {}
};

// Malformed scenario input; the message carries the JSON path of the offending field.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Warning sink. Defaults to stderr; tests and bindings may redirect it.
using WarningHandler = std::function<void(std::string_view)>;
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace hlma
