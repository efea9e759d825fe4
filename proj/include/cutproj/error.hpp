// Error type shared by every module of the library.

#ifndef CUTPROJ_ERROR_HPP_
#define CUTPROJ_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cutproj {

enum class ErrorKind {
  InvalidArgument,
  SingularBasis,
  CapacityExceeded,
  InjectivityFailed,
  NotAdmissible,
  NonSmoothWeight,
  QuadratureNotConverged,
  NoCandidatesInRange,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}
  Error(ErrorKind kind, const std::string& message, std::string field)
    : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const { return kind_; }
  // Dotted path of the offending configuration field, if any.
  const std::string& field() const { return field_; }
  // Integer witness (e.g. lattice coordinates) attached by some checks.
  const std::vector<std::int64_t>& witness() const { return witness_; }
  Error& with_witness(std::vector<std::int64_t> w) {
    witness_ = std::move(w);
    return *this;
  }

private:
  ErrorKind kind_;
  std::string field_;
  std::vector<std::int64_t> witness_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cutproj

#endif  // CUTPROJ_ERROR_HPP_
