#ifndef SPHDS_ERROR_HPP
#define SPHDS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sphds {

enum class Errc {
  invalid_resolution,
  domain,
  wrong_ordering,
  no_parent,
  invalid_window,
  undefined_direction,
  duplicate_pixel,
  missing_column,
  unknown_column,
  empty_data,
  insufficient_rows,
  parse,
  io,
};

/// Single exception type for the library; `code()` tells callers which
/// contract was violated so front ends can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sphds

#endif  // SPHDS_ERROR_HPP
