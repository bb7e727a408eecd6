#pragma once

#include <stdexcept>
#include <string>

namespace fewturn {

enum class Errc {
  degenerate_geometry,
  empty_network,
  invalid_input,
  mismatch,
  unreachable,
  off_network,
  infeasible,
  zero_denominator,
  io,
  format,
};

const char* to_string(Errc code) noexcept;

/// Library-wide exception. Every failure carries a category so callers (the
/// CLI, the HTTP layer) can map it to an exit status or response code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fewturn
