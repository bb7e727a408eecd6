#include "fewturn/error.hpp"

namespace fewturn {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::degenerate_geometry: return "degenerate_geometry";
    case Errc::empty_network: return "empty_network";
    case Errc::invalid_input: return "invalid_input";
    case Errc::mismatch: return "mismatch";
    case Errc::unreachable: return "unreachable";
    case Errc::off_network: return "off_network";
    case Errc::infeasible: return "infeasible";
    case Errc::zero_denominator: return "zero_denominator";
    case Errc::io: return "io";
    case Errc::format: return "format";
  }
  return "unknown";
}

}  // namespace fewturn
