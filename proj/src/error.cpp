#include "gsbps/error.hpp"

namespace gsbps {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::invalid_domain: return "invalid-domain";
    case Errc::out_of_support: return "out-of-support";
    case Errc::unsupported_order: return "unsupported-order";
    case Errc::invalid_perturbation: return "invalid-perturbation";
    case Errc::invalid_precision: return "invalid-precision";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::numeric_failure: return "numeric-failure";
    case Errc::overflow: return "overflow";
    case Errc::convergence_failure: return "convergence-failure";
    case Errc::initialization_failure: return "initialization-failure";
    case Errc::envelope_error: return "envelope-error";
    case Errc::sampler_stall: return "sampler-stall";
    case Errc::unbounded_target: return "unbounded-target";
    case Errc::unsupported_operation: return "unsupported-operation";
    case Errc::insufficient_draws: return "insufficient-draws";
    case Errc::parse_error: return "parse-error";
    case Errc::validation_error: return "validation-error";
    case Errc::config_error: return "config-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

ErrorClass classify(Errc code) noexcept {
  switch (code) {
    case Errc::config_error:
    case Errc::invalid_dimension:
    case Errc::unsupported_order:
    case Errc::invalid_perturbation:
    case Errc::invalid_argument:
    case Errc::unsupported_operation:
      return ErrorClass::usage;
    case Errc::invalid_domain:
    case Errc::out_of_support:
    case Errc::dimension_mismatch:
    case Errc::parse_error:
    case Errc::validation_error:
    case Errc::io_error:
    case Errc::insufficient_draws:
      return ErrorClass::data;
    default:
      return ErrorClass::numeric;
  }
}

}  // namespace gsbps
