#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsbps {

/// Failure categories raised by the library. Each maps onto one of the CLI
/// exit codes (usage = 2, data = 3, numeric = 4).
enum class Errc {
  invalid_dimension,
  invalid_domain,
  out_of_support,
  unsupported_order,
  invalid_perturbation,
  invalid_precision,
  invalid_argument,
  dimension_mismatch,
  numeric_failure,
  overflow,
  convergence_failure,
  initialization_failure,
  envelope_error,
  sampler_stall,
  unbounded_target,
  unsupported_operation,
  insufficient_draws,
  parse_error,
  validation_error,
  config_error,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

enum class ErrorClass { usage, data, numeric };

ErrorClass classify(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace gsbps
