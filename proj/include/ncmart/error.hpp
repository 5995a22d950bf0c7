#pragma once

#include <stdexcept>
#include <string>

namespace ncmart {

enum class Errc {
  not_self_adjoint,
  eigen_failure,
  bad_exponent,
  domain_error,
  bad_params,
  not_a_subalgebra,
  index_out_of_range,
  symbol_too_large,
  symbol_not_commuting,
  symbol_not_adapted,
  filtration_mismatch,
  not_disjoint,
  reconstruction_mismatch,
  not_convex,
  not_q_concave,
  unknown_check,
  generator_failure,
  io_error,
};

/// CamelCase name of an error code, e.g. "NotSelfAdjoint".
const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ncmart
