#pragma once

#include <stdexcept>
#include <string>

namespace galgeo {

// Error taxonomy shared with the CLI exit codes: size_cap_exceeded maps to
// exit 3, cross_check_disagreement to exit 4, everything else to exit 1.
// Usage errors never reach this layer (the CLI parser exits 2 on its own).
enum class Errc {
  non_prime_characteristic,
  size_cap_exceeded,
  layer_mismatch,
  division_by_zero,
  not_in_subfield,
  ambient_mismatch,
  tower_mismatch,
  duplicate_exponent,
  exponent_out_of_range,
  arity_mismatch,
  non_invertible_map,
  not_pseudoregulus_type,
  transversal_count_mismatch,
  not_maximum_h_scattered,
  dimension_mismatch,
  spread_axiom_violation,
  no_valid_theta,
  cross_check_disagreement,
  bad_input,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace galgeo
