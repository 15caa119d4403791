#ifndef STABLE_LIMITS_ERRORS_HPP
#define STABLE_LIMITS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stable_limits {

// Error categories; mirrored one-to-one by the C API status codes.
enum class errc : int {
  ok = 0,
  domain = 1,             // parameter outside its admissible range
  shape = 2,              // dimension / index mismatch
  numeric = 3,            // quadrature or recursion failure
  empty_input = 4,
  degenerate_data = 5,    // constant data, zero-mass measure, ...
  envelope = 6,           // activation rejected by the envelope gate
  moment_divergence = 7,  // fractional moment of order >= alpha
  unsupported_range = 8,  // alpha <= 0.5 density/cdf/fit request
  io = 9,
  parse = 10,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace stable_limits

#endif
