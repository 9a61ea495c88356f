#pragma once

#include <stdexcept>
#include <string>

namespace gnp {

// Bad input or usage: missing files, malformed edge lists, out-of-range
// parameters. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure inside an otherwise well-formed computation (e.g. an iteration
// that does not converge). The CLI maps this to exit code 3.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gnp
