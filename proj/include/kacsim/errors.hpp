#ifndef KACSIM_ERRORS_HPP
#define KACSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kacsim {

// Error taxonomy mirrored by the C API status codes and the CLI exit codes:
//   ConfigError      -> KS_ERR_CONFIG      (exit 2)
//   HypothesisError  -> KS_ERR_HYPOTHESIS  (exit 3)
//   NumericError     -> KS_ERR_NUMERIC     (exit 4)
//   UnsupportedError -> KS_ERR_UNSUPPORTED (exit 2)
//   StateError       -> KS_ERR_STATE       (exit 4)

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct HypothesisError : std::runtime_error {
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

struct StateError : std::runtime_error {
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kacsim

#endif
