#ifndef LXT_ERRORS_HPP_
#define LXT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lxt {

// Malformed or missing input data (files, rows, bundles). CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or usage. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN/Inf detected during training or at a tensor boundary. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lxt

#endif  // LXT_ERRORS_HPP_
