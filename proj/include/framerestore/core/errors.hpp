#ifndef FRAMERESTORE_CORE_ERRORS_HPP
#define FRAMERESTORE_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace framerestore {

// Exit-code contract: 0 success, 2 config error, 3 data error, 4 numeric failure.
class Error : public std::runtime_error {
 public:
  Error(std::string message, int exit_code)
      : std::runtime_error(std::move(message)), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

// Invalid configuration: bad parameters, unreadable config, checkpoint mismatch.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::string message) : Error(std::move(message), 2) {}
};

// Invalid or missing data: manifests, images, detection files.
class DataError : public Error {
 public:
  explicit DataError(std::string message) : Error(std::move(message), 3) {}
};

// Non-finite losses or other numeric breakdowns.
class NumericError : public Error {
 public:
  explicit NumericError(std::string message) : Error(std::move(message), 4) {}
};

}  // namespace framerestore

#endif
