#pragma once

#include <stdexcept>
#include <string>

namespace tic {

// All library errors carry a stable code string; the CLI prints it as a
// machine-parsable prefix ("error: E_DIM: ...") and exits non-zero.
class Error : public std::runtime_error {
 public:
  Error(const char* code, const std::string& msg)
      : std::runtime_error(std::string(code) + ": " + msg), code_(code) {}
  const char* code() const { return code_; }

 private:
  const char* code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error("E_DIM", msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error("E_CONFIG", msg) {}
};

class TapeError : public Error {
 public:
  explicit TapeError(const std::string& msg) : Error("E_TAPE", msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error("E_IO", msg) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error("E_DATA", msg) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error("E_NUMERIC", msg) {}
};

class OracleError : public Error {
 public:
  explicit OracleError(const std::string& msg) : Error("E_ORACLE", msg) {}
};

inline void check_dim(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

inline void check_config(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace tic
