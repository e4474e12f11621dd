// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VSR_ERROR_HPP
#define VSR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vsr {

// Failure classes map 1:1 onto C API status codes and CLI exit codes.
enum class ErrorClass {
  Config = 1,   // bad config file, flags, unknown keys, invalid hyperparams
  Data = 2,     // missing/corrupt files, shape mismatches in user data
  Numeric = 3,  // NaN/Inf, gradcheck failure, divergence
  Invalid = 4,  // API misuse (null handle, bad argument)
  Internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string msg) : std::runtime_error(std::move(msg)), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

inline Error config_error(std::string msg) { return Error(ErrorClass::Config, std::move(msg)); }
inline Error data_error(std::string msg) { return Error(ErrorClass::Data, std::move(msg)); }
inline Error numeric_error(std::string msg) { return Error(ErrorClass::Numeric, std::move(msg)); }
inline Error invalid_error(std::string msg) { return Error(ErrorClass::Invalid, std::move(msg)); }

}  // namespace vsr

#endif  // VSR_ERROR_HPP
