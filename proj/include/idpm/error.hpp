//
// Copyright 2026 The idpm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef IDPM_ERROR_HPP_
#define IDPM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace idpm {

enum class ErrorCode {
  kParameter,         // invalid argument value (k, epsilon, alpha, ...)
  kSchema,            // missing or duplicated column
  kParse,             // cell that is not a finite number
  kDomain,            // value outside its attribute domain
  kAlignment,         // datasets whose rows or columns do not line up
  kDegenerate,        // computation undefined for the data (zero variance)
  kInsufficientData,  // too few records
  kIo,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter:
      return "parameter error";
    case ErrorCode::kSchema:
      return "schema error";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kDomain:
      return "domain violation";
    case ErrorCode::kAlignment:
      return "alignment error";
    case ErrorCode::kDegenerate:
      return "degenerate data";
    case ErrorCode::kInsufficientData:
      return "insufficient data";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "error";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " +
                           message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code,
                    const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace idpm

#endif  // IDPM_ERROR_HPP_
