// Copyright 2026 The Jante Authors
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

#ifndef JANTE_ERRORS_HPP_
#define JANTE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace jante {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kDegenerateConfiguration,
  kAttemptsExhausted,
  kPointNotInKeep,
  kPointOutsideBody,
  kUnboundedBody,
  kConfig,
  kIo,
  kInvariantViolated,
};

const char* error_code_name(ErrorCode code);

// All failures raised by the library carry one of the codes above so the C
// layer can translate them into status values without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

// The const char* overload keeps hot checks free of string construction.
inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) fail(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace jante

#endif  // JANTE_ERRORS_HPP_
