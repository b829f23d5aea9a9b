/*
 * Copyright (c) 2026, The seqmix Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace seqmix {

enum class ErrorCode {
  kShape = 1,
  kParam,
  kNumeric,
  kProtocol,
  kLayout,
  kIo,
  kUsage,
};

const char *error_code_name(ErrorCode code) noexcept;

// All library failures derive from Error; the C API maps `code()` onto its
// status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string &what) : Error(ErrorCode::kShape, what) {}
};

class ParamError : public Error {
 public:
  explicit ParamError(const std::string &what) : Error(ErrorCode::kParam, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string &what) : Error(ErrorCode::kNumeric, what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string &what) : Error(ErrorCode::kProtocol, what) {}
};

class LayoutError : public Error {
 public:
  explicit LayoutError(const std::string &what) : Error(ErrorCode::kLayout, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error(ErrorCode::kIo, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string &what) : Error(ErrorCode::kUsage, what) {}
};

}  // namespace seqmix
