// Copyright 2026 The TDM Pipeline Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace tdm {

// Error taxonomy. The CLI maps ValidationError/ParseError/DomainError to exit
// code 1 and everything else derived from Error to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input content: duplicate ids, out-of-range values, shape mismatches.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Arguments outside a function's mathematical domain.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : ValidationError(what + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// File system and decoding failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage threw while processing a frame.
class StageError : public Error {
 public:
  StageError(std::string stage, std::uint64_t frame_id, const std::string& what)
      : Error("stage '" + stage + "' failed on frame " +
              std::to_string(frame_id) + ": " + what),
        stage_(std::move(stage)),
        frame_id_(frame_id) {}

  const std::string& stage() const { return stage_; }
  std::uint64_t frame_id() const { return frame_id_; }

 private:
  std::string stage_;
  std::uint64_t frame_id_;
};

class WatchdogError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdm
