// wbanemu - body-area channel emulator and adaptive network simulator
// Copyright (C) 2026 The wbanemu authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wban {

/// Error classes surfaced by the library. The C API maps each one to a
/// distinct status code, and the CLI to a distinct exit code.
enum class ErrorKind {
    io,
    parse,
    structural,
    geometry,
    domain,
    insufficient_data,
    undefined_correlation,
    calibration,
    lookup,
    bounds,
    config,
    comparison,
};

const char *to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Syntax error in a text input; carries the 1-based line (or CSV row).
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &message)
        : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace wban
