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

// Small CSV/number helpers shared by the exporters. Private to the library.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wban::detail {

/// Fixed-point decimal with `digits` fractional digits; never prints "-0.000".
std::string fixed(double v, int digits = 6);

/// Recovers an exact sampling interval from timestamps printed with six
/// fractional digits: when 1/dt is within 1e-4 of an integer rate, returns
/// 1/rate, otherwise dt unchanged.
double snap_interval(double dt);

/// Shortest round-trip representation, for JSON-free text outputs.
std::string shortest(double v);

std::string read_text_file(const std::filesystem::path &path);

/// Writes atomically enough for our purposes: truncate + write + check.
void write_text_file(const std::filesystem::path &path, std::string_view content);

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
};

/// Parses comma-separated text with a header line. Blank lines are skipped;
/// every row must have as many fields as the header (ParseError otherwise).
CsvTable parse_csv(std::string_view text);

/// Strict double parse of a CSV field; ParseError with `line` on failure.
double parse_number(std::string_view field, std::size_t line);

} // namespace wban::detail
