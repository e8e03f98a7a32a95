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


#include "wban/error.hpp"

namespace wban {

const char *to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::structural: return "structural";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::domain: return "domain";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::undefined_correlation: return "undefined_correlation";
    case ErrorKind::calibration: return "calibration";
    case ErrorKind::lookup: return "lookup";
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::config: return "config";
    case ErrorKind::comparison: return "comparison";
    }
    return "unknown";
}

} // namespace wban
