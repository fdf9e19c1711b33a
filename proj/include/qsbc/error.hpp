// Copyright 2026 The qsbc Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsbc {

enum class ErrorKind {
    NotHermitian,
    NotPSD,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidAngle,
    ZeroShift,
    EmptyInput,
    ArityTooLarge,
    EmptyPreimage,
    MissingAlpha,
    ParamMismatch,
    NotCommitted,
    InvalidFlipPattern,
    NoAllOnesRow,
    RowDependence,
    LengthMismatch,
    DivisibilityViolation,
    InvalidArgument,
    ParseError,
};

inline std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorKind::InvalidAngle: return "InvalidAngle";
        case ErrorKind::ZeroShift: return "ZeroShift";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::ArityTooLarge: return "ArityTooLarge";
        case ErrorKind::EmptyPreimage: return "EmptyPreimage";
        case ErrorKind::MissingAlpha: return "MissingAlpha";
        case ErrorKind::ParamMismatch: return "ParamMismatch";
        case ErrorKind::NotCommitted: return "NotCommitted";
        case ErrorKind::InvalidFlipPattern: return "InvalidFlipPattern";
        case ErrorKind::NoAllOnesRow: return "NoAllOnesRow";
        case ErrorKind::RowDependence: return "RowDependence";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::DivisibilityViolation: return "DivisibilityViolation";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace qsbc
