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

#include <string>
#include <string_view>

#include "qsbc/error.hpp"

namespace qsbc {

/// P1: two non-orthogonal states. P2: conjugate coding. P3: conjugate coding
/// with published referential bits. P5: the basis string carries the bit.
/// P6: relative phase. P8: conjugate coding behind a linear code.
enum class ProtocolId { P1, P2, P3, P5, P6, P8 };

inline std::string_view to_string(ProtocolId id) {
    switch (id) {
        case ProtocolId::P1: return "P1";
        case ProtocolId::P2: return "P2";
        case ProtocolId::P3: return "P3";
        case ProtocolId::P5: return "P5";
        case ProtocolId::P6: return "P6";
        case ProtocolId::P8: return "P8";
    }
    return "?";
}

inline ProtocolId parse_protocol(std::string_view text) {
    for (auto id : {ProtocolId::P1, ProtocolId::P2, ProtocolId::P3, ProtocolId::P5, ProtocolId::P6, ProtocolId::P8}) {
        if (text == to_string(id)) {
            return id;
        }
    }
    throw Error(ErrorKind::ParseError, "unknown protocol '" + std::string(text) + "'");
}

}  // namespace qsbc
