#pragma once

#include <string>

#include "abt/encoding.hpp"

namespace abt {

// Stable JSON forms used by the command-line tools. Doubles are emitted with
// round-trip precision, so identical inputs serialize byte-identically.

std::string sequence_to_json(const PhaseSequence& seq);
PhaseSequence sequence_from_json(const std::string& text);

std::string register_to_json(const EncodedRegister& reg);
EncodedRegister register_from_json(const std::string& text);

}  // namespace abt
