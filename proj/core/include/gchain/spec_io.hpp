#pragma once

#include <filesystem>
#include <string>

#include "gchain/chains.hpp"

// JSON (de)serialization of chain specs, schema version 1:
//   {"schema": 1, "kind": "exchangeable" | "banded" | "toeplitz_mixture",
//    "k": modes per site, "A": [[...]],
//    exchangeable/banded: "B": [[...]], banded: "j": band,
//    toeplitz_mixture: "bands": [{"j": band, "p": weight, "B": [[...]]}]}
// Matrices are row-major 2k x 2k arrays in the interleaved quadrature order.
// parse(serialize(spec)) reproduces the spec exactly, including every double.

namespace gchain {

inline constexpr int kSchemaVersion = 1;

// Parse errors carry the position reported by the JSON parser; schema errors
// name the offending key.  Both raise std::invalid_argument.
ChainSpec parse_chain_spec(const std::string& text);
ChainSpec load_chain_spec(const std::filesystem::path& path);

// indent < 0 gives a single line.
std::string serialize_chain_spec(const ChainSpec& spec, int indent = -1);

} // namespace gchain
