#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mbrisk/model.hpp"

namespace mbrisk {

// Model files are JSON documents:
//
//   {
//     "states": 2,
//     "claims": { "0": [[0.5, 0.1], [0.2, 0.2]], "1": [...], "2": [...] },
//     "initial": "stationary"            // or [0.3, 0.7]
//   }
//
// Claim-size keys must be non-negative integers written as strings. Each
// matrix is row-major, either nested ([[..],[..]]) or flat with N*N entries.
// Parsing checks the schema only; call validate() for the model invariants.

/// Throws ValidationError on malformed documents.
ModelSpec parse_model(std::string_view text);

/// Throws IoError if the file cannot be read, ValidationError if malformed.
ModelSpec load_model(const std::filesystem::path& path);

/// Canonical document (nested matrices, full double precision).
/// parse_model(dump_model(s)) == s.
std::string dump_model(const ModelSpec& spec);

}  // namespace mbrisk
