#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wenlr/solver.hpp"

namespace wenlr {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Canonical key=value view of a configuration. Keys match the CLI flag
/// names; doubles are printed with round-trip precision.
KeyValues config_to_key_values(const SolverConfig& cfg);

/// Sets one solver parameter from text. Returns false for keys that are not
/// solver parameters; throws std::invalid_argument for malformed values.
bool apply_config_value(SolverConfig& cfg, const std::string& key, const std::string& value);

/// Parses flat `key = value` text. '#' starts a comment; blank lines are
/// ignored. Throws std::invalid_argument on malformed lines.
KeyValues parse_config(std::istream& in);
KeyValues read_config_file(const std::filesystem::path& path);

/// 64-bit FNV-1a hash of the canonical key=value dump, as 16 hex digits.
std::string config_fingerprint(const KeyValues& canonical);
std::string config_fingerprint(const SolverConfig& cfg);

std::string format_double(double v);

}  // namespace wenlr
