#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rpnflat/derivative_transport.hpp"
#include "rpnflat/projective_atlas.hpp"
#include "rpnflat/schwartz_analysis.hpp"

namespace rpnflat {

// Every JSON document carries a versioned "schema" field. Multi-index rows
// always appear in graded-lex order.
nlohmann::json to_json(const SeminormReport& report);
nlohmann::json to_json(const FlatnessReport& report);
nlohmann::json to_json(const ExtensionReport& report);
nlohmann::json to_json(const TransportMatrix& matrix);
nlohmann::json to_json(const DerivativeTable& table);
nlohmann::json to_json(const std::vector<AtlasCheck>& checks);

// Plot-ready per-annulus / per-level sup tables.
std::string to_csv(const SeminormReport& report);
std::string to_csv(const FlatnessReport& report);
std::string to_csv(const ExtensionReport& report);

/// Writes to a sibling temporary file and renames it over `path`.
/// Throws std::runtime_error if the file cannot be written.
void write_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace rpnflat
