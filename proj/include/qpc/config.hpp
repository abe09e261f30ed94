#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qpc/harness.hpp"

namespace qpc {

inline constexpr int kConfigSchemaVersion = 1;

enum class OutputFormat { Json, Csv };

std::string_view to_string(OutputFormat format) noexcept;
OutputFormat output_format_from_string(std::string_view text);

struct OutputSpec {
  std::optional<std::string> path;
  OutputFormat format = OutputFormat::Json;
};

struct ConfigDocument {
  Scenario scenario;
  bool has_seed = false;
  OutputSpec output;
};

// Unknown keys and wrongly typed values raise ConfigError with the dotted
// key path. The returned scenario has already been validated.
ConfigDocument parse_config(const nlohmann::json& doc);
ConfigDocument load_config(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& doc);

nlohmann::json adversary_to_json(const AdversaryConfig& config);

}  // namespace qpc
