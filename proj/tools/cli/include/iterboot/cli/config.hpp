#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "iterboot/experiments.hpp"

namespace iterboot::cli {

/// Malformed or invalid configuration; the message names the offending field.
class ConfigFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::optional<std::string> csv;
  std::optional<std::string> json;
  std::optional<std::string> svg;
};

struct CliConfig {
  std::string kind;  // risk | normality | clt | sweep | oracle-check
  experiments::ExperimentConfig experiment;
  OutputPaths outputs;
};

/// Parses and validates a JSON config document. Unknown keys are rejected.
CliConfig parse_config(const std::string& json_text);

/// Reads `path` and parses it. Throws std::ios_base::failure when the file
/// cannot be read.
CliConfig load_config(const std::filesystem::path& path);

}  // namespace iterboot::cli
