#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "visrec/segmentation.hpp"

namespace visrec::cli {

enum class OutputFormat { human, tsv };

/// Values given on the command line; unset fields fall through to the
/// environment, then the config file, then defaults.
struct FlagValues {
  std::optional<std::string> model;
  std::optional<std::string> labels;
  std::optional<std::string> config;
  std::optional<std::string> workers;
  std::optional<std::string> format;
  std::optional<std::string> server;
};

struct Settings {
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> config;
  std::optional<std::string> server;
  int workers = 4;
  OutputFormat format = OutputFormat::human;
  SegmentationConfig segmentation;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

/// Throws Error(invalid_argument) on unparsable workers/format values and
/// file errors from the config file.
Settings resolve_settings(const FlagValues& flags, const EnvLookup& env = process_env);

}  // namespace visrec::cli
