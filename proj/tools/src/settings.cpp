#include "settings.hpp"

#include <cstdlib>

#include "visrec/error.hpp"

namespace visrec::cli {

namespace {

int parse_workers(const std::string& text) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n < 1) {
    throw Error(Errc::invalid_argument, "workers must be a positive integer, got '" + text + "'");
  }
  return n;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "human") return OutputFormat::human;
  if (text == "tsv") return OutputFormat::tsv;
  throw Error(Errc::invalid_argument, "format must be human or tsv, got '" + text + "'");
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

Settings resolve_settings(const FlagValues& flags, const EnvLookup& env) {
  Settings s;
  std::map<std::string, std::string> file;
  if (auto cfg = flags.config ? flags.config : env("VISREC_CONFIG")) {
    s.config = *cfg;
    file = read_key_value_file(*cfg);
  }

  auto pick = [&](const std::optional<std::string>& flag, const char* env_name,
                  const char* key) -> std::optional<std::string> {
    if (flag) return flag;
    if (auto v = env(env_name)) return v;
    if (auto it = file.find(key); it != file.end()) return it->second;
    return std::nullopt;
  };

  if (auto v = pick(flags.model, "VISREC_MODEL", "model")) s.model = *v;
  if (auto v = pick(flags.labels, "VISREC_LABELS", "labels")) s.labels = *v;
  s.server = pick(flags.server, "VISREC_SERVER", "server");
  if (auto v = pick(flags.workers, "VISREC_WORKERS", "workers")) s.workers = parse_workers(*v);
  if (auto v = pick(flags.format, "VISREC_FORMAT", "format")) s.format = parse_format(*v);
  s.segmentation = segmentation_config_from(file);
  return s;
}

}  // namespace visrec::cli
