#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghost/config.hpp"
#include "ghost/pgm.hpp"

namespace ghost {

struct RunOptions {
  unsigned threads = 1;  // wall-clock only; results do not depend on it
  std::function<void(const std::string&)> log;  // frame counter and notes, may be empty
};

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// What a run produced. Written to manifest.json in the output directory.
///
/// The manifest holds wall-clock time and the thread count, so it is the one
/// file that differs between otherwise identical runs; it lists every other
/// file in the output directory but not itself.
struct RunManifest {
  nlohmann::json config;  // effective configuration after overrides
  std::uint64_t seed = 0;
  std::size_t frames_used = 0;
  unsigned threads = 1;
  double wall_clock_seconds = 0.0;
  std::vector<OutputFile> files;
  std::map<std::string, Pgm16Scaling> pgm_scaling;
  std::map<std::string, double> metrics;  // e.g. "dip.ghost_ref", "nrms.direct"
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Executes the configured mode and writes every output plus the manifest.
RunManifest run(const RunConfig& config, const RunOptions& options = {});

/// Loads `config_path`, applies the `key=value` overrides in order, validates
/// and runs. Throws ConfigError with field paths when validation fails.
RunManifest run(const std::filesystem::path& config_path, const std::vector<std::string>& overrides,
                const RunOptions& options = {});

std::string sha256_hex(const std::filesystem::path& file);

}  // namespace ghost
