#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghost/core.hpp"
#include "ghost/correlate.hpp"
#include "ghost/optics.hpp"
#include "ghost/speckle.hpp"

namespace ghost {

enum class RunMode { direct, ghost, both, apsf, fig3, sweep };

std::string to_string(RunMode mode);

struct Diagnostic {
  enum class Severity { warning, error };
  Severity severity;
  std::string path;  // dotted field path, empty for whole-config problems
  std::string message;

  std::string str() const;
};

/// Raised by parse_run_config; what() lists every error diagnostic.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ObjectSpec {
  enum class Kind { double_slit, pinhole, mask, open, opaque };
  Kind kind = Kind::double_slit;
  double slit_width = 0.0;
  double separation = 0.0;
  double position = 0.0;
  std::filesystem::path mask_path;  // resolved against the config's directory
  double pixel_pitch = 0.0;
  double threshold = 0.5;
};

/// A reference arm to correlate against, with the label used in file names.
struct ReferenceVariant {
  std::string label;
  ArmGeometry arm;
};

/// Fully validated run description.
struct RunConfig {
  RunMode mode;
  SystemConfig system;
  ObjectSpec object;
  std::vector<ReferenceVariant> sweep;
  std::filesystem::path output_dir;
  bool emit_matrix = false;
  double profile_half_width;  // written profiles cover |x_object| <= this
  nlohmann::json effective;   // the config after overrides, echoed into the manifest

  /// Reference arms the selected mode correlates against, in output order:
  /// the sweep when one is given, else the reference arm labelled "ref".
  /// fig3 yields B (the reference arm) and C (its aperture doubled).
  std::vector<ReferenceVariant> reference_variants() const;
};

nlohmann::json load_config_json(const std::filesystem::path& path);

/// Applies "dotted.path=value". The value is taken as JSON when it parses
/// (numbers, booleans, quoted strings, objects) and as a plain string
/// otherwise, so `test_arm.aperture=6mm` and `frames=100` both work.
/// Throws ConfigError for a malformed override.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Full schema and physics validation: field types and units, thin-lens
/// equations, aperture/grid fit, lens-phase and Fresnel sampling bounds,
/// object resolvability and guard band, matched-diagonal exactness, source
/// size relative to the imaging apertures. Never throws.
std::vector<Diagnostic> validate_config(const nlohmann::json& config,
                                        const std::filesystem::path& base_dir);

/// Reads and validates a config file without running it.
std::vector<Diagnostic> validate(const std::filesystem::path& config_path);

/// Builds the run description. Throws ConfigError when validate_config
/// reports any error.
RunConfig parse_run_config(const nlohmann::json& config, const std::filesystem::path& base_dir);

/// Builds the object named by `spec` on `grid`.
std::shared_ptr<const TransmissionFunction> make_object(const ObjectSpec& spec, const Grid& grid,
                                                        int dims);

}  // namespace ghost
