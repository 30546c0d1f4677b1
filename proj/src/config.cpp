#include "ghost/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ghost/pgm.hpp"

namespace ghost {

using nlohmann::json;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::direct: return "direct";
    case RunMode::ghost: return "ghost";
    case RunMode::both: return "both";
    case RunMode::apsf: return "apsf";
    case RunMode::fig3: return "fig3";
    case RunMode::sweep: return "sweep";
  }
  return "?";
}

std::string Diagnostic::str() const {
  std::string out = severity == Severity::error ? "error: " : "warning: ";
  if (!path.empty()) out += path + ": ";
  return out + message;
}

namespace {

std::string join_errors(const std::vector<Diagnostic>& diags) {
  std::string out = "invalid configuration";
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::error) out += "\n  " + d.str();
  }
  return out;
}

std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Collects diagnostics while reading a JSON config.
class Reader {
 public:
  std::vector<Diagnostic> diags;

  void error(const std::string& path, const std::string& msg) {
    diags.push_back({Diagnostic::Severity::error, path, msg});
  }
  void warn(const std::string& path, const std::string& msg) {
    diags.push_back({Diagnostic::Severity::warning, path, msg});
  }
  bool ok() const {
    for (const auto& d : diags) {
      if (d.severity == Diagnostic::Severity::error) return false;
    }
    return true;
  }

  void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
    if (!obj.is_object()) return;
    for (const auto& [key, _] : obj.items()) {
      bool found = false;
      for (const char* k : known) found = found || key == k;
      if (!found) warn(join_path(path, key), "unknown key (ignored)");
    }
  }

  const json* member(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (obj.is_object()) {
      const auto it = obj.find(key);
      if (it != obj.end() && !it->is_null()) return &*it;
    }
    if (required) error(join_path(path, key), "missing required field");
    return nullptr;
  }

  std::optional<double> length(const json& obj, const std::string& key, const std::string& path,
                               bool required = true) {
    const json* v = member(obj, key, path, required);
    if (!v) return std::nullopt;
    const std::string p = join_path(path, key);
    try {
      double m = 0.0;
      if (v->is_number()) {
        m = v->get<double>();
      } else if (v->is_string()) {
        m = parse_length(v->get<std::string>());
      } else {
        error(p, "expected a length such as \"3 mm\"");
        return std::nullopt;
      }
      if (!(m > 0.0) || !std::isfinite(m)) {
        error(p, "length must be positive");
        return std::nullopt;
      }
      return m;
    } catch (const DomainError& e) {
      error(p, e.what());
      return std::nullopt;
    }
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               std::optional<double> fallback) {
    const json* v = member(obj, key, path, !fallback.has_value());
    if (!v) return fallback;
    if (!v->is_number()) {
      error(join_path(path, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::uint64_t> integer(const json& obj, const std::string& key,
                                       const std::string& path, std::optional<std::uint64_t> fallback) {
    const json* v = member(obj, key, path, !fallback.has_value());
    if (!v) return fallback;
    if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
      error(join_path(path, key), "expected a non-negative integer");
      return std::nullopt;
    }
    return v->get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path,
                                    std::optional<std::string> fallback) {
    const json* v = member(obj, key, path, !fallback.has_value());
    if (!v) return fallback;
    if (!v->is_string()) {
      error(join_path(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& key, const std::string& path,
                              bool fallback) {
    const json* v = member(obj, key, path, false);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      error(join_path(path, key), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }
};

struct RawArm {
  std::optional<double> d_object, d_image, focal_length, aperture;
};

RawArm read_arm(Reader& rd, const json& root, const std::string& key) {
  RawArm arm;
  const json* obj = rd.member(root, key, "", true);
  if (!obj) return arm;
  if (!obj->is_object()) {
    rd.error(key, "expected an object");
    return arm;
  }
  rd.check_keys(*obj, key, {"d_object", "d_image", "focal_length", "aperture"});
  arm.d_object = rd.length(*obj, "d_object", key);
  arm.d_image = rd.length(*obj, "d_image", key);
  arm.focal_length = rd.length(*obj, "focal_length", key);
  arm.aperture = rd.length(*obj, "aperture", key);
  return arm;
}

std::optional<ArmGeometry> check_arm(Reader& rd, const RawArm& raw, const std::string& path) {
  if (!raw.d_object || !raw.d_image || !raw.focal_length || !raw.aperture) return std::nullopt;
  const double residual = ArmGeometry::lens_residual(*raw.d_object, *raw.d_image, *raw.focal_length);
  if (std::abs(residual) > kThinLensTolerance) {
    std::ostringstream msg;
    msg << "thin-lens equation violated: (1/d_object + 1/d_image - 1/focal_length) * focal_length = "
        << residual << " (tolerance " << kThinLensTolerance << ")";
    rd.error(path, msg.str());
    return std::nullopt;
  }
  return ArmGeometry(*raw.d_object, *raw.d_image, *raw.focal_length, *raw.aperture);
}

std::string variant_label(const ArmGeometry& arm) {
  return "f" + short_number(arm.focal_length() * 1e3) + "mm_L" + short_number(arm.aperture() * 1e3) +
         "mm";
}

std::optional<PropagationMethod> parse_method(const std::string& s) {
  if (s == "auto") return PropagationMethod::automatic;
  if (s == "impulse_response") return PropagationMethod::impulse_response;
  if (s == "transfer_function") return PropagationMethod::transfer_function;
  return std::nullopt;
}

std::optional<RunMode> parse_mode(const std::string& s) {
  if (s == "direct") return RunMode::direct;
  if (s == "ghost") return RunMode::ghost;
  if (s == "both") return RunMode::both;
  if (s == "apsf") return RunMode::apsf;
  if (s == "fig3") return RunMode::fig3;
  if (s == "sweep") return RunMode::sweep;
  return std::nullopt;
}

// Everything validate_config and parse_run_config share. `built` is filled
// only when no error was found.
struct ParseResult {
  std::vector<Diagnostic> diagnostics;
  std::optional<RunConfig> built;
};

ParseResult parse(const json& root, const std::filesystem::path& base_dir) {
  Reader rd;
  if (!root.is_object()) {
    rd.error("", "configuration must be a JSON object");
    return {rd.diags, std::nullopt};
  }
  rd.check_keys(root, "", {"mode", "wavelength", "source_to_object", "test_arm", "reference_arm",
                           "source", "object", "grid", "frames", "seed", "propagation",
                           "output_dir", "emit_matrix", "profile_half_width", "sweep"});

  std::optional<RunMode> mode;
  if (const auto s = rd.string(root, "mode", "", std::string("both"))) {
    mode = parse_mode(*s);
    if (!mode) rd.error("mode", "unknown mode '" + *s + "' (direct, ghost, both, apsf, fig3, sweep)");
  }
  const auto wavelength = rd.length(root, "wavelength", "");
  const bool needs_reference = mode && *mode != RunMode::fig3 && *mode != RunMode::apsf;
  const auto d0 = rd.length(root, "source_to_object", "", needs_reference);

  const RawArm test_raw = read_arm(rd, root, "test_arm");
  const auto test_arm = check_arm(rd, test_raw, "test_arm");
  std::optional<ArmGeometry> ref_arm;
  if (root.contains("reference_arm") || needs_reference) {
    ref_arm = check_arm(rd, read_arm(rd, root, "reference_arm"), "reference_arm");
  } else {
    ref_arm = test_arm;
  }

  // Grid.
  std::optional<Grid> grid;
  int dims = 1;
  if (const json* g = rd.member(root, "grid", "", true)) {
    rd.check_keys(*g, "grid", {"samples", "span", "spacing", "dims"});
    const auto samples = rd.integer(*g, "samples", "grid", std::nullopt);
    const auto d = rd.integer(*g, "dims", "grid", 1);
    if (d && *d != 1 && *d != 2) rd.error("grid.dims", "must be 1 or 2");
    if (d) dims = static_cast<int>(*d);
    std::optional<double> span;
    std::optional<double> spacing;
    if (g->contains("span")) span = rd.length(*g, "span", "grid");
    if (g->contains("spacing")) spacing = rd.length(*g, "spacing", "grid");
    if (g->contains("span") && g->contains("spacing")) {
      rd.error("grid", "give either span or spacing, not both");
    } else if (!g->contains("span") && !g->contains("spacing")) {
      rd.error("grid", "missing span or spacing");
    }
    if (samples && *samples < 2) rd.error("grid.samples", "need at least 2 samples");
    if (samples && *samples >= 2 && (span || spacing)) {
      grid = span ? make_grid(*span, *samples) : Grid(*samples, *spacing);
    }
  }

  // Source.
  SourceSpec source;
  if (const json* s = rd.member(root, "source", "", false)) {
    rd.check_keys(*s, "source", {"extent", "coherence_length", "profile", "gaussian_width", "mean_intensity"});
    if (s->contains("extent") && !((*s)["extent"].is_string() && (*s)["extent"] == "full")) {
      source.extent = rd.length(*s, "extent", "source");
    }
    if (s->contains("coherence_length") &&
        !((*s)["coherence_length"].is_string() && (*s)["coherence_length"] == "grid")) {
      source.coherence_length = rd.length(*s, "coherence_length", "source");
    }
    if (const auto prof = rd.string(*s, "profile", "source", std::string("uniform"))) {
      if (*prof == "gaussian") {
        source.profile = IntensityProfile::gaussian;
        source.gaussian_width = rd.length(*s, "gaussian_width", "source").value_or(0.0);
      } else if (*prof != "uniform") {
        rd.error("source.profile", "expected uniform or gaussian");
      }
    }
    if (const auto i0 = rd.number(*s, "mean_intensity", "source", 1.0)) {
      if (!(*i0 > 0.0)) rd.error("source.mean_intensity", "must be positive");
      source.mean_intensity = *i0;
    }
  }

  // Object.
  ObjectSpec object;
  if (const json* o = rd.member(root, "object", "", true)) {
    const auto type = rd.string(*o, "type", "object", std::nullopt);
    if (type == "double_slit") {
      rd.check_keys(*o, "object", {"type", "slit_width", "separation"});
      object.kind = ObjectSpec::Kind::double_slit;
      object.slit_width = rd.length(*o, "slit_width", "object").value_or(0.0);
      object.separation = rd.length(*o, "separation", "object").value_or(0.0);
    } else if (type == "pinhole") {
      rd.check_keys(*o, "object", {"type", "position"});
      object.kind = ObjectSpec::Kind::pinhole;
      const json* p = rd.member(*o, "position", "object", false);
      if (p && p->is_string()) {
        const std::string txt = p->get<std::string>();
        const bool neg = !txt.empty() && txt.front() == '-';
        try {
          object.position = (neg ? -1.0 : 1.0) * parse_length(neg ? txt.substr(1) : txt);
        } catch (const DomainError& e) {
          rd.error("object.position", e.what());
        }
      } else if (p && p->is_number()) {
        object.position = p->get<double>();
      } else if (p) {
        rd.error("object.position", "expected a length");
      }
    } else if (type == "mask") {
      rd.check_keys(*o, "object", {"type", "path", "pixel_pitch", "threshold"});
      object.kind = ObjectSpec::Kind::mask;
      if (const auto path = rd.string(*o, "path", "object", std::nullopt)) {
        const std::filesystem::path p(*path);
        object.mask_path = p.is_absolute() ? p : base_dir / p;
      }
      object.pixel_pitch = rd.length(*o, "pixel_pitch", "object").value_or(0.0);
      object.threshold = rd.number(*o, "threshold", "object", 0.5).value_or(0.5);
      if (object.threshold < 0.0 || object.threshold > 1.0) {
        rd.error("object.threshold", "must lie in [0, 1]");
      }
    } else if (type == "open" || type == "opaque") {
      rd.check_keys(*o, "object", {"type"});
      object.kind = type == "open" ? ObjectSpec::Kind::open : ObjectSpec::Kind::opaque;
    } else if (type) {
      rd.error("object.type", "unknown object type '" + *type + "' (double_slit, pinhole, mask, open, opaque)");
    }
  }

  const auto frames = rd.integer(root, "frames", "", 1000);
  const auto seed = rd.integer(root, "seed", "", 1);
  std::optional<PropagationMethod> method;
  if (const auto m = rd.string(root, "propagation", "", std::string("auto"))) {
    method = parse_method(*m);
    if (!method) rd.error("propagation", "expected auto, impulse_response or transfer_function");
  }
  const auto output_dir = rd.string(root, "output_dir", "", std::string("out"));
  const auto emit_matrix = rd.boolean(root, "emit_matrix", "", false);
  std::optional<double> half_width = 400e-6;
  if (root.contains("profile_half_width")) half_width = rd.length(root, "profile_half_width", "");

  // Sweep variants.
  std::vector<ReferenceVariant> sweep;
  if (const json* s = rd.member(root, "sweep", "", false)) {
    if (!s->is_array()) {
      rd.error("sweep", "expected a list of reference-arm variants");
    } else {
      for (std::size_t k = 0; k < s->size(); ++k) {
        const std::string path = "sweep[" + std::to_string(k) + "]";
        const json& e = (*s)[k];
        rd.check_keys(e, path, {"label", "focal_length", "aperture", "magnification", "d_object", "d_image"});
        const auto f = rd.length(e, "focal_length", path);
        const auto l = rd.length(e, "aperture", path);
        if (!f || !l) continue;
        std::optional<ArmGeometry> arm;
        if (e.contains("d_object") || e.contains("d_image")) {
          RawArm raw{rd.length(e, "d_object", path), rd.length(e, "d_image", path), f, l};
          arm = check_arm(rd, raw, path);
        } else {
          const double m = rd.number(e, "magnification", path,
                                     ref_arm ? ref_arm->magnification() : 1.0).value_or(1.0);
          if (!(m > 0.0)) {
            rd.error(path + ".magnification", "must be positive");
            continue;
          }
          arm = ArmGeometry::from_magnification(*f, *l, m);
        }
        if (!arm) continue;
        const auto label = rd.string(e, "label", path, variant_label(*arm));
        sweep.push_back({label.value_or(variant_label(*arm)), *arm});
      }
    }
  }

  // Cross-field physics checks.
  if (mode == RunMode::sweep && sweep.empty()) rd.error("sweep", "mode sweep needs at least one variant");
  if (emit_matrix.value_or(false) && dims != 1) rd.error("emit_matrix", "the full correlation matrix is 1-D only");
  if (frames && mode) {
    const bool ghost_mode = *mode == RunMode::ghost || *mode == RunMode::both || *mode == RunMode::sweep;
    if (ghost_mode && *frames < 2) rd.error("frames", "the correlation estimator needs at least 2 frames");
    if (*mode == RunMode::direct && *frames < 1) rd.error("frames", "need at least 1 frame");
  }
  if (dims == 2 && test_arm && std::abs(test_arm->magnification() - 1.0) > 1e-9) {
    rd.error("test_arm", "2-D runs need unit test-arm magnification (d_object = d_image)");
  }
  if (object.kind == ObjectSpec::Kind::mask && dims != 2) rd.error("object", "mask objects need grid.dims = 2");
  if ((object.kind == ObjectSpec::Kind::double_slit || object.kind == ObjectSpec::Kind::pinhole) &&
      dims != 1) {
    rd.error("object", "slit and pinhole objects need grid.dims = 1");
  }

  std::shared_ptr<const TransmissionFunction> transmission;
  if (grid && wavelength) {
    const double dx = grid->dx();
    const double lam = *wavelength;
    std::vector<std::pair<std::string, ArmGeometry>> arms;
    if (test_arm) arms.emplace_back("test_arm", *test_arm);
    if (ref_arm && needs_reference) arms.emplace_back("reference_arm", *ref_arm);
    for (std::size_t k = 0; k < sweep.size(); ++k) {
      arms.emplace_back("sweep[" + std::to_string(k) + "]", sweep[k].arm);
    }
    for (const auto& [path, arm] : arms) {
      if (arm.aperture() > grid->span() * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "aperture " << arm.aperture() << " m exceeds the grid span " << grid->span() << " m";
        rd.error(path + ".aperture", msg.str());
      }
      const double needed_dx = lam * arm.focal_length() / arm.aperture();
      if (dx > needed_dx * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "lens phase aliases at the aperture edge: grid spacing " << dx
            << " m exceeds lambda f / aperture = " << needed_dx << " m";
        rd.error(path, msg.str());
      }
    }
    if (method && *method != PropagationMethod::automatic && mode != RunMode::fig3 &&
        mode != RunMode::apsf) {
      std::vector<std::pair<std::string, double>> distances;
      if (d0) distances.emplace_back("source_to_object", *d0);
      for (const auto& [path, arm] : arms) {
        distances.emplace_back(path + ".d_object", arm.d_object());
        distances.emplace_back(path + ".d_image", arm.d_image());
      }
      for (const auto& [path, d] : distances) {
        try {
          FresnelPropagator check(*grid, lam, d, *method);
        } catch (const SamplingError& e) {
          rd.error(path, e.what());
        }
      }
    }
    try {
      source.validate(*grid);
    } catch (const DomainError& e) {
      rd.error("source", e.what());
    }

    // Matched diagonal x_r = (M_r / M_t) x_t must hit detector samples.
    if (test_arm && needs_reference) {
      std::vector<std::pair<std::string, ArmGeometry>> refs;
      if (ref_arm) refs.emplace_back("reference_arm", *ref_arm);
      for (std::size_t k = 0; k < sweep.size(); ++k) {
        refs.emplace_back("sweep[" + std::to_string(k) + "]", sweep[k].arm);
      }
      for (const auto& [path, arm] : refs) {
        const double ratio = arm.magnification() / test_arm->magnification();
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
          std::ostringstream msg;
          msg << "M_r / M_t = " << ratio << " is not an integer; x_r = (M_r/M_t) x_t would not land "
              << "on detector samples";
          rd.error(path, msg.str());
        }
      }
      // Illumination cone vs imaging cone: the source must look infinitely
      // large to every lens.
      if (d0) {
        const double emitting = source.extent.value_or(grid->span());
        const double illumination = 0.5 * emitting / *d0;
        for (const auto& [path, arm] : arms) {
          const double imaging = 0.5 * arm.aperture() / arm.d_object();
          if (illumination < imaging) {
            std::ostringstream msg;
            msg << "source half-angle " << illumination << " rad is below the imaging half-angle "
                << imaging << " rad; the incoherent-source approximation breaks down";
            rd.warn(path, msg.str());
          }
        }
      }
    }

    // Build the object to catch resolvability and file problems.
    if (rd.ok()) {
      try {
        transmission = make_object(object, *grid, dims);
      } catch (const DomainError& e) {
        rd.error("object", e.what());
      } catch (const InputError& e) {
        rd.error("object.path", e.what());
      }
    }
    double support = 0.0;
    if (object.kind == ObjectSpec::Kind::double_slit) support = object.separation + object.slit_width;
    if (object.kind == ObjectSpec::Kind::mask && transmission) {
      try {
        const auto img = read_pgm8(object.mask_path);
        support = static_cast<double>(std::max(img.width, img.height)) * object.pixel_pitch;
      } catch (const InputError&) {
      }
    }
    if (support > 0.0 && grid->span() < 4.0 * support) {
      std::ostringstream msg;
      msg << "grid span " << grid->span() << " m is less than 4x the object support " << support
          << " m; wraparound and edge artifacts may exceed tolerance";
      rd.warn("grid", msg.str());
    }
  }

  if (!rd.ok() || !mode || !wavelength || !test_arm || !ref_arm || !grid || !frames || !seed ||
      !method || !output_dir || !emit_matrix || !half_width) {
    if (rd.ok()) rd.error("", "configuration incomplete");
    return {rd.diags, std::nullopt};
  }
  if (!transmission) {
    try {
      transmission = make_object(object, *grid, dims);
    } catch (const std::exception& e) {
      rd.error("object", e.what());
      return {rd.diags, std::nullopt};
    }
  }

  SystemConfig system{*wavelength,
                      d0.value_or(test_arm->d_object()),
                      *test_arm,
                      *ref_arm,
                      source,
                      transmission,
                      *grid,
                      dims,
                      static_cast<std::size_t>(*frames),
                      *seed,
                      *method};
  std::filesystem::path out(*output_dir);
  if (!out.is_absolute()) out = std::filesystem::current_path() / out;
  RunConfig cfg{*mode, system, object, sweep, out, *emit_matrix, *half_width, root};
  return {rd.diags, std::move(cfg)};
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_errors(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<ReferenceVariant> RunConfig::reference_variants() const {
  if (mode == RunMode::direct || mode == RunMode::apsf) return {};
  if (mode == RunMode::fig3) {
    const ArmGeometry& r = system.reference_arm;
    return {{"B", r}, {"C", ArmGeometry(r.d_object(), r.d_image(), r.focal_length(), 2.0 * r.aperture())}};
  }
  if (!sweep.empty()) return sweep;
  return {{"ref", system.reference_arm}};
}

json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{Diagnostic::Severity::error, "", "cannot open " + path.string()}});
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError({{Diagnostic::Severity::error, "", path.string() + ": " + e.what()}});
  }
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError({{Diagnostic::Severity::error, "", "override '" + assignment + "' is not key=value"}});
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) {
      throw ConfigError({{Diagnostic::Severity::error, key, "empty path component in override"}});
    }
    if (!node->is_object()) {
      throw ConfigError({{Diagnostic::Severity::error, key, "override path crosses a non-object value"}});
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

std::vector<Diagnostic> validate_config(const json& config, const std::filesystem::path& base_dir) {
  try {
    return parse(config, base_dir).diagnostics;
  } catch (const std::exception& e) {
    return {{Diagnostic::Severity::error, "", e.what()}};
  }
}

std::vector<Diagnostic> validate(const std::filesystem::path& config_path) {
  try {
    return validate_config(load_config_json(config_path), config_path.parent_path());
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
}

RunConfig parse_run_config(const json& config, const std::filesystem::path& base_dir) {
  auto result = parse(config, base_dir);
  if (!result.built) throw ConfigError(std::move(result.diagnostics));
  return std::move(*result.built);
}

std::shared_ptr<const TransmissionFunction> make_object(const ObjectSpec& spec, const Grid& grid,
                                                        int dims) {
  switch (spec.kind) {
    case ObjectSpec::Kind::double_slit:
      return std::make_shared<const TransmissionFunction>(double_slit(spec.slit_width, spec.separation, grid));
    case ObjectSpec::Kind::pinhole:
      return std::make_shared<const TransmissionFunction>(pinhole(spec.position, grid));
    case ObjectSpec::Kind::mask:
      return std::make_shared<const TransmissionFunction>(
          mask_from_image(spec.mask_path, spec.pixel_pitch, spec.threshold, grid));
    case ObjectSpec::Kind::open:
      return std::make_shared<const TransmissionFunction>(uniform_object(grid, 1.0, dims));
    case ObjectSpec::Kind::opaque:
      return std::make_shared<const TransmissionFunction>(uniform_object(grid, 0.0, dims));
  }
  throw DomainError("unknown object kind");
}

}  // namespace ghost
