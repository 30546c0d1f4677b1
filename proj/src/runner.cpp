#include "ghost/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ghost/analysis.hpp"
#include "ghost/correlate.hpp"

namespace ghost {

namespace fs = std::filesystem;

std::string sha256_hex(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot read " + file.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["config"] = config;
  j["seed"] = seed;
  j["frames_used"] = frames_used;
  j["threads"] = threads;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["files"] = nlohmann::json::array();
  for (const auto& f : files) j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["pgm_scaling"] = nlohmann::json::object();
  for (const auto& [name, s] : pgm_scaling) {
    j["pgm_scaling"][name] = {{"offset", s.offset},
                              {"scale", s.scale},
                              {"mapping", "pixel = round((value - offset) * scale)"}};
  }
  j["metrics"] = metrics;
  j["warnings"] = warnings;
  return j;
}

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void write_csv(const fs::path& path, std::span<const double> x, std::span<const double> v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "x_meters,value\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << num(x[i]) << ',' << num(v[i]) << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

// Peak-normalizes when the peak is positive; otherwise returns the raw values.
std::vector<double> peak_normalized(std::span<const double> v, bool& normalized) {
  normalized = !v.empty() && *std::max_element(v.begin(), v.end()) > 0.0;
  return normalized ? normalize_profile(v) : std::vector<double>(v.begin(), v.end());
}

std::optional<double> two_peak_dip(std::span<const double> v) {
  if (find_peaks(v).size() != 2) return std::nullopt;
  return dip_depth(v);
}

std::string opt(const std::optional<double>& v, int digits = 4) {
  return v ? fixed(*v, digits) : std::string("n/a");
}

std::string arm_line(const ArmGeometry& a) {
  return "d_object " + num(a.d_object()) + " m, d_image " + num(a.d_image()) + " m, f " +
         num(a.focal_length()) + " m, L " + num(a.aperture()) + " m, M " + num(a.magnification());
}

class Run {
 public:
  Run(const RunConfig& cfg, const RunOptions& opts) : cfg_(cfg), opts_(opts) {}

  RunManifest execute() {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(cfg_.output_dir);
    const auto& s = cfg_.system;
    report_ << "mode: " << to_string(cfg_.mode) << '\n'
            << "wavelength: " << num(s.wavelength) << " m\n"
            << "grid: " << s.grid.size() << " samples per axis, spacing " << num(s.grid.dx())
            << " m, dims " << s.dims << '\n'
            << "test arm: " << arm_line(s.test_arm) << '\n'
            << "rayleigh limit (test arm): "
            << num(rayleigh_limit(s.wavelength, s.test_arm.d_object(), s.test_arm.aperture())) << " m\n";
    switch (cfg_.mode) {
      case RunMode::fig3: run_fig3(); break;
      case RunMode::apsf: run_apsf(); break;
      default:
        if (s.dims == 1) {
          run_images_1d();
        } else {
          run_images_2d();
        }
    }
    write_text(cfg_.output_dir / "report.txt", report_.str());

    manifest_.config = cfg_.effective;
    manifest_.seed = s.seed;
    manifest_.threads = std::max(1u, opts_.threads);
    for (const auto& entry : fs::recursive_directory_iterator(cfg_.output_dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string name = fs::relative(entry.path(), cfg_.output_dir).generic_string();
      if (name == kManifestName) continue;
      manifest_.files.push_back({name, sha256_hex(entry.path()), entry.file_size()});
    }
    std::sort(manifest_.files.begin(), manifest_.files.end(),
              [](const OutputFile& a, const OutputFile& b) { return a.name < b.name; });
    manifest_.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(cfg_.output_dir / kManifestName, manifest_.to_json().dump(2) + "\n");
    return manifest_;
  }

 private:
  void log(const std::string& msg) const {
    if (opts_.log) opts_.log(msg);
  }

  void note(const std::string& msg) {
    manifest_.warnings.push_back(msg);
    report_ << "note: " << msg << '\n';
    log("note: " + msg);
  }

  void run_fig3() {
    const auto& s = cfg_.system;
    const auto variants = cfg_.reference_variants();
    const double zero = s.wavelength * s.test_arm.d_object() / s.test_arm.aperture();
    constexpr std::size_t kSamples = 4001;
    const Grid grid(kSamples, 4.0 * zero / static_cast<double>(kSamples - 1));

    std::vector<KernelCurve> curves{single_arm_apsf(s.test_arm, s.wavelength, grid)};
    std::vector<std::string> names{"A"};
    for (const auto& v : variants) {
      curves.push_back(kernel_hg(s.test_arm, v.arm, s.wavelength, grid));
      names.push_back(v.label);
    }
    report_ << "\nFWHM of amplitude kernels (lambda d1 / L_t = " << num(zero) << " m)\n"
            << "curve  kernel            L_r [m]   fwhm [m]                  fwhm / (lambda d1 / L_t)\n";
    std::ostringstream table;
    table << "curve,kernel,reference_aperture_meters,fwhm_meters,fwhm_over_lambda_d1_over_Lt\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
      write_csv(cfg_.output_dir / ("kernel_" + names[k] + ".csv"), grid.coordinates(), curves[k].values);
      Profile p = curves[k].profile();
      for (auto& v : p.values) v = std::abs(v);
      const double width = fwhm(p);
      const std::string lr = k == 0 ? "-" : num(variants[k - 1].arm.aperture());
      report_ << std::left << std::setw(7) << names[k] << std::setw(18) << to_string(curves[k].label)
              << std::setw(10) << lr << std::setw(26) << num(width) << fixed(width / zero, 4) << '\n';
      table << names[k] << ',' << to_string(curves[k].label) << ',' << (k == 0 ? "" : lr) << ','
            << num(width) << ',' << num(width / zero) << '\n';
      manifest_.metrics["fwhm." + names[k]] = width;
    }
    write_text(cfg_.output_dir / "fwhm.csv", table.str());
    if (curves.size() > 1) {
      const double ratio = fwhm_ratio_fig3(s.test_arm, variants.front().arm, s.wavelength);
      report_ << "fwhm ratio " << names[1] << "/A: " << fixed(ratio, 4) << '\n';
      manifest_.metrics["fwhm_ratio." + names[1]] = ratio;
    }
  }

  void run_apsf() {
    const auto& s = cfg_.system;
    const auto& arm = s.test_arm;
    const double zero = s.wavelength * arm.d_image() / arm.aperture();
    constexpr std::size_t kSamples = 601;
    const Grid grid(kSamples, 6.0 * zero / static_cast<double>(kSamples - 1));
    const auto x = grid.coordinates();
    std::vector<double> closed(kSamples);
    for (std::size_t i = 0; i < kSamples; ++i) {
      closed[i] = std::abs(apsf_closed_form(arm, 0.0, x[i], s.wavelength));
    }
    const std::size_t points = apsf_min_quadrature_points(arm, 0.0, grid, s.wavelength);
    bool ok = false;
    const auto numeric = peak_normalized(apsf_numeric(arm, 0.0, grid, s.wavelength, points), ok);
    write_csv(cfg_.output_dir / "apsf_closed_form.csv", x, closed);
    write_csv(cfg_.output_dir / "apsf_numeric.csv", x, numeric);
    double worst = 0.0;
    for (std::size_t i = 0; i < kSamples; ++i) {
      if (std::abs(x[i]) < zero) worst = std::max(worst, std::abs(numeric[i] - closed[i]) / closed[i]);
    }
    report_ << "\napsf of the test arm for a point at x_object = 0\n"
            << "quadrature points: " << points << '\n'
            << "max relative error over the main lobe: " << num(worst) << '\n';
    manifest_.metrics["apsf.max_relative_error"] = worst;
  }

  std::vector<CorrelationAccumulator> simulate(const std::vector<ArmGeometry>& arms) {
    const auto& s = cfg_.system;
    GhostSimulator sim(s, arms);
    auto accs = sim.make_accumulators(cfg_.emit_matrix);
    const std::uint64_t total = s.ensemble_size;
    sim.run(0, total, accs, std::max(1u, opts_.threads), [&](std::uint64_t done) {
      log("frames " + std::to_string(done) + "/" + std::to_string(total));
    });
    manifest_.frames_used = accs.front().count();
    return accs;
  }

  void run_images_1d() {
    const auto& s = cfg_.system;
    const auto variants = cfg_.reference_variants();
    std::vector<ArmGeometry> arms;
    for (const auto& v : variants) arms.push_back(v.arm);
    if (arms.empty()) arms.push_back(s.reference_arm);  // direct mode still needs an accumulator
    auto accs = simulate(arms);
    report_ << "frames: " << manifest_.frames_used << "\nseed: " << s.seed << '\n';
    for (const auto& v : variants) report_ << "reference " << v.label << ": " << arm_line(v.arm) << '\n';

    const double m = s.test_arm.magnification();
    const double hw = cfg_.profile_half_width;
    struct Row {
      std::string name;
      std::optional<double> dip, dip_analytic, nrms, fwhm;
    };
    std::vector<Row> rows;

    // Restricts an object-coordinate profile to |x| <= hw and to valid samples.
    auto windowed = [&](std::span<const double> detector_values, const std::vector<std::uint8_t>* valid) {
      const Profile p = to_object_coordinates(s.grid, detector_values, m);
      std::vector<double> vmask(s.grid.size(), 1.0);
      if (valid) std::transform(valid->begin(), valid->end(), vmask.begin(), [](auto b) { return double(b); });
      const Profile pv = to_object_coordinates(s.grid, vmask, m);
      Profile out;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::abs(p.x[i]) <= hw * (1.0 + 1e-12) && pv.values[i] > 0.0) {
          out.x.push_back(p.x[i]);
          out.values.push_back(p.values[i]);
        }
      }
      return out;
    };

    auto emit = [&](const std::string& name, const Profile& sim, const SystemConfig& analytic_cfg,
                    bool ghost) {
      Row row{name, {}, {}, {}, {}};
      if (sim.size() < 3) {
        note(name + ": fewer than 3 samples inside the profile window");
        rows.push_back(row);
        return;
      }
      bool normalized = false;
      const auto values = peak_normalized(sim.values, normalized);
      if (!normalized) note(name + ": peak is not positive, profile written unnormalized");
      write_csv(cfg_.output_dir / (name + ".csv"), sim.x, values);
      row.dip = two_peak_dip(values);
      const auto rep = resolution_report({sim.x, values}, s.test_arm, s.wavelength);
      row.fwhm = rep.fwhm;
      try {
        const Profile a = ghost ? analytic_ghost_image(*s.object, analytic_cfg, sim.x)
                                : analytic_direct_image(*s.object, analytic_cfg, sim.x);
        write_csv(cfg_.output_dir / ("analytic_" + name + ".csv"), a.x, a.values);
        row.dip_analytic = two_peak_dip(a.values);
        row.nrms = nrms_error(values, a.values);
      } catch (const DomainError& e) {
        note(name + ": analytic oracle unavailable: " + e.what());
      }
      rows.push_back(row);
    };

    const bool want_direct = cfg_.mode == RunMode::direct || cfg_.mode == RunMode::both ||
                             cfg_.mode == RunMode::sweep;
    if (want_direct) emit("direct", windowed(accs.front().direct_image(), nullptr), s, false);
    for (std::size_t k = 0; k < variants.size(); ++k) {
      const GhostImage img = accs[k].ghost_image();
      SystemConfig c = s;
      c.reference_arm = variants[k].arm;
      emit("ghost_" + variants[k].label, windowed(img.values, &img.valid), c, true);
      if (cfg_.emit_matrix) {
        const std::size_t n = s.grid.size();
        const std::string file = "correlation_" + variants[k].label + ".pgm";
        manifest_.pgm_scaling[file] = write_pgm16(cfg_.output_dir / file, n, n, accs[k].correlation_matrix());
      }
    }

    report_ << "\nprofiles over |x_object| <= " << num(hw) << " m, peak-normalized\n"
            << "image                     dip_sim   dip_analytic  nrms      fwhm_sim [m]\n";
    for (const auto& r : rows) {
      report_ << std::left << std::setw(26) << r.name << std::setw(10) << opt(r.dip) << std::setw(14)
              << opt(r.dip_analytic) << std::setw(10) << opt(r.nrms) << (r.fwhm ? num(*r.fwhm) : "n/a")
              << '\n';
      if (r.dip) manifest_.metrics["dip." + r.name] = *r.dip;
      if (r.dip_analytic) manifest_.metrics["dip_analytic." + r.name] = *r.dip_analytic;
      if (r.nrms) manifest_.metrics["nrms." + r.name] = *r.nrms;
      if (r.fwhm) manifest_.metrics["fwhm." + r.name] = *r.fwhm;
    }
    report_ << "resolved when dip >= " << fixed(rayleigh_dip_depth()) << '\n';
    auto ordering = [&](auto member, const char* what) {
      std::vector<const Row*> ranked;
      for (const auto& r : rows) {
        if (r.*member) ranked.push_back(&r);
      }
      if (ranked.size() < 2) return;
      std::stable_sort(ranked.begin(), ranked.end(),
                       [&](const Row* a, const Row* b) { return *(a->*member) < *(b->*member); });
      report_ << "ordering by " << what << " dip depth: ";
      for (std::size_t i = 0; i < ranked.size(); ++i) report_ << (i ? " < " : "") << ranked[i]->name;
      report_ << '\n';
    };
    ordering(&Row::dip, "simulated");
    ordering(&Row::dip_analytic, "analytic");
  }

  void run_images_2d() {
    const auto& s = cfg_.system;
    const auto variants = cfg_.reference_variants();
    std::vector<ArmGeometry> arms;
    for (const auto& v : variants) arms.push_back(v.arm);
    if (arms.empty()) arms.push_back(s.reference_arm);
    auto accs = simulate(arms);
    report_ << "frames: " << manifest_.frames_used << "\nseed: " << s.seed << '\n';
    for (const auto& v : variants) report_ << "reference " << v.label << ": " << arm_line(v.arm) << '\n';

    const std::size_t n = s.grid.size();
    std::vector<double> object(n * n);
    const auto& t = s.object->values();
    for (std::size_t i = 0; i < object.size(); ++i) object[i] = std::norm(t[i]);
    manifest_.pgm_scaling["object.pgm"] = write_pgm16(cfg_.output_dir / "object.pgm", n, n, object);

    // Rows crossing at least two separate open runs of the object.
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r) {
      int runs = 0;
      for (std::size_t c = 0; c < n; ++c) {
        const bool open = object[r * n + c] > 0.5;
        const bool was_open = c > 0 && object[r * n + c - 1] > 0.5;
        if (open && !was_open) ++runs;
      }
      if (runs >= 2) rows.push_back(r);
    }

    report_ << "\nimages in object orientation; per-row dip depth median over " << rows.size()
            << " rows crossing two or more open runs\n";
    auto emit = [&](const std::string& name, const std::vector<double>& detector) {
      const auto img = to_object_orientation(n, detector);
      const std::string file = name + ".pgm";
      manifest_.pgm_scaling[file] = write_pgm16(cfg_.output_dir / file, n, n, img);
      if (rows.empty()) return;
      const double med = median_row_dip(img, n, rows);
      report_ << std::left << std::setw(26) << name << fixed(med) << '\n';
      manifest_.metrics["row_dip_median." + name] = med;
    };
    const bool want_direct = cfg_.mode == RunMode::direct || cfg_.mode == RunMode::both ||
                             cfg_.mode == RunMode::sweep;
    if (want_direct) emit("direct", accs.front().direct_image());
    for (std::size_t k = 0; k < variants.size(); ++k) {
      emit("ghost_" + variants[k].label, accs[k].ghost_image().values);
    }
    if (rows.empty()) note("no object row crosses two open runs; row dip medians skipped");
  }

  const RunConfig& cfg_;
  const RunOptions& opts_;
  RunManifest manifest_;
  std::ostringstream report_;
};

}  // namespace

RunManifest run(const RunConfig& config, const RunOptions& options) {
  return Run(config, options).execute();
}

RunManifest run(const fs::path& config_path, const std::vector<std::string>& overrides,
                const RunOptions& options) {
  auto j = load_config_json(config_path);
  for (const auto& o : overrides) apply_override(j, o);
  const auto diags = validate_config(j, config_path.parent_path());
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::warning && options.log) options.log(d.str());
  }
  const RunConfig cfg = parse_run_config(j, config_path.parent_path());
  RunManifest m = run(cfg, options);
  return m;
}

}  // namespace ghost
