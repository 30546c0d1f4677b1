// Command-line front end: run a configured experiment, validate a config, or
// render a text mask for 2-D runs.

#include <CLI11.hpp>

#include <iostream>

#include "ghost/config.hpp"
#include "ghost/glyphs.hpp"
#include "ghost/pgm.hpp"
#include "ghost/runner.hpp"

namespace {

void print(const std::vector<ghost::Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << d.str() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-arm speckle ghost imaging simulator"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> frames;
  std::optional<std::string> out;
  unsigned threads = 1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the base seed");
  run->add_option("--frames", frames, "Override the ensemble size");
  run->add_option("--out", out, "Override the output directory");
  run->add_option("--set", sets, "Override a config field, key.path=value (repeatable)");
  run->add_option("--threads", threads, "Worker threads (affects wall-clock only)")
      ->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "Suppress the frame counter");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("--config", validate_path, "Config file (JSON)")->required();

  std::string text = "SIOM";
  std::size_t scale = 1;
  std::size_t margin = 1;
  std::string mask_out;
  auto* render = app.add_subcommand("render-mask", "Write an 8-bit PGM text mask");
  render->add_option("--text", text, "Letters to render (A C E G H I M O S T and space)");
  render->add_option("--scale", scale, "Pixels per font pixel")->check(CLI::PositiveNumber);
  render->add_option("--margin", margin, "Background border in font pixels");
  render->add_option("--out", mask_out, "Output PGM path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      // Flags beat --set, which beats the file.
      if (seed) sets.push_back("seed=" + std::to_string(*seed));
      if (frames) sets.push_back("frames=" + std::to_string(*frames));
      if (out) sets.push_back("output_dir=" + nlohmann::json(*out).dump());
      ghost::RunOptions opts;
      opts.threads = threads;
      opts.log = [quiet](const std::string& msg) {
        if (!quiet || msg.rfind("frames ", 0) != 0) std::cerr << msg << '\n';
      };
      const auto manifest = ghost::run(config, sets, opts);
      std::cout << "wrote " << manifest.files.size() + 1 << " files to "
                << manifest.config.value("output_dir", "out") << '\n';
      for (const auto& [key, value] : manifest.metrics) std::cout << "  " << key << " = " << value << '\n';
      return 0;
    }
    if (*validate) {
      const auto diags = ghost::validate(validate_path);
      print(diags);
      for (const auto& d : diags) {
        if (d.severity == ghost::Diagnostic::Severity::error) return 1;
      }
      std::cout << validate_path << ": ok\n";
      return 0;
    }
    if (*render) {
      ghost::write_pgm8(mask_out, ghost::render_text_mask(text, scale, margin));
      return 0;
    }
  } catch (const ghost::ConfigError& e) {
    print(e.diagnostics());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
