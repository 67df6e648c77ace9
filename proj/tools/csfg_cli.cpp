// csfg: run one named experiment from a config file and write CSV/JSON
// artifacts into the output directory.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "csfg/experiments.hpp"
#include "csfg/run_config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

const char* describe(csfg::Experiment e) {
  switch (e) {
    case csfg::Experiment::gdd_scan: return "Lock-in signal versus group-delay dispersion";
    case csfg::Experiment::loss_scan: return "Lock-in signal versus shaper transmission";
    case csfg::Experiment::residue_scan: return "Lock-in signal versus residue phase";
    case csfg::Experiment::su11_spectrum: return "Two-pass low-gain output spectrum";
    case csfg::Experiment::oracle_validate: return "Exact Fock-space check of the pump correction";
    case csfg::Experiment::matched_filter: return "Classical conjugate-mirror filter and background";
    case csfg::Experiment::separability: return "Time-frequency product against the classical bound";
  }
  return "";
}

void print_derived(const csfg::DerivedConstants& d) {
  using csfg::format_double;
  std::cout << "gain g = " << format_double(d.gain) << '\n'
            << "mode pairs M = " << d.mode_count << '\n'
            << "measurement time T_m = " << format_double(d.measurement_time) << " s\n"
            << "predicted gdd width = " << format_double(d.predicted_gdd_width) << " s^2 ("
            << format_double(d.predicted_gdd_width * 1e30) << " fs^2)\n"
            << "predicted delta_t = " << format_double(d.predicted_delta_t) << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent sum-frequency detection of broadband photon pairs"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::filesystem::path out_dir = "out";
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Config file (key = value [unit])");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--workers", workers, "Scan-point worker threads");
  app.add_option("--seed", seed, "RNG seed");

  std::optional<csfg::Experiment> chosen;
  for (csfg::Experiment e : csfg::all_experiments()) {
    auto* sub = app.add_subcommand(std::string(csfg::to_string(e)), describe(e));
    sub->callback([&chosen, e] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    csfg::RunConfig config;
    if (!config_path.empty()) config = csfg::load_run_config(config_path);
    if (workers) {
      if (*workers == 0) throw csfg::ConfigError("--workers", "must be at least 1");
      config.lockin.workers = *workers;
    }
    if (seed) config.rng_seed = *seed;

    const auto outcome = csfg::run_experiment(*chosen, config, out_dir);
    print_derived(outcome.derived);
    for (const auto& path : outcome.artifacts) std::cout << "wrote " << path.string() << '\n';
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    return kExitOk;
  } catch (const csfg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const csfg::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
