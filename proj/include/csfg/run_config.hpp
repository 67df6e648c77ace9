#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "csfg/fock_oracle.hpp"
#include "csfg/lockin_readout.hpp"
#include "csfg/pump_perturbation.hpp"
#include "csfg/spectral_model.hpp"

namespace csfg {

/// Config problem tied to one dotted key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct GridSettings {
  double bandwidth = 113e12;     // Hz
  double resolution = 0.5e12;    // Hz
  double center = 169.37e12;     // Hz, half the 885 nm pump frequency
  DensityShape density = DensityShape::flat;
};

struct ScanSettings {
  std::size_t points = 401;
  std::optional<double> gdd_min;  // s^2, default -10 * predicted width
  std::optional<double> gdd_max;
  double loss_min = 0.05;
  double loss_max = 1.0;
  bool compensate_seed = true;
  double residue_min = -kPi;
  double residue_max = kPi;
};

struct OracleSettings {
  std::size_t pairs = 1;
  double pump_amplitude = 2.0;
  double chi_t = 0.01;
  std::optional<std::size_t> pump_truncation;  // default suggested_pump_truncation
  std::size_t pair_truncation = 6;
  OracleScenario scenario = OracleScenario::vacuum;
  double seed_amplitude = 1.0;
};

struct MatchedFilterSettings {
  std::size_t bins = 256;
  double spacing = 1.0;         // Hz
  double noise_variance = 1.0;  // per bin
  std::size_t draws = 10000;
};

struct SeparabilitySettings {
  std::optional<double> delta_t;  // s, default 1 / grid.bandwidth
  double delta_nu_sum = 20.0;     // Hz, measured SFG linewidth
};

/// Every tunable of a run; defaults reproduce the experiment's regime.
struct RunConfig {
  GridSettings grid;
  PhaseProfile phase;        // dither_frequency in rad/s
  ParametricConfig parametric{1000.0, 0.0, 3e-5, 1.0, 0.1, 0.0};
  SeedConfig seed{10.0, kPi, 22.8e12};
  LockinOptions lockin;
  ScanSettings scan;
  OracleSettings oracle;
  MatchedFilterSettings matched_filter;
  SeparabilitySettings separability;
  std::uint64_t rng_seed = 1;

  RunConfig();

  ModeGrid build_grid() const;
  std::pair<double, double> gdd_range() const;
  double separability_delta_t() const;
};

/// Parse a flat `section.key = value [unit]` document. `#` starts a
/// comment. Quantities accept scale suffixes (THz, fs2, pi, ...) and are
/// stored in SI base units. Throws ConfigError naming the dotted key.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical key -> value strings (SI, 17 significant digits) that parse
/// back to an identical RunConfig.
std::map<std::string, std::string> config_snapshot(const RunConfig& config);
std::string render_config(const RunConfig& config);

/// Shortest-exact decimal with 17 significant digits.
std::string format_double(double value);

}  // namespace csfg
