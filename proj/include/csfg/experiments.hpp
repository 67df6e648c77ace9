#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "csfg/lockin_readout.hpp"
#include "csfg/matched_filter_metrics.hpp"
#include "csfg/run_config.hpp"

namespace csfg {

/// Failure to create or write an output artifact.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  gdd_scan,
  loss_scan,
  residue_scan,
  su11_spectrum,
  oracle_validate,
  matched_filter,
  separability,
};

Experiment parse_experiment(std::string_view name);
std::string_view to_string(Experiment experiment);
const std::vector<Experiment>& all_experiments();

struct DerivedConstants {
  double gain = 0.0;
  std::size_t mode_count = 0;
  double measurement_time = 0.0;       // s
  double predicted_gdd_width = 0.0;    // s^2, 4 pi / bandwidth^2
  double predicted_delta_t = 0.0;      // s, 1 / bandwidth
  bool perturbative = true;
};

DerivedConstants derive_constants(const RunConfig& config);

struct RunOutcome {
  std::string summary_json;
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> warnings;
  DerivedConstants derived;
};

/// Runs one experiment and writes `<name>.csv` (where applicable) and
/// `<name>.json` into `out_dir`. Throws IoError when writing fails.
RunOutcome run_experiment(Experiment experiment, const RunConfig& config,
                          const std::filesystem::path& out_dir);

inline constexpr std::string_view kScanCsvHeader =
    "parameter,demod_signal,rf_power,stimulated_term,spontaneous_term";

/// Header plus one row per point, 17 significant digits, LF endings.
void write_scan_csv(const ScanResult& scan, std::ostream& out);
void write_su11_csv(const std::vector<Su11Point>& spectrum, std::ostream& out);
void write_matched_filter_csv(const MatchedFilterOutput& output, std::ostream& out);

}  // namespace csfg
