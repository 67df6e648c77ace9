#include "csfg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "csfg/errors.hpp"
#include "csfg/fock_oracle.hpp"

namespace csfg {

using nlohmann::json;

namespace {

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

json scan_summary(const ScanResult& scan) {
  json j;
  j["kind"] = std::string(to_string(scan.kind));
  j["points"] = scan.points.size();
  j["parameter_min"] = scan.parameters.front();
  j["parameter_max"] = scan.parameters.back();
  double rf_max = 0.0;
  double lo_corr = 0.0;
  double quad = 0.0;
  for (const auto& p : scan.points) {
    rf_max = std::max(rf_max, p.rf_power);
    lo_corr = std::max(lo_corr, p.lo_correction);
    quad = std::max(quad, std::abs(p.quadratic_term));
  }
  j["rf_power_max"] = rf_max;
  j["lo_correction_max"] = lo_corr;
  j["quadratic_term_max"] = quad;
  j["rf_power_monotonic"] = rf_power_monotonic(scan);
  return j;
}

}  // namespace

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : all_experiments()) {
    if (to_string(e) == name) return e;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::gdd_scan: return "gdd-scan";
    case Experiment::loss_scan: return "loss-scan";
    case Experiment::residue_scan: return "residue-scan";
    case Experiment::su11_spectrum: return "su11-spectrum";
    case Experiment::oracle_validate: return "oracle-validate";
    case Experiment::matched_filter: return "matched-filter";
    case Experiment::separability: return "separability";
  }
  return "unknown";
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all{
      Experiment::gdd_scan,        Experiment::loss_scan,      Experiment::residue_scan,
      Experiment::su11_spectrum,   Experiment::oracle_validate, Experiment::matched_filter,
      Experiment::separability};
  return all;
}

DerivedConstants derive_constants(const RunConfig& config) {
  DerivedConstants d;
  d.gain = config.parametric.gain();
  d.perturbative = config.parametric.perturbative();
  d.mode_count = config.build_grid().mode_count();
  d.measurement_time = 1.0 / config.grid.resolution;
  d.predicted_gdd_width = predicted_gdd_width(config.grid.bandwidth, config.phase.convention);
  d.predicted_delta_t = bandwidth_to_time(config.grid.bandwidth);
  return d;
}

void write_scan_csv(const ScanResult& scan, std::ostream& out) {
  out << kScanCsvHeader << '\n';
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const auto& p = scan.points[i];
    write_row(out, {scan.parameters[i], p.demodulated_signal, p.rf_power, p.stimulated_term,
                    p.spontaneous_term});
  }
}

void write_su11_csv(const std::vector<Su11Point>& spectrum, std::ostream& out) {
  out << "offset,pair_phase,intensity\n";
  for (const auto& p : spectrum) write_row(out, {p.offset, p.pair_phase, p.intensity});
}

void write_matched_filter_csv(const MatchedFilterOutput& output, std::ostream& out) {
  out << "offset,total_re,total_im,correlation_re,correlation_im,background_re,background_im\n";
  for (std::size_t i = 0; i < output.total.size(); ++i) {
    write_row(out, {output.offset(i), output.total[i].real(), output.total[i].imag(),
                    output.correlation[i].real(), output.correlation[i].imag(),
                    output.background[i].real(), output.background[i].imag()});
  }
}

RunOutcome run_experiment(Experiment experiment, const RunConfig& config,
                          const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  RunOutcome outcome;
  outcome.derived = derive_constants(config);
  const auto& d = outcome.derived;
  if (!d.perturbative) {
    outcome.warnings.push_back("gain " + format_double(d.gain) + " exceeds the perturbative limit " +
                               format_double(kPerturbativeGainLimit));
  }

  const std::string name(to_string(experiment));
  const ModeGrid grid = config.build_grid();
  json results;
  std::ostringstream csv;
  bool has_csv = false;

  switch (experiment) {
    case Experiment::gdd_scan: {
      const auto [lo, hi] = config.gdd_range();
      const auto scan = gdd_scan(lo, hi, config.scan.points, config.parametric, grid, config.phase,
                                 config.seed, config.lockin);
      write_scan_csv(scan, csv);
      has_csv = true;
      results = scan_summary(scan);
      try {
        results["peak_width"] = find_peak_width(scan);
      } catch (const NotFoundError& e) {
        results["peak_width"] = nullptr;
        outcome.warnings.push_back(std::string("peak width: ") + e.what());
      }
      break;
    }
    case Experiment::loss_scan: {
      const auto scan = loss_scan(config.scan.loss_min, config.scan.loss_max, config.scan.points,
                                  config.parametric, grid, config.phase, config.seed,
                                  config.scan.compensate_seed, config.lockin);
      write_scan_csv(scan, csv);
      has_csv = true;
      results = scan_summary(scan);
      const auto fit = fit_demodulated_line(scan);
      results["seed_compensated"] = scan.seed_compensated;
      results["affine_fit"] = {{"intercept", fit.intercept},
                               {"slope", fit.slope},
                               {"max_residual", fit.max_residual}};
      break;
    }
    case Experiment::residue_scan: {
      const auto scan = residue_scan(config.scan.residue_min, config.scan.residue_max,
                                     config.scan.points, config.parametric, grid, config.phase,
                                     config.seed, config.lockin);
      write_scan_csv(scan, csv);
      has_csv = true;
      results = scan_summary(scan);
      break;
    }
    case Experiment::su11_spectrum: {
      if (!d.perturbative) {
        outcome.warnings.push_back("su11 spectrum uses the low-gain expansion outside its range");
      }
      const auto spectrum = su11_spectrum(config.parametric, grid, config.phase);
      write_su11_csv(spectrum, csv);
      has_csv = true;
      results["modes"] = spectrum.size();
      results["fringe_contrast"] = su11_fringe_contrast(config.parametric.shaper_transmission);
      break;
    }
    case Experiment::oracle_validate: {
      const auto& o = config.oracle;
      const auto space = OracleSpace::build(
          o.pairs, o.pump_truncation.value_or(suggested_pump_truncation(o.pump_amplitude)),
          o.pair_truncation);
      const auto r = validate_perturbation(space, o.scenario, o.chi_t, o.pump_amplitude,
                                           o.seed_amplitude);
      if (r.truncation_warning) outcome.warnings.push_back("oracle truncation not adequate");
      results["scenario"] = std::string(to_string(r.scenario));
      results["pump_amplitude"] = r.pump_amplitude;
      results["chi_t"] = r.chi_t;
      results["gain"] = r.gain;
      results["seed_photons"] = r.seed_photons;
      results["mode_pairs"] = r.mode_pairs;
      results["dimension"] = r.dimension;
      results["pump_truncation"] = space.pump_truncation();
      results["pair_truncation"] = space.pair_truncation();
      results["input"] = {{"pair_sum", complex_json(r.input.pair_sum)},
                          {"photon_number", r.input.photon_number},
                          {"hamiltonian", r.input.hamiltonian}};
      results["oracle_shift"] = complex_json(r.oracle_shift);
      results["full_prediction"] = complex_json(r.full_prediction);
      results["lowgain_prediction"] = complex_json(r.lowgain_prediction);
      results["full_abs_error"] = r.full_abs_error;
      results["lowgain_abs_error"] = r.lowgain_abs_error;
      results["full_rel_error"] = r.full_rel_error;
      results["lowgain_rel_error"] = r.lowgain_rel_error;
      results["tolerance"] = r.tolerance;
      results["norm_error"] = r.norm_error;
      results["charge_drift"] = r.charge_drift;
      results["truncation_warning"] = r.truncation_warning;
      results["pass"] = r.pass;
      break;
    }
    case Experiment::matched_filter: {
      const auto& mf = config.matched_filter;
      const auto signal = flat_field(mf.bins, mf.spacing);
      const auto noise = gaussian_noise(mf.bins, mf.spacing, mf.noise_variance, config.rng_seed);
      const auto output = matched_filter(signal, noise, conjugate_mirror(signal));
      write_matched_filter_csv(output, csv);
      has_csv = true;
      results["bins"] = mf.bins;
      results["signal_power"] = output.signal_power;
      results["correlation_peak"] = complex_json(output.correlation[output.zero_lag]);
      results["background_at_peak"] = complex_json(output.background[output.zero_lag]);
      results["expected_background_power"] = expected_background_power(signal, mf.noise_variance);
      const double snr = snr_peak(output, mf.noise_variance);
      if (std::isfinite(snr)) {
        results["snr"] = snr;
      } else {
        results["snr"] = "inf";
      }
      if (mf.noise_variance > 0.0) {
        const auto mc = monte_carlo_background(signal, mf.noise_variance, mf.draws,
                                               config.rng_seed, config.lockin.workers);
        results["monte_carlo"] = {{"draws", mc.draws},
                                  {"mean_background_power", mc.mean_power},
                                  {"expected", mc.expected},
                                  {"relative_deviation", mc.mean_power / mc.expected - 1.0}};
      }
      break;
    }
    case Experiment::separability: {
      const auto r = separability(config.separability_delta_t(), config.separability.delta_nu_sum);
      results["delta_t"] = r.delta_t;
      results["delta_nu_sum"] = r.delta_nu_sum;
      results["product"] = r.product;
      results["violation_factor"] = r.violation_factor;
      results["orders_of_magnitude"] = std::log10(r.violation_factor);
      results["classical_compatible"] = r.classical_compatible();
      break;
    }
  }

  json summary;
  summary["experiment"] = name;
  summary["config"] = config_snapshot(config);
  summary["derived"] = {{"gain", d.gain},
                        {"mode_count", d.mode_count},
                        {"measurement_time", d.measurement_time},
                        {"predicted_gdd_width", d.predicted_gdd_width},
                        {"predicted_delta_t", d.predicted_delta_t},
                        {"perturbative", d.perturbative}};
  summary["results"] = results;
  summary["warnings"] = outcome.warnings;
  outcome.summary_json = summary.dump(2) + "\n";

  if (has_csv) {
    const auto path = out_dir / (name + ".csv");
    write_file(path, csv.str());
    outcome.artifacts.push_back(path);
  }
  const auto path = out_dir / (name + ".json");
  write_file(path, outcome.summary_json);
  outcome.artifacts.push_back(path);
  return outcome;
}

}  // namespace csfg
