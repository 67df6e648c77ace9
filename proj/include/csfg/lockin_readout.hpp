#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "csfg/pump_perturbation.hpp"
#include "csfg/spectral_model.hpp"

namespace csfg {

enum class DemodulationMode { numeric, analytic };

DemodulationMode parse_demodulation_mode(std::string_view name);
std::string_view to_string(DemodulationMode mode);

inline constexpr std::size_t kMinDemodulationSamples = 64;

struct LockinOptions {
  DemodulationMode mode = DemodulationMode::numeric;
  std::size_t samples = 128;  // per dither period, numeric mode only
  unsigned workers = 1;       // scan-point parallelism
};

/// One demodulated lock-in reading, in photons per dither period.
struct LockinResult {
  double demodulated_signal = 0.0;
  double rf_power = 0.0;  // demodulated_signal^2
  double stimulated_term = 0.0;
  double spontaneous_term = 0.0;
  // Demodulated phase-independent |LO|^2 + |a_dith|^2 part; zero in analytic mode.
  double quadratic_term = 0.0;
  // |a_inv - alpha_r e^{i phi_r}| / |alpha_r|: size of the nonlinear
  // corrections neglected when the residue alone is used as LO.
  double lo_correction = 0.0;
};

enum class ScanKind { gdd, loss, residue_phase };
std::string_view to_string(ScanKind kind);

struct ScanResult {
  ScanKind kind = ScanKind::gdd;
  std::vector<double> parameters;  // s^2, T, or rad; monotone
  std::vector<LockinResult> points;
  ModeGrid grid;
  ParametricConfig config;
  PhaseProfile profile;
  SeedConfig seed;
  bool seed_compensated = false;
};

/// -(i / sqrt 2) chi t sum_nu <a_nu a_-nu>.
cplx dithered_amplitude(const PairAmplitudeSet& pairs, const ParametricConfig& config);

/// alpha_r e^{i phi_r} + a_p (|alpha_sd|^2 - <N_s + N_i>) (chi t)^2 / (2 sqrt 2).
cplx invariant_amplitude(const ParametricConfig& config, const SeedConfig& seed,
                         double photon_numbers);

/// Lock-in reading (1/pi) int_0^{2 pi} N_p(theta) sin(theta) d theta with the
/// residue field as local oscillator.
///
/// Numeric mode samples the dithered output intensity |LO + a_dith(theta)|^2
/// on a uniform grid over one period. Analytic mode evaluates
///   sqrt2 A_d T |alpha_r| chi t cosh g sinh g
///     [ |alpha_sd|^2 sin(phi_sd + phi_p - phi_r) + sum rho sin(Phi_nu + phi_p - phi_r) ]
/// with A_d = 2 J_1(D); at low gain cosh g sinh g -> |alpha_p| chi t.
LockinResult demodulate(const ParametricConfig& config, const ModeGrid& grid,
                        const PhaseProfile& profile, const SeedConfig& seed,
                        const LockinOptions& options = {});

/// Lock-in constant A_d = 2 J_1(D).
double dither_constant(double dither_amplitude);

ScanResult gdd_scan(double gdd_min, double gdd_max, std::size_t points,
                    const ParametricConfig& config, const ModeGrid& grid,
                    const PhaseProfile& profile, const SeedConfig& seed,
                    const LockinOptions& options = {});

/// Sweeps the shaper transmission. With `compensate_seed` the seed photon
/// number is scaled by 1/T so the stimulated term stays fixed.
ScanResult loss_scan(double t_min, double t_max, std::size_t points,
                     const ParametricConfig& config, const ModeGrid& grid,
                     const PhaseProfile& profile, const SeedConfig& seed, bool compensate_seed,
                     const LockinOptions& options = {});

ScanResult residue_scan(double phase_min, double phase_max, std::size_t points,
                        const ParametricConfig& config, const ModeGrid& grid,
                        const PhaseProfile& profile, const SeedConfig& seed,
                        const LockinOptions& options = {});

/// Full width at half maximum of the central lobe of |spontaneous_term|.
///
/// The central lobe is the global maximum closest to parameter zero;
/// edges are linearly interpolated. Throws NotFoundError on a flat scan or
/// when the lobe does not fall to half maximum inside the scan.
double find_peak_width(const ScanResult& scan);

/// Least-squares line demodulated_signal = intercept + slope * parameter.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double max_residual = 0.0;
};
LineFit fit_demodulated_line(const ScanResult& scan);

/// True when rf_power is non-decreasing or non-increasing along the scan.
bool rf_power_monotonic(const ScanResult& scan);

struct Su11Point {
  double offset = 0.0;     // Hz
  double pair_phase = 0.0; // rad
  double intensity = 0.0;  // photons per mode
};

/// Low-gain two-pass output spectrum g^2 rho (1 + T + 2 T cos Phi).
/// Meaningful for g <= kPerturbativeGainLimit.
std::vector<Su11Point> su11_spectrum(const ParametricConfig& config, const ModeGrid& grid,
                                     const PhaseProfile& profile);

inline double su11_fringe_contrast(double transmission) {
  return 2.0 * transmission / (1.0 + transmission);
}

}  // namespace csfg
