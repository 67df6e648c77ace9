#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace csfg {

/// Complex spectral amplitudes on a uniform grid (arbitrary sqrt-power units).
struct ClassicalField {
  std::vector<std::complex<double>> amplitudes;
  double spacing = 1.0;  // Hz

  std::size_t size() const { return amplitudes.size(); }
  /// sum |E|^2 * spacing
  double power() const;
};

/// The conjugate-mirrored field E*(-nu), i.e. the idler partner of a signal
/// and the matched filter for it.
ClassicalField conjugate_mirror(const ClassicalField& field);

/// Unit-amplitude flat field of `bins` bins.
ClassicalField flat_field(std::size_t bins, double spacing = 1.0);

/// Complex circular Gaussian noise with E|n|^2 = variance per bin.
ClassicalField gaussian_noise(std::size_t bins, double spacing, double variance, std::uint64_t seed);

/// Linear (zero-padded) correlation output of length 2N - 1. Index
/// `zero_lag` corresponds to the pump frequency (zero frequency offset).
struct MatchedFilterOutput {
  std::vector<std::complex<double>> total;
  std::vector<std::complex<double>> correlation;  // S_corr
  std::vector<std::complex<double>> background;   // B_bg
  double spacing = 1.0;
  std::size_t zero_lag = 0;
  double signal_power = 0.0;  // sum |E_s|^2 * spacing

  double offset(std::size_t index) const;
};

/// E_out(nu) = sum_nu' [signal + noise](nu') filter(nu - nu') dnu', computed by
/// direct summation. Throws std::invalid_argument when the three fields do
/// not share size and spacing.
MatchedFilterOutput matched_filter(const ClassicalField& signal, const ClassicalField& noise,
                                   const ClassicalField& filter);

/// Peak output |filter response at zero lag| for an arbitrary filter.
std::complex<double> zero_lag_response(const ClassicalField& input, const ClassicalField& filter);

/// Expected background power sigma^2 * sum |E_s|^2 * dnu^2 at zero lag.
double expected_background_power(const ClassicalField& signal, double noise_variance);

/// |S_corr(0)|^2 / E|B_bg(0)|^2; +infinity for zero noise.
double snr_peak(const MatchedFilterOutput& output, double noise_variance);

struct MonteCarloBackground {
  double mean_power = 0.0;  // mean |B_bg(0)|^2
  double expected = 0.0;
  std::size_t draws = 0;
};

/// Draw-wise noise uses seed + draw index substreams, so results do not
/// depend on `workers`.
MonteCarloBackground monte_carlo_background(const ClassicalField& signal, double noise_variance,
                                            std::size_t draws, std::uint64_t seed,
                                            unsigned workers = 1);

struct SeparabilityReport {
  double delta_t = 0.0;        // s
  double delta_nu_sum = 0.0;   // Hz
  double product = 0.0;
  double violation_factor = 0.0;  // 0.5 / product

  bool classical_compatible() const { return product >= 0.5; }
};

/// Throws std::invalid_argument unless both inputs are positive.
SeparabilityReport separability(double delta_t, double delta_nu_sum);

/// Violation factor of a quoted product, 0.5 / product.
double violation_factor(double product);

/// Fourier-limited time correlation 1 / bandwidth.
double bandwidth_to_time(double delta_nu);

}  // namespace csfg
