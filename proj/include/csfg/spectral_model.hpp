#pragma once

#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

namespace csfg {

enum class DensityShape { flat, gaussian };

/// Whether spectral-phase coefficients multiply (2*pi*nu)^k or nu^k.
enum class FrequencyConvention { angular, ordinary };

DensityShape parse_density_shape(std::string_view name);
std::string_view to_string(DensityShape shape);
FrequencyConvention parse_frequency_convention(std::string_view name);
std::string_view to_string(FrequencyConvention convention);

/// Symmetric signal/idler pair grid around the degenerate frequency.
///
/// Pair m sits at offset (m - 1/2) * resolution for m = 1..M, so the
/// degenerate point itself never forms a pair. Density weights sum to M.
struct ModeGrid {
  double center_frequency = 0.0;     // Hz
  std::vector<double> half_offsets;  // Hz, strictly increasing
  double bandwidth = 0.0;            // Hz, full width
  double resolution = 0.0;           // Hz
  std::vector<double> density;       // dimensionless, sum == mode_count()

  std::size_t mode_count() const { return half_offsets.size(); }
  /// Effective measurement time T = 1 / resolution.
  double measurement_time() const { return 1.0 / resolution; }
  double density_sum() const;

  /// Index of the pair whose bin contains `offset`. Throws
  /// std::invalid_argument when the offset falls outside the grid.
  std::size_t pair_index(double offset) const;
};

/// Throws std::invalid_argument unless bandwidth > 0, resolution > 0
/// and resolution <= bandwidth.
ModeGrid build_grid(double bandwidth, double resolution, double center,
                    DensityShape shape = DensityShape::flat);

/// Spectral phase imprinted on every pair by the shaper, plus the
/// uniform lock-in dither D*sin(omega*t).
struct PhaseProfile {
  double global_phase = 0.0;      // rad
  double gdd = 0.0;               // s^2
  double quartic = 0.0;           // s^4
  double dither_amplitude = 0.0;  // rad
  double dither_frequency = 0.0;  // rad/s
  FrequencyConvention convention = FrequencyConvention::angular;

  double dither_phase(double time) const;
};

/// Convert an offset in Hz to the variable the phase polynomial uses.
double phase_variable(FrequencyConvention convention, double offset);

/// phi0 + beta2*w^2 + beta4*w^4 with w = phase_variable(offset); no dither.
double static_pair_phase(const PhaseProfile& profile, double offset);

/// static_pair_phase + D*sin(omega*time).
double pair_phase(const PhaseProfile& profile, double offset, double time);

/// Predicted width of the central GDD feature, 4*pi / (bandwidth in the
/// profile's convention)^2.
double predicted_gdd_width(double bandwidth,
                           FrequencyConvention convention = FrequencyConvention::angular);

inline constexpr double kPi = std::numbers::pi;

}  // namespace csfg
