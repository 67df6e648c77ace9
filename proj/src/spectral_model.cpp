#include "csfg/spectral_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace csfg {

DensityShape parse_density_shape(std::string_view name) {
  if (name == "flat") return DensityShape::flat;
  if (name == "gaussian") return DensityShape::gaussian;
  throw std::invalid_argument("unknown density shape '" + std::string(name) + "'");
}

std::string_view to_string(DensityShape shape) {
  return shape == DensityShape::flat ? "flat" : "gaussian";
}

FrequencyConvention parse_frequency_convention(std::string_view name) {
  if (name == "angular") return FrequencyConvention::angular;
  if (name == "ordinary") return FrequencyConvention::ordinary;
  throw std::invalid_argument("unknown frequency convention '" + std::string(name) + "'");
}

std::string_view to_string(FrequencyConvention convention) {
  return convention == FrequencyConvention::angular ? "angular" : "ordinary";
}

double ModeGrid::density_sum() const {
  return std::accumulate(density.begin(), density.end(), 0.0);
}

std::size_t ModeGrid::pair_index(double offset) const {
  const double edge = static_cast<double>(mode_count()) * resolution;
  if (!(offset > 0.0) || offset > edge) {
    throw std::invalid_argument("offset " + std::to_string(offset) +
                                " Hz lies outside the mode grid (0, " + std::to_string(edge) +
                                "]");
  }
  auto bin = static_cast<std::size_t>(std::ceil(offset / resolution));
  if (bin == 0) bin = 1;
  return std::min(bin, mode_count()) - 1;
}

ModeGrid build_grid(double bandwidth, double resolution, double center, DensityShape shape) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (resolution > bandwidth) throw std::invalid_argument("resolution exceeds bandwidth");

  // M = bandwidth * T / 2 with T = 1 / resolution.
  const auto pairs = static_cast<std::size_t>(std::llround(bandwidth / (2.0 * resolution)));
  if (pairs == 0) throw std::invalid_argument("grid holds no mode pairs");

  ModeGrid grid;
  grid.center_frequency = center;
  grid.bandwidth = bandwidth;
  grid.resolution = resolution;
  grid.half_offsets.resize(pairs);
  grid.density.assign(pairs, 1.0);
  for (std::size_t m = 0; m < pairs; ++m) {
    grid.half_offsets[m] = (static_cast<double>(m) + 0.5) * resolution;
  }

  if (shape == DensityShape::gaussian) {
    // FWHM of the full (signal + idler) spectrum equals the bandwidth.
    const double a = 4.0 * std::log(2.0) / (bandwidth * bandwidth);
    for (std::size_t m = 0; m < pairs; ++m) {
      const double nu = grid.half_offsets[m];
      grid.density[m] = std::exp(-a * nu * nu);
    }
    const double scale = static_cast<double>(pairs) / grid.density_sum();
    for (double& w : grid.density) w *= scale;
  }
  return grid;
}

double PhaseProfile::dither_phase(double time) const {
  return dither_amplitude * std::sin(dither_frequency * time);
}

double phase_variable(FrequencyConvention convention, double offset) {
  return convention == FrequencyConvention::angular ? 2.0 * kPi * offset : offset;
}

double static_pair_phase(const PhaseProfile& profile, double offset) {
  const double w = phase_variable(profile.convention, offset);
  const double w2 = w * w;
  return profile.global_phase + profile.gdd * w2 + profile.quartic * w2 * w2;
}

double pair_phase(const PhaseProfile& profile, double offset, double time) {
  return static_pair_phase(profile, offset) + profile.dither_phase(time);
}

double predicted_gdd_width(double bandwidth, FrequencyConvention convention) {
  const double w = phase_variable(convention, bandwidth);
  return 4.0 * kPi / (w * w);
}

}  // namespace csfg
