#include "csfg/pump_perturbation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace csfg {

namespace {
constexpr cplx kI{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

void ParametricConfig::validate() const {
  if (!(pump_amplitude >= 0.0) || !std::isfinite(pump_amplitude)) {
    throw std::invalid_argument("pump_amplitude must be finite and non-negative");
  }
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    throw std::invalid_argument("coupling must be finite and non-negative");
  }
  if (!(shaper_transmission >= 0.0 && shaper_transmission <= 1.0)) {
    throw std::invalid_argument("shaper_transmission must lie in [0, 1]");
  }
  if (!(residue_amplitude >= 0.0) || !std::isfinite(residue_amplitude)) {
    throw std::invalid_argument("residue_amplitude must be finite and non-negative");
  }
  if (!std::isfinite(pump_phase)) throw std::invalid_argument("pump_phase must be finite");
  if (!std::isfinite(residue_phase)) throw std::invalid_argument("residue_phase must be finite");
}

cplx PairAmplitudeSet::moment_sum() const {
  return std::accumulate(moments.begin(), moments.end(), cplx{});
}

double PairAmplitudeSet::total_photons() const {
  return std::accumulate(signal_photons.begin(), signal_photons.end(), 0.0) +
         std::accumulate(idler_photons.begin(), idler_photons.end(), 0.0);
}

ExpectationBundle bundle_from_pairs(const ParametricConfig& config, const PairAmplitudeSet& pairs) {
  ExpectationBundle b;
  b.pair_sum = pairs.moment_sum();
  b.photon_number = pairs.total_photons();
  b.hamiltonian = 2.0 * std::real(std::conj(config.pump_field()) * b.pair_sum);
  return b;
}

PairAmplitudeSet opa_pair_moment_at_dither(const ParametricConfig& config, const ModeGrid& grid,
                                           const PhaseProfile& profile, const SeedConfig& seed,
                                           double dither_phase) {
  config.validate();
  if (seed.amplitude < 0.0) throw std::invalid_argument("seed amplitude must be non-negative");

  const std::size_t pairs = grid.mode_count();
  PairAmplitudeSet out;
  out.moments.resize(pairs);
  out.signal_photons.resize(pairs);
  out.idler_photons.resize(pairs);
  if (seed.mode_offset) out.seeded_index = grid.pair_index(*seed.mode_offset);

  const double g = config.gain();
  const double ch = std::cosh(g);
  const double sh = std::sinh(g);
  const double transmission = config.shaper_transmission;
  const cplx base = -kI * std::polar(ch * sh * transmission, config.pump_phase);
  const double spontaneous_photons = sh * sh * transmission;

  for (std::size_t m = 0; m < pairs; ++m) {
    const double rho = grid.density[m];
    const double phase = static_pair_phase(profile, grid.half_offsets[m]) + dither_phase;
    out.moments[m] = base * rho * std::polar(1.0, phase);
    out.signal_photons[m] = spontaneous_photons * rho;
    out.idler_photons[m] = spontaneous_photons * rho;
  }

  if (out.seeded_index) {
    const std::size_t k = *out.seeded_index;
    const double n_sd = seed.photons();
    out.stimulated_moment =
        base * n_sd * std::polar(1.0, seed.pair_phase_setpoint + dither_phase);
    out.moments[k] += out.stimulated_moment;
    out.signal_photons[k] += n_sd * ch * ch * transmission;
    out.idler_photons[k] += n_sd * sh * sh * transmission;
  }
  return out;
}

PairAmplitudeSet opa_pair_moment(const ParametricConfig& config, const ModeGrid& grid,
                                 const PhaseProfile& profile, const SeedConfig& seed,
                                 double time) {
  return opa_pair_moment_at_dither(config, grid, profile, seed, profile.dither_phase(time));
}

cplx pump_correction_full(const ParametricConfig& config, const ExpectationBundle& input,
                          std::size_t mode_pairs) {
  const double amp = config.pump_amplitude;
  if (!(amp > 0.0)) {
    throw std::invalid_argument("pump_correction_full needs a non-zero pump amplitude");
  }
  const double g = config.gain();
  const double sh = std::sinh(g);
  const double sh2g = std::sinh(2.0 * g);
  const cplx alpha_p = config.pump_field();
  const double m = static_cast<double>(mode_pairs);

  const cplx recombination = -kI * input.pair_sum * sh2g / (2.0 * amp);
  const cplx depletion = -alpha_p * (input.photon_number + m) * sh * sh / (2.0 * amp * amp);
  const cplx hamiltonian =
      alpha_p * kI * input.hamiltonian * (sh2g - 2.0 * g) / (4.0 * amp * amp * amp);
  return recombination + depletion + hamiltonian;
}

cplx pump_correction_lowgain(const ParametricConfig& config, const ExpectationBundle& input,
                             std::size_t mode_pairs) {
  const double ct = config.coupling;
  const double m = static_cast<double>(mode_pairs);
  return -kI * ct * input.pair_sum -
         config.pump_field() * (input.photon_number + m) * ct * ct / 2.0;
}

cplx pump_correction_lowgain(const ParametricConfig& config, const PairAmplitudeSet& pairs,
                             std::size_t mode_pairs) {
  return pump_correction_lowgain(config, bundle_from_pairs(config, pairs), mode_pairs);
}

cplx depleted_lo_amplitude(const ParametricConfig& config, const SeedConfig& seed,
                           std::size_t mode_pairs) {
  const double ct = config.coupling;
  const double m = static_cast<double>(mode_pairs);
  return config.pump_field() * (1.0 - (seed.photons() + m) * ct * ct / 2.0);
}

cplx sagnac_output(const ParametricConfig& config, cplx correction, const SeedConfig& seed,
                   std::size_t mode_pairs) {
  const double ct = config.coupling;
  const double m = static_cast<double>(mode_pairs);
  return config.residue_field() -
         config.pump_field() * (seed.photons() + m) * ct * ct / (2.0 * kSqrt2) +
         correction / kSqrt2;
}

}  // namespace csfg
