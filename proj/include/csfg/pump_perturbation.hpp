#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "csfg/spectral_model.hpp"

namespace csfg {

using cplx = std::complex<double>;

/// Gain above which the low-gain expansions are flagged as doubtful.
inline constexpr double kPerturbativeGainLimit = 0.2;

/// Pump, crystal and Sagnac parameters shared by both passes.
struct ParametricConfig {
  double pump_amplitude = 0.0;       // |alpha_p|, sqrt(photons)
  double pump_phase = 0.0;           // rad
  double coupling = 0.0;             // chi*t, dimensionless
  double shaper_transmission = 1.0;  // T in [0, 1]
  double residue_amplitude = 0.0;    // |alpha_r|, sqrt(photons)
  double residue_phase = 0.0;        // rad

  cplx pump_field() const { return std::polar(pump_amplitude, pump_phase); }
  cplx residue_field() const { return std::polar(residue_amplitude, residue_phase); }
  double gain() const { return pump_amplitude * coupling; }
  bool perturbative() const { return gain() <= kPerturbativeGainLimit; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Coherent seed on one signal mode, phase-locked at a set point.
struct SeedConfig {
  double amplitude = 0.0;                // |alpha_sd|
  double pair_phase_setpoint = kPi;      // phi_sd, rad
  std::optional<double> mode_offset;     // Hz; empty means unseeded

  double photons() const { return amplitude * amplitude; }
  bool active() const { return mode_offset.has_value() && amplitude > 0.0; }
};

/// Pair second moments <a_nu a_-nu> and photon numbers at the plane just
/// before the second pass (after shaper phase and loss).
struct PairAmplitudeSet {
  std::vector<cplx> moments;             // per pair, stimulated part included
  std::vector<double> signal_photons;    // <N_nu>
  std::vector<double> idler_photons;     // <N_-nu>
  std::optional<std::size_t> seeded_index;
  cplx stimulated_moment{};              // seed-driven part of moments[seeded_index]

  std::size_t size() const { return moments.size(); }
  cplx moment_sum() const;
  cplx spontaneous_sum() const { return moment_sum() - stimulated_moment; }
  double total_photons() const;
};

/// Input-state moments entering the second-order pump correction.
struct ExpectationBundle {
  cplx pair_sum{};            // <sum_nu a_nu a_-nu>
  double photon_number = 0.0; // <N_s + N_i>
  double hamiltonian = 0.0;   // <H'>, H' = H / chi
};

/// Moments of a vacuum/coherent product input; H' follows from the pump
/// field and the pair sum.
ExpectationBundle bundle_from_pairs(const ParametricConfig& config, const PairAmplitudeSet& pairs);

/// First-pass undepleted-pump solution carried through the shaper.
///
/// Vacuum pairs: <a a> = -i e^{i phi_p} cosh(g) sinh(g) T rho e^{i Phi(t)},
/// <N> = sinh^2(g) T rho. The seeded pair additionally gets
/// -i e^{i phi_p} cosh(g) sinh(g) T |alpha_sd|^2 e^{i (phi_sd + dither)}
/// and |alpha_sd|^2 cosh^2(g) T signal photons.
PairAmplitudeSet opa_pair_moment(const ParametricConfig& config, const ModeGrid& grid,
                                 const PhaseProfile& profile, const SeedConfig& seed,
                                 double time);

/// Same as opa_pair_moment with the dither phase given directly.
PairAmplitudeSet opa_pair_moment_at_dither(const ParametricConfig& config, const ModeGrid& grid,
                                           const PhaseProfile& profile, const SeedConfig& seed,
                                           double dither_phase);

/// Second-order pump correction valid for arbitrary gain:
///   -i <sum aa> sinh(2g) / (2|a_p|)
///   - a_p (<N_s+N_i> + M) sinh^2(g) / (2|a_p|^2)
///   + a_p i <H'> (sinh(2g) - 2g) / (4|a_p|^3)
/// Throws std::invalid_argument when the pump amplitude is zero.
cplx pump_correction_full(const ParametricConfig& config, const ExpectationBundle& input,
                          std::size_t mode_pairs);

/// Second order in g:  -i chi t <sum aa> - a_p (<N_s+N_i> + M) (chi t)^2 / 2.
cplx pump_correction_lowgain(const ParametricConfig& config, const ExpectationBundle& input,
                             std::size_t mode_pairs);
cplx pump_correction_lowgain(const ParametricConfig& config, const PairAmplitudeSet& pairs,
                             std::size_t mode_pairs);

/// Field at the Sagnac dark port:
///   alpha_r e^{i phi_r} - a_p (|alpha_sd|^2 + M)(chi t)^2 / (2 sqrt 2) + correction / sqrt 2.
cplx sagnac_output(const ParametricConfig& config, cplx correction, const SeedConfig& seed,
                   std::size_t mode_pairs);

/// Local-oscillator amplitude left after first-pass depletion.
cplx depleted_lo_amplitude(const ParametricConfig& config, const SeedConfig& seed,
                           std::size_t mode_pairs);

}  // namespace csfg
