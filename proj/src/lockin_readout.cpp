#include "csfg/lockin_readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "csfg/errors.hpp"
#include "csfg/parallel.hpp"

namespace csfg {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("a scan needs at least 2 points");
  if (!(hi > lo)) throw std::invalid_argument("scan range must be increasing");
  std::vector<double> values(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) values[i] = lo + step * static_cast<double>(i);
  values.back() = hi;
  return values;
}

double lo_correction(const ParametricConfig& config, const ModeGrid& grid,
                     const PhaseProfile& profile, const SeedConfig& seed) {
  if (config.residue_amplitude == 0.0) return std::numeric_limits<double>::infinity();
  const auto pairs = opa_pair_moment_at_dither(config, grid, profile, seed, 0.0);
  const cplx full = invariant_amplitude(config, seed, pairs.total_photons());
  return std::abs(full - config.residue_field()) / config.residue_amplitude;
}

LockinResult demodulate_numeric(const ParametricConfig& config, const ModeGrid& grid,
                                const PhaseProfile& profile, const SeedConfig& seed,
                                std::size_t samples) {
  const cplx lo = config.residue_field();
  const cplx prefactor = -kI / kSqrt2 * config.coupling;

  double full = 0.0;
  double stimulated = 0.0;
  double spontaneous = 0.0;
  double quadratic = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(samples);
    const double weight = std::sin(theta);
    const auto pairs = opa_pair_moment_at_dither(config, grid, profile, seed,
                                                 profile.dither_amplitude * weight);
    const cplx dith_stim = prefactor * pairs.stimulated_moment;
    const cplx dith_spont = prefactor * pairs.spontaneous_sum();
    const cplx dith = dithered_amplitude(pairs, config);

    full += std::norm(lo + dith) * weight;
    stimulated += 2.0 * std::real(std::conj(lo) * dith_stim) * weight;
    spontaneous += 2.0 * std::real(std::conj(lo) * dith_spont) * weight;
    quadratic += (std::norm(lo) + std::norm(dith)) * weight;
  }
  // (1/pi) * (2 pi / N) * sum
  const double norm = 2.0 / static_cast<double>(samples);
  LockinResult r;
  r.demodulated_signal = full * norm;
  r.stimulated_term = stimulated * norm;
  r.spontaneous_term = spontaneous * norm;
  r.quadratic_term = quadratic * norm;
  return r;
}

LockinResult demodulate_analytic(const ParametricConfig& config, const ModeGrid& grid,
                                 const PhaseProfile& profile, const SeedConfig& seed) {
  const double g = config.gain();
  const double prefactor = kSqrt2 * dither_constant(profile.dither_amplitude) *
                           config.shaper_transmission * config.residue_amplitude *
                           config.coupling * std::cosh(g) * std::sinh(g);
  const double reference = config.pump_phase - config.residue_phase;

  double spontaneous = 0.0;
  for (std::size_t m = 0; m < grid.mode_count(); ++m) {
    spontaneous += grid.density[m] *
                   std::sin(static_pair_phase(profile, grid.half_offsets[m]) + reference);
  }
  double stimulated = 0.0;
  if (seed.mode_offset) {
    grid.pair_index(*seed.mode_offset);
    stimulated = seed.photons() * std::sin(seed.pair_phase_setpoint + reference);
  }

  LockinResult r;
  r.stimulated_term = prefactor * stimulated;
  r.spontaneous_term = prefactor * spontaneous;
  r.demodulated_signal = r.stimulated_term + r.spontaneous_term;
  return r;
}

}  // namespace

DemodulationMode parse_demodulation_mode(std::string_view name) {
  if (name == "numeric") return DemodulationMode::numeric;
  if (name == "analytic") return DemodulationMode::analytic;
  throw std::invalid_argument("unknown demodulation mode '" + std::string(name) + "'");
}

std::string_view to_string(DemodulationMode mode) {
  return mode == DemodulationMode::numeric ? "numeric" : "analytic";
}

std::string_view to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::gdd: return "gdd";
    case ScanKind::loss: return "loss";
    case ScanKind::residue_phase: return "residue-phase";
  }
  return "unknown";
}

cplx dithered_amplitude(const PairAmplitudeSet& pairs, const ParametricConfig& config) {
  return -kI / kSqrt2 * config.coupling * pairs.moment_sum();
}

cplx invariant_amplitude(const ParametricConfig& config, const SeedConfig& seed,
                         double photon_numbers) {
  const double ct = config.coupling;
  return config.residue_field() +
         config.pump_field() * (seed.photons() - photon_numbers) * ct * ct / (2.0 * kSqrt2);
}

double dither_constant(double dither_amplitude) {
  return 2.0 * std::cyl_bessel_j(1.0, dither_amplitude);
}

LockinResult demodulate(const ParametricConfig& config, const ModeGrid& grid,
                        const PhaseProfile& profile, const SeedConfig& seed,
                        const LockinOptions& options) {
  config.validate();
  if (!(profile.dither_amplitude >= 0.0)) {
    throw std::invalid_argument("dither amplitude must be non-negative");
  }
  LockinResult r;
  if (options.mode == DemodulationMode::numeric) {
    if (options.samples < kMinDemodulationSamples) {
      throw std::invalid_argument("numeric demodulation needs at least " +
                                  std::to_string(kMinDemodulationSamples) +
                                  " samples per period");
    }
    r = demodulate_numeric(config, grid, profile, seed, options.samples);
  } else {
    r = demodulate_analytic(config, grid, profile, seed);
  }
  r.rf_power = r.demodulated_signal * r.demodulated_signal;
  r.lo_correction = lo_correction(config, grid, profile, seed);
  return r;
}

namespace {

template <typename PointFn>
ScanResult run_scan(ScanKind kind, std::vector<double> parameters,
                    const ParametricConfig& config, const ModeGrid& grid,
                    const PhaseProfile& profile, const SeedConfig& seed,
                    const LockinOptions& options, PointFn&& point) {
  ScanResult scan;
  scan.kind = kind;
  scan.grid = grid;
  scan.config = config;
  scan.profile = profile;
  scan.seed = seed;
  scan.points.resize(parameters.size());
  scan.parameters = std::move(parameters);
  parallel_for(scan.parameters.size(), options.workers,
               [&](std::size_t i) { scan.points[i] = point(scan.parameters[i]); });
  return scan;
}

}  // namespace

ScanResult gdd_scan(double gdd_min, double gdd_max, std::size_t points,
                    const ParametricConfig& config, const ModeGrid& grid,
                    const PhaseProfile& profile, const SeedConfig& seed,
                    const LockinOptions& options) {
  return run_scan(ScanKind::gdd, linspace(gdd_min, gdd_max, points), config, grid, profile, seed,
                  options, [&](double gdd) {
                    PhaseProfile p = profile;
                    p.gdd = gdd;
                    return demodulate(config, grid, p, seed, options);
                  });
}

ScanResult loss_scan(double t_min, double t_max, std::size_t points,
                     const ParametricConfig& config, const ModeGrid& grid,
                     const PhaseProfile& profile, const SeedConfig& seed, bool compensate_seed,
                     const LockinOptions& options) {
  if (compensate_seed && !(t_min > 0.0)) {
    throw std::invalid_argument("seed compensation needs shaper_transmission > 0");
  }
  if (!(t_min >= 0.0) || t_max > 1.0) {
    throw std::invalid_argument("shaper_transmission range must lie in [0, 1]");
  }
  auto scan = run_scan(ScanKind::loss, linspace(t_min, t_max, points), config, grid, profile,
                       seed, options, [&](double transmission) {
                         ParametricConfig c = config;
                         c.shaper_transmission = transmission;
                         SeedConfig s = seed;
                         if (compensate_seed) s.amplitude = seed.amplitude / std::sqrt(transmission);
                         return demodulate(c, grid, profile, s, options);
                       });
  scan.seed_compensated = compensate_seed;
  return scan;
}

ScanResult residue_scan(double phase_min, double phase_max, std::size_t points,
                        const ParametricConfig& config, const ModeGrid& grid,
                        const PhaseProfile& profile, const SeedConfig& seed,
                        const LockinOptions& options) {
  return run_scan(ScanKind::residue_phase, linspace(phase_min, phase_max, points), config, grid,
                  profile, seed, options, [&](double phase) {
                    ParametricConfig c = config;
                    c.residue_phase = phase;
                    return demodulate(c, grid, profile, seed, options);
                  });
}

double find_peak_width(const ScanResult& scan) {
  const std::size_t n = scan.points.size();
  if (n < 3 || scan.parameters.size() != n) throw NotFoundError("scan too short for a peak");

  std::vector<double> envelope(n);
  for (std::size_t i = 0; i < n; ++i) envelope[i] = std::abs(scan.points[i].spontaneous_term);
  const double peak = *std::max_element(envelope.begin(), envelope.end());
  if (!(peak > 0.0)) throw NotFoundError("spontaneous term is identically zero");

  // Among (numerically) equal maxima take the one nearest zero.
  std::size_t centre = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (envelope[i] >= peak * (1.0 - 1e-9) &&
        (centre == n || std::abs(scan.parameters[i]) < std::abs(scan.parameters[centre]))) {
      centre = i;
    }
  }

  const double half = 0.5 * peak;
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double x0 = scan.parameters[inside];
    const double x1 = scan.parameters[outside];
    const double y0 = envelope[inside];
    const double y1 = envelope[outside];
    return x0 + (y0 - half) / (y0 - y1) * (x1 - x0);
  };

  std::size_t right = centre;
  while (right + 1 < n && envelope[right + 1] > half) ++right;
  if (right + 1 >= n) throw NotFoundError("peak does not fall to half maximum on the right");
  std::size_t left = centre;
  while (left > 0 && envelope[left - 1] > half) --left;
  if (left == 0) throw NotFoundError("peak does not fall to half maximum on the left");

  return crossing(right, right + 1) - crossing(left, left - 1);
}

LineFit fit_demodulated_line(const ScanResult& scan) {
  const std::size_t n = scan.points.size();
  if (n < 2) throw std::invalid_argument("line fit needs at least 2 points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += scan.parameters[i];
    my += scan.points[i].demodulated_signal;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = scan.parameters[i] - mx;
    sxx += dx * dx;
    sxy += dx * (scan.points[i].demodulated_signal - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double model = fit.intercept + fit.slope * scan.parameters[i];
    fit.max_residual = std::max(fit.max_residual, std::abs(scan.points[i].demodulated_signal - model));
  }
  return fit;
}

bool rf_power_monotonic(const ScanResult& scan) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < scan.points.size(); ++i) {
    const double d = scan.points[i].rf_power - scan.points[i - 1].rf_power;
    if (d < 0.0) up = false;
    if (d > 0.0) down = false;
  }
  return up || down;
}

std::vector<Su11Point> su11_spectrum(const ParametricConfig& config, const ModeGrid& grid,
                                     const PhaseProfile& profile) {
  config.validate();
  const double g = config.gain();
  const double transmission = config.shaper_transmission;
  std::vector<Su11Point> out(grid.mode_count());
  for (std::size_t m = 0; m < grid.mode_count(); ++m) {
    const double phase = static_pair_phase(profile, grid.half_offsets[m]);
    out[m].offset = grid.half_offsets[m];
    out[m].pair_phase = phase;
    out[m].intensity =
        g * g * grid.density[m] * (1.0 + transmission + 2.0 * transmission * std::cos(phase));
  }
  return out;
}

}  // namespace csfg
