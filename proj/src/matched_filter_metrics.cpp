#include "csfg/matched_filter_metrics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "csfg/parallel.hpp"

namespace csfg {

using cplx = std::complex<double>;

namespace {

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t draw) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32)};
  return std::mt19937_64(seq);
}

void check_same_grid(const ClassicalField& a, const ClassicalField& b, const char* what) {
  if (a.size() != b.size() || a.spacing != b.spacing) {
    throw std::invalid_argument(std::string("grid mismatch between signal and ") + what);
  }
}

}  // namespace

double ClassicalField::power() const {
  double sum = 0.0;
  for (const auto& e : amplitudes) sum += std::norm(e);
  return sum * spacing;
}

ClassicalField conjugate_mirror(const ClassicalField& field) {
  ClassicalField out;
  out.spacing = field.spacing;
  out.amplitudes.assign(field.amplitudes.rbegin(), field.amplitudes.rend());
  for (auto& e : out.amplitudes) e = std::conj(e);
  return out;
}

ClassicalField flat_field(std::size_t bins, double spacing) {
  return ClassicalField{std::vector<cplx>(bins, cplx{1.0, 0.0}), spacing};
}

ClassicalField gaussian_noise(std::size_t bins, double spacing, double variance, std::uint64_t seed) {
  auto rng = substream(seed, 0);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  ClassicalField out{std::vector<cplx>(bins), spacing};
  for (auto& e : out.amplitudes) {
    const double re = normal(rng);
    const double im = normal(rng);
    e = {re, im};
  }
  return out;
}

double MatchedFilterOutput::offset(std::size_t index) const {
  return (static_cast<double>(index) - static_cast<double>(zero_lag)) * spacing;
}

MatchedFilterOutput matched_filter(const ClassicalField& signal, const ClassicalField& noise,
                                   const ClassicalField& filter) {
  check_same_grid(signal, noise, "noise");
  check_same_grid(signal, filter, "filter");
  const std::size_t n = signal.size();
  if (n == 0) throw std::invalid_argument("matched filter needs a non-empty field");

  MatchedFilterOutput out;
  out.spacing = signal.spacing;
  out.zero_lag = n - 1;
  out.signal_power = signal.power();
  const std::size_t len = 2 * n - 1;
  out.correlation.assign(len, cplx{});
  out.background.assign(len, cplx{});
  out.total.assign(len, cplx{});

  for (std::size_t l = 0; l < len; ++l) {
    const std::size_t k_lo = l >= n - 1 ? l - (n - 1) : 0;
    const std::size_t k_hi = std::min(l, n - 1);
    cplx corr{};
    cplx bg{};
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      const cplx f = filter.amplitudes[l - k];
      corr += signal.amplitudes[k] * f;
      bg += noise.amplitudes[k] * f;
    }
    out.correlation[l] = corr * signal.spacing;
    out.background[l] = bg * signal.spacing;
    out.total[l] = out.correlation[l] + out.background[l];
  }
  return out;
}

cplx zero_lag_response(const ClassicalField& input, const ClassicalField& filter) {
  check_same_grid(input, filter, "filter");
  const std::size_t n = input.size();
  cplx acc{};
  for (std::size_t k = 0; k < n; ++k) acc += input.amplitudes[k] * filter.amplitudes[n - 1 - k];
  return acc * input.spacing;
}

double expected_background_power(const ClassicalField& signal, double noise_variance) {
  return noise_variance * signal.power() * signal.spacing;
}

double snr_peak(const MatchedFilterOutput& output, double noise_variance) {
  const double peak = std::norm(output.correlation.at(output.zero_lag));
  const double background = noise_variance * output.signal_power * output.spacing;
  if (background == 0.0) return std::numeric_limits<double>::infinity();
  return peak / background;
}

MonteCarloBackground monte_carlo_background(const ClassicalField& signal, double noise_variance,
                                            std::size_t draws, std::uint64_t seed,
                                            unsigned workers) {
  if (draws == 0) throw std::invalid_argument("monte carlo needs at least one draw");
  const ClassicalField filter = conjugate_mirror(signal);
  std::vector<double> power(draws);
  parallel_for(draws, workers, [&](std::size_t d) {
    auto rng = substream(seed, d + 1);
    std::normal_distribution<double> normal(0.0, std::sqrt(noise_variance / 2.0));
    ClassicalField noise{std::vector<cplx>(signal.size()), signal.spacing};
    for (auto& e : noise.amplitudes) {
      const double re = normal(rng);
      const double im = normal(rng);
      e = {re, im};
    }
    power[d] = std::norm(zero_lag_response(noise, filter));
  });

  MonteCarloBackground mc;
  mc.draws = draws;
  double sum = 0.0;
  for (double p : power) sum += p;
  mc.mean_power = sum / static_cast<double>(draws);
  mc.expected = expected_background_power(signal, noise_variance);
  return mc;
}

SeparabilityReport separability(double delta_t, double delta_nu_sum) {
  if (!(delta_t > 0.0)) throw std::invalid_argument("delta_t must be positive");
  if (!(delta_nu_sum > 0.0)) throw std::invalid_argument("delta_nu_sum must be positive");
  SeparabilityReport r;
  r.delta_t = delta_t;
  r.delta_nu_sum = delta_nu_sum;
  r.product = delta_t * delta_nu_sum;
  r.violation_factor = violation_factor(r.product);
  return r;
}

double violation_factor(double product) {
  if (!(product > 0.0)) throw std::invalid_argument("product must be positive");
  return 0.5 / product;
}

double bandwidth_to_time(double delta_nu) {
  if (!(delta_nu > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return 1.0 / delta_nu;
}

}  // namespace csfg
