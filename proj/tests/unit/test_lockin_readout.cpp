#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "csfg/errors.hpp"
#include "csfg/lockin_readout.hpp"
#include "test_support.hpp"

using namespace csfg;
using Catch::Approx;

namespace {

const cplx kI{0.0, 1.0};

ParametricConfig lab_config(double residue_phase = 0.0) {
  return ParametricConfig{1000.0, 0.0, 3e-5, 1.0, 0.1, residue_phase};
}

PhaseProfile lab_profile() {
  PhaseProfile p;
  p.dither_amplitude = 0.5;
  p.dither_frequency = 2.0 * kPi * 173e3;
  return p;
}

ModeGrid lab_grid() { return build_grid(113e12, 0.5e12, 169.37e12); }

SeedConfig lab_seed() { return SeedConfig{10.0, kPi, 22.8e12}; }

// Scale of one unit-density pair in the demodulated signal.
double pair_scale(const ParametricConfig& c, double dither) {
  const double g = c.gain();
  return std::sqrt(2.0) * dither_constant(dither) * c.shaper_transmission * c.residue_amplitude *
         c.coupling * std::cosh(g) * std::sinh(g);
}

}  // namespace

TEST_CASE("dithered amplitude examples") {
  PairAmplitudeSet empty;
  empty.moments.assign(5, cplx{});
  CHECK(dithered_amplitude(empty, lab_config()) == cplx{});

  ParametricConfig c{2.0, 0.0, 0.01, 0.8, 0.0, 0.0};
  const double g = c.gain();
  PairAmplitudeSet one;
  one.moments = {-kI * g * 0.8};
  const cplx single = dithered_amplitude(one, c);
  CHECK(single.real() == Approx(-g * 0.8 * 0.01 / std::sqrt(2.0)));
  CHECK(std::abs(single.imag()) < 1e-20);

  PairAmplitudeSet many;
  many.moments.assign(37, one.moments[0]);
  CHECK(testing::rel_diff(dithered_amplitude(many, c), 37.0 * single) < 1e-14);
}

TEST_CASE("invariant amplitude examples") {
  SeedConfig seed{10.0, kPi, 22.8e12};
  auto off = lab_config(0.3);
  off.coupling = 0.0;
  CHECK(invariant_amplitude(off, seed, 42.0) == off.residue_field());
  CHECK(invariant_amplitude(lab_config(0.3), seed, 100.0) == lab_config(0.3).residue_field());
  const cplx v = invariant_amplitude(lab_config(), seed, 0.0);
  CHECK(v.real() == Approx(0.1000318198051534).epsilon(1e-13));
}

TEST_CASE("no dither gives no demodulated signal") {
  PhaseProfile p = lab_profile();
  p.dither_amplitude = 0.0;
  for (auto mode : {DemodulationMode::numeric, DemodulationMode::analytic}) {
    const auto r = demodulate(lab_config(0.7), lab_grid(), p, lab_seed(), {mode, 128, 1});
    const double amplitude = pair_scale(lab_config(), 0.5) * (113.0 + lab_seed().photons());
    CHECK(std::abs(r.demodulated_signal) < 1e-9 * amplitude);
  }
}

TEST_CASE("zero residue phase and pi seed nullify the signal at zero dispersion") {
  const double scale = pair_scale(lab_config(), 0.5) * 113.0;
  for (double d : {0.1, 0.5, 1.0}) {
    PhaseProfile p = lab_profile();
    p.dither_amplitude = d;
    const auto r = demodulate(lab_config(), lab_grid(), p, lab_seed());
    CHECK(std::abs(r.demodulated_signal) < 1e-12 * scale);
  }
}

TEST_CASE("quadrature residue recovers the Bessel constant") {
  const auto r = demodulate(lab_config(kPi / 2.0), lab_grid(), lab_profile(), SeedConfig{});
  CHECK(r.spontaneous_term == Approx(-6.97305942580853e-06).epsilon(1e-6));
  CHECK(dither_constant(0.5) == Approx(0.4845369153497478).epsilon(1e-14));
}

TEST_CASE("numeric and analytic demodulation agree") {
  testing::Draws draws(31);
  const auto grid = build_grid(20e12, 0.5e12, 169.37e12);
  for (int i = 0; i < 100; ++i) {
    auto c = lab_config(draws.uniform(-kPi, kPi));
    c.pump_phase = draws.uniform(-kPi, kPi);
    c.shaper_transmission = draws.uniform(0.1, 1.0);
    PhaseProfile p = lab_profile();
    p.dither_amplitude = draws.uniform(0.01, 1.0);
    p.global_phase = draws.uniform(-kPi, kPi);
    p.gdd = draws.uniform(-300e-30, 300e-30);
    SeedConfig s{draws.uniform(0.0, 10.0), draws.uniform(-kPi, kPi), 5.1e12};
    const auto num = demodulate(c, grid, p, s, {DemodulationMode::numeric, 128, 1});
    const auto ana = demodulate(c, grid, p, s, {DemodulationMode::analytic, 128, 1});
    CHECK(testing::rel_diff(num.demodulated_signal, ana.demodulated_signal) <= 1e-6);
    CHECK(testing::rel_diff(num.spontaneous_term, ana.spontaneous_term) <= 1e-6);
  }
}

TEST_CASE("quadratic terms drop out of the demodulation") {
  testing::Draws draws(32);
  for (int i = 0; i < 20; ++i) {
    PhaseProfile p = lab_profile();
    p.gdd = draws.uniform(-100e-30, 100e-30);
    const auto r = demodulate(lab_config(draws.uniform(0.2, 1.2)), lab_grid(), p, lab_seed());
    const double cross = std::abs(r.stimulated_term + r.spontaneous_term);
    CHECK(std::abs(r.quadratic_term) < 1e-9 * cross);
    CHECK(std::abs(r.demodulated_signal - r.stimulated_term - r.spontaneous_term) < 1e-9 * cross);
  }
}

TEST_CASE("demodulated signal is periodic and jointly odd") {
  testing::Draws draws(33);
  const auto grid = build_grid(20e12, 0.5e12, 169.37e12);
  for (int i = 0; i < 30; ++i) {
    const double phi_r = draws.uniform(-kPi, kPi);
    PhaseProfile p = lab_profile();
    p.global_phase = draws.uniform(-kPi, kPi);
    p.gdd = draws.uniform(-200e-30, 200e-30);
    SeedConfig s{3.0, draws.uniform(-kPi, kPi), 2.1e12};
    const double base = demodulate(lab_config(phi_r), grid, p, s).demodulated_signal;
    const double scale = pair_scale(lab_config(), 0.5) * (grid.mode_count() + s.photons());

    const double shifted = demodulate(lab_config(phi_r + 2.0 * kPi), grid, p, s).demodulated_signal;
    CHECK(std::abs(shifted - base) < 1e-9 * scale);

    PhaseProfile q = p;
    q.global_phase = -p.global_phase;
    q.gdd = -p.gdd;
    SeedConfig t = s;
    t.pair_phase_setpoint = -s.pair_phase_setpoint;
    const double mirrored = demodulate(lab_config(-phi_r), grid, q, t).demodulated_signal;
    CHECK(std::abs(mirrored + base) < 1e-9 * scale);
  }
}

TEST_CASE("gdd scans are symmetric for real residue and seed phases") {
  const auto grid = build_grid(40e12, 0.5e12, 169.37e12);
  for (double phi_r : {0.0, kPi}) {
    for (double phi_sd : {0.0, kPi}) {
      const auto scan = gdd_scan(-300e-30, 300e-30, 61, lab_config(phi_r), grid, lab_profile(),
                                 SeedConfig{10.0, phi_sd, 2.1e12});
      double top = 0.0;
      for (const auto& pt : scan.points) top = std::max(top, pt.rf_power);
      for (std::size_t i = 0; i < scan.points.size(); ++i) {
        const double a = scan.points[i].rf_power;
        const double b = scan.points[scan.points.size() - 1 - i].rf_power;
        CHECK(std::abs(a - b) <= 1e-9 * top);
      }
    }
  }
}

TEST_CASE("quadrature-offset residue leaves a stimulated pedestal") {
  const double w = predicted_gdd_width(113e12);
  const auto scan = gdd_scan(-10 * w, 10 * w, 201, lab_config(0.41 * kPi), lab_grid(),
                             lab_profile(), lab_seed());
  const double pedestal = scan.points.front().stimulated_term;
  CHECK(std::abs(pedestal) > 0.0);
  double asym = 0.0;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    CHECK(scan.points[i].stimulated_term == Approx(pedestal).epsilon(1e-9));
    asym = std::max(asym, std::abs(scan.points[i].rf_power -
                                   scan.points[scan.points.size() - 1 - i].rf_power));
  }
  CHECK(asym > 0.0);
}

TEST_CASE("spontaneous term decays at large dispersion") {
  const double w = predicted_gdd_width(113e12);
  PhaseProfile p = lab_profile();
  p.gdd = 10.0 * w;
  const auto far = demodulate(lab_config(), lab_grid(), p, lab_seed());
  const double envelope = pair_scale(lab_config(), 0.5) * 113.0;
  CHECK(std::abs(far.spontaneous_term) < 0.1 * envelope);
}

TEST_CASE("signal is linear in the residue amplitude") {
  testing::Draws draws(34);
  for (int i = 0; i < 20; ++i) {
    auto c = lab_config(draws.uniform(-kPi, kPi));
    PhaseProfile p = lab_profile();
    p.gdd = draws.uniform(-100e-30, 100e-30);
    const double base = demodulate(c, lab_grid(), p, lab_seed()).demodulated_signal;
    const double k = draws.uniform(0.1, 20.0);
    c.residue_amplitude *= k;
    const double scaled = demodulate(c, lab_grid(), p, lab_seed()).demodulated_signal;
    const double amplitude = pair_scale(lab_config(), 0.5) * (113.0 + lab_seed().photons());
    CHECK(std::abs(scaled - k * base) < 1e-9 * k * (std::abs(base) + amplitude));
  }
}

TEST_CASE("signal scales as the square of chi t at low gain") {
  auto c = lab_config(kPi / 3.0);
  c.coupling = 3e-6;
  const double small = demodulate(c, lab_grid(), lab_profile(), lab_seed()).demodulated_signal;
  c.coupling = 3e-5;
  const double large = demodulate(c, lab_grid(), lab_profile(), lab_seed()).demodulated_signal;
  CHECK(large / small == Approx(100.0).epsilon(2.0 * 0.03 * 0.03));
}

TEST_CASE("loss scan with seed compensation is affine in T") {
  for (double phi_r : {0.1 * kPi, 0.4 * kPi, 0.5 * kPi}) {
    const auto scan = loss_scan(0.05, 1.0, 96, lab_config(phi_r), lab_grid(), lab_profile(),
                                lab_seed(), true);
    const auto fit = fit_demodulated_line(scan);
    CHECK(fit.max_residual < 1e-9 * std::abs(fit.slope));
    for (const auto& pt : scan.points) {
      CHECK(pt.stimulated_term == Approx(scan.points.back().stimulated_term).epsilon(1e-9));
    }
  }
}

TEST_CASE("residue phase sets the loss trend away from zero dispersion") {
  // Half a predicted width below zero the stimulated and spontaneous terms
  // cross at T = 1.13 (0.5 pi), 0.96 (0.4 pi) and 0.42 (0.1 pi).
  PhaseProfile p = lab_profile();
  p.gdd = -0.5 * predicted_gdd_width(113e12);
  auto trend = [&](double phi_r) {
    return rf_power_monotonic(
        loss_scan(0.05, 1.0, 96, lab_config(phi_r), lab_grid(), p, lab_seed(), true));
  };
  CHECK(trend(0.5 * kPi));
  CHECK_FALSE(trend(0.4 * kPi));
  CHECK_FALSE(trend(0.1 * kPi));
}

TEST_CASE("balanced terms flip the loss trend") {
  // Zero dispersion: signal ~ sin(phi_r) (|alpha_sd|^2 - T M), zero at T = 100/113.
  const auto scan = loss_scan(0.05, 1.0, 96, lab_config(0.1 * kPi), lab_grid(), lab_profile(),
                              lab_seed(), true);
  CHECK_FALSE(rf_power_monotonic(scan));
  const auto fit = fit_demodulated_line(scan);
  CHECK(-fit.intercept / fit.slope == Approx(100.0 / 113.0).epsilon(1e-6));
}

TEST_CASE("unit transmission reproduces a plain demodulation") {
  const auto scan = loss_scan(0.5, 1.0, 3, lab_config(0.3), lab_grid(), lab_profile(), lab_seed(), true);
  const auto direct = demodulate(lab_config(0.3), lab_grid(), lab_profile(), lab_seed());
  CHECK(scan.points.back().demodulated_signal == direct.demodulated_signal);
  const auto gdd = gdd_scan(-1e-28, 0.0, 2, lab_config(0.3), lab_grid(), lab_profile(), lab_seed());
  CHECK(gdd.points.back().demodulated_signal == direct.demodulated_signal);
}

TEST_CASE("scan argument validation") {
  CHECK_THROWS_AS(loss_scan(0.0, 1.0, 5, lab_config(), lab_grid(), lab_profile(), lab_seed(), true),
                  std::invalid_argument);
  CHECK_NOTHROW(loss_scan(0.0, 1.0, 5, lab_config(), lab_grid(), lab_profile(), lab_seed(), false));
  CHECK_THROWS_AS(loss_scan(0.5, 1.5, 5, lab_config(), lab_grid(), lab_profile(), lab_seed(), false),
                  std::invalid_argument);
  CHECK_THROWS_AS(gdd_scan(0.0, 1e-28, 1, lab_config(), lab_grid(), lab_profile(), lab_seed()),
                  std::invalid_argument);
  CHECK_THROWS_AS(demodulate(lab_config(), lab_grid(), lab_profile(), lab_seed(),
                             {DemodulationMode::numeric, 63, 1}),
                  std::invalid_argument);
  const auto two = residue_scan(-1.0, 1.0, 2, lab_config(), lab_grid(), lab_profile(), lab_seed());
  CHECK(two.parameters == std::vector<double>{-1.0, 1.0});
}

TEST_CASE("scan results do not depend on the worker count") {
  const double w = predicted_gdd_width(113e12);
  const auto one = gdd_scan(-10 * w, 10 * w, 41, lab_config(), lab_grid(), lab_profile(), lab_seed(),
                            {DemodulationMode::numeric, 128, 1});
  const auto four = gdd_scan(-10 * w, 10 * w, 41, lab_config(), lab_grid(), lab_profile(), lab_seed(),
                             {DemodulationMode::numeric, 128, 4});
  for (std::size_t i = 0; i < one.points.size(); ++i) {
    CHECK(one.points[i].demodulated_signal == four.points[i].demodulated_signal);
  }
}

TEST_CASE("peak width of the 113 THz scan") {
  const double w = predicted_gdd_width(113e12);
  const auto scan = gdd_scan(-10 * w, 10 * w, 401, lab_config(), lab_grid(), lab_profile(), lab_seed());
  const double width = find_peak_width(scan);
  CHECK(width * 1e30 >= 15.0);
  CHECK(width * 1e30 <= 45.0);

  const auto half_grid = build_grid(56.5e12, 0.5e12, 169.37e12);
  const double wh = predicted_gdd_width(56.5e12);
  const auto half_scan =
      gdd_scan(-10 * wh, 10 * wh, 401, lab_config(), half_grid, lab_profile(), SeedConfig{});
  CHECK(find_peak_width(half_scan) / width == Approx(4.0).epsilon(0.1));
}

TEST_CASE("single-pair peak width is one lobe of a sinusoid") {
  const auto grid = build_grid(1e12, 0.5e12, 169.37e12);
  const double w1 = 2.0 * kPi * 0.25e12;
  const double period = kPi / (w1 * w1);
  const auto scan = gdd_scan(-2.0 * period, 2.0 * period, 4001, lab_config(), grid, lab_profile(),
                             SeedConfig{});
  CHECK(find_peak_width(scan) == Approx(8.48826363156775e-25).epsilon(1e-4));
}

TEST_CASE("flat scan has no peak") {
  auto c = lab_config();
  c.residue_amplitude = 0.0;
  const auto scan = gdd_scan(-1e-28, 1e-28, 11, c, lab_grid(), lab_profile(), lab_seed());
  CHECK_THROWS_AS(find_peak_width(scan), NotFoundError);
}

TEST_CASE("su11 interferogram") {
  const auto grid = lab_grid();
  const auto c = lab_config();
  const double g = c.gain();
  for (const auto& pt : su11_spectrum(c, grid, PhaseProfile{})) {
    CHECK(pt.intensity == Approx(4.0 * g * g).epsilon(1e-14));
  }
  PhaseProfile opposite;
  opposite.global_phase = kPi;
  for (const auto& pt : su11_spectrum(c, grid, opposite)) CHECK(std::abs(pt.intensity) < 1e-18);
  CHECK(su11_fringe_contrast(1.0) == 1.0);
  CHECK(su11_fringe_contrast(0.5) == Approx(2.0 / 3.0));

  // Chirped fringes: one intensity maximum per 2 pi of beta2 * w^2.
  const auto fine = build_grid(113e12, 0.05e12, 169.37e12);
  PhaseProfile chirp;
  chirp.gdd = 300e-30;
  const auto spec = su11_spectrum(c, fine, chirp);
  int maxima = 0;
  for (std::size_t i = 1; i + 1 < spec.size(); ++i) {
    if (spec[i].intensity > spec[i - 1].intensity && spec[i].intensity >= spec[i + 1].intensity) ++maxima;
  }
  const double w_lo = phase_variable(FrequencyConvention::angular, fine.half_offsets.front());
  const double w_hi = phase_variable(FrequencyConvention::angular, fine.half_offsets.back());
  const double expected = chirp.gdd * (w_hi * w_hi - w_lo * w_lo) / (2.0 * kPi);
  CHECK(std::abs(maxima - expected) <= 1.0);
}
