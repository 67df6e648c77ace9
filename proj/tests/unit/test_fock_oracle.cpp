#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "csfg/errors.hpp"
#include "csfg/fock_oracle.hpp"
#include "test_support.hpp"

using namespace csfg;
using Catch::Approx;

namespace {

OracleState coherent_pump(const OracleSpace& space, double amp, double seed = 0.0) {
  OracleInitial init;
  init.pump = amp;
  if (seed != 0.0) init.signal.assign(space.pair_count(), cplx{});
  if (seed != 0.0) init.signal[0] = seed;
  return prepare_state(space, init);
}

}  // namespace

TEST_CASE("basis dimensions") {
  CHECK(OracleSpace::build(1, 1, 1).dimension() == 8);
  CHECK(OracleSpace::build(1, 30, 6).dimension() == 1519);
  CHECK(OracleSpace::build(2, 10, 3).dimension() == 11 * 256);
}

TEST_CASE("smallest space couples one pump photon to one pair") {
  const auto space = OracleSpace::build(1, 1, 1);
  const auto& h = space.hamiltonian();
  CHECK(h.nonZeros() == 2);
  const auto a = space.index_of({1, 0, 0});
  const auto b = space.index_of({0, 1, 1});
  CHECK(h.coeff(a, b) == 1.0);
  CHECK(h.coeff(b, a) == 1.0);
}

TEST_CASE("Hamiltonian is exactly symmetric") {
  for (std::size_t pairs : {1u, 2u}) {
    const auto space = OracleSpace::build(pairs, 12, 4);
    const Eigen::SparseMatrix<double> h = space.hamiltonian();
    const Eigen::SparseMatrix<double> ht = h.transpose();
    CHECK((h - ht).norm() == 0.0);
  }
}

TEST_CASE("basis indexing round-trips") {
  const auto space = OracleSpace::build(2, 5, 2);
  for (std::size_t i = 0; i < space.dimension(); ++i) CHECK(space.index_of(space.occupations(i)) == i);
}

TEST_CASE("space construction guards") {
  CHECK_THROWS_AS(OracleSpace::build(2, 100, 10), ResourceError);
  CHECK_THROWS_AS(OracleSpace::build(3, 5, 2), std::invalid_argument);
  CHECK_THROWS_AS(OracleSpace::build(0, 5, 2), std::invalid_argument);
  CHECK_NOTHROW(OracleSpace::build(1, 30, 6, 1519));
  CHECK_THROWS_AS(OracleSpace::build(1, 30, 6, 1518), ResourceError);
}

TEST_CASE("zero interaction time leaves the state unchanged") {
  const auto space = OracleSpace::build(1, 30, 6);
  const auto psi = coherent_pump(space, 2.0, 0.5);
  const auto out = evolve(space, psi, 0.0);
  CHECK(out.amplitudes == psi.amplitudes);
}

TEST_CASE("coherent pump expectations before interaction") {
  const auto space = OracleSpace::build(1, 40, 4);
  const auto e = expectations(space, coherent_pump(space, 2.0));
  CHECK(e.pump.real() == Approx(2.0).epsilon(1e-12));
  CHECK(e.pump_photons == Approx(4.0).epsilon(1e-12));
  CHECK(e.signal_photons[0] == 0.0);
  CHECK(e.pair_moments[0] == cplx{});
  CHECK(e.hamiltonian == 0.0);

  OracleInitial vac;
  const auto v = expectations(space, prepare_state(space, vac));
  CHECK(v.pump == cplx{});
  CHECK(v.pump_photons == 0.0);
  CHECK(v.norm == Approx(1.0));
}

TEST_CASE("vacuum evolution matches the independent reference") {
  const auto space = OracleSpace::build(1, 60, 10);
  const auto psi = coherent_pump(space, 2.0);
  const auto out = evolve(space, psi, 0.01);
  const auto before = expectations(space, psi);
  const auto after = expectations(space, out);
  CHECK(std::abs(after.pump - before.pump - cplx{-0.00010001250004743056, 0.0}) < 1e-12);
  CHECK(after.signal_photons[0] == Approx(0.0004000399959104419).epsilon(1e-9));
  CHECK(std::abs(after.pair_moments[0] - cplx{0.0, -0.020005000028262845}) < 1e-12);
  CHECK(std::arg(after.pair_moments[0]) == Approx(-kPi / 2.0).margin(1e-12));
  CHECK(after.signal_photons[0] == Approx(std::pow(std::sinh(0.02), 2)).epsilon(1e-3));
}

TEST_CASE("stronger pump reference") {
  const auto space = OracleSpace::build(1, 80, 10);
  const auto psi = coherent_pump(space, 4.0);
  const auto out = evolve(space, psi, 0.025);
  const auto shift = expectations(space, out).pump - expectations(space, psi).pump;
  CHECK(std::abs(shift - cplx{-0.001254105815454487, 0.0}) < 1e-12);
  CHECK(expectations(space, out).signal_photons[0] == Approx(0.010031266773252062).epsilon(1e-9));
}

TEST_CASE("seeded evolution reference") {
  const auto space = OracleSpace::build(1, 60, 12);
  const auto psi = coherent_pump(space, 2.0, 1.0);
  const auto out = evolve(space, psi, 0.025);
  const auto shift = expectations(space, out).pump - expectations(space, psi).pump;
  CHECK(std::abs(shift - cplx{-0.0012508785720999338, 0.0}) < 1e-12);
  CHECK(expectations(space, out).signal_photons[0] == Approx(1.0050015568830035).epsilon(1e-9));
}

TEST_CASE("evolution is unitary and conserves the pump-pair charge") {
  testing::Draws draws(41);
  for (int i = 0; i < 8; ++i) {
    const double amp = draws.uniform(2.0, 6.0);
    const double chi_t = draws.uniform(0.002, 0.1 / amp);
    const std::size_t pairs = draws.index(1, 2);
    const auto space = OracleSpace::build(pairs, suggested_pump_truncation(amp), pairs == 1 ? 8 : 4);
    OracleInitial init;
    init.pump = std::polar(amp, draws.uniform(-kPi, kPi));
    init.signal.assign(pairs, cplx{});
    init.signal[0] = draws.uniform(0.0, 0.7);
    const auto psi = prepare_state(space, init);
    const auto out = evolve(space, psi, chi_t);
    const auto a = expectations(space, psi);
    const auto b = expectations(space, out);
    CHECK(std::abs(b.norm - 1.0) < 1e-10);
    CHECK(std::abs(b.conserved_charge() - a.conserved_charge()) < 1e-9);
    CHECK(std::abs(b.hamiltonian - a.hamiltonian) < 1e-9 * std::max(1.0, std::abs(a.hamiltonian)));
  }
}

TEST_CASE("signal and idler are interchangeable for symmetric inputs") {
  const auto space = OracleSpace::build(2, suggested_pump_truncation(3.0), 4);
  OracleInitial init;
  init.pump = 3.0;
  init.signal = {cplx{0.3, 0.1}, cplx{}};
  init.idler = {cplx{0.3, 0.1}, cplx{}};
  const auto e = expectations(space, evolve(space, prepare_state(space, init), 0.02));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(std::abs(e.signal_photons[k] - e.idler_photons[k]) < 1e-13);
  }
}

TEST_CASE("doubling the truncation does not move validated results") {
  const auto coarse = OracleSpace::build(1, suggested_pump_truncation(2.0), 6);
  const auto fine = OracleSpace::build(1, 2 * suggested_pump_truncation(2.0), 12);
  const auto a = expectations(coarse, evolve(coarse, coherent_pump(coarse, 2.0), 0.01));
  const auto b = expectations(fine, evolve(fine, coherent_pump(fine, 2.0), 0.01));
  CHECK(testing::rel_diff(a.pump, b.pump) < 1e-8);
  CHECK(testing::rel_diff(a.signal_photons[0], b.signal_photons[0]) < 1e-8);
  CHECK(testing::rel_diff(a.pair_moments[0], b.pair_moments[0]) < 1e-8);
  CHECK_FALSE(evolve(coarse, coherent_pump(coarse, 2.0), 0.01).truncation_warning);
}

TEST_CASE("tight truncation raises the warning") {
  const auto space = OracleSpace::build(1, 8, 2);
  CHECK(evolve(space, coherent_pump(space, 2.0), 0.05).truncation_warning);
}

TEST_CASE("validation examples pass") {
  {
    const auto space = OracleSpace::build(1, suggested_pump_truncation(2.0), 6);
    const auto r = validate_perturbation(space, OracleScenario::vacuum, 0.01, 2.0);
    CHECK(r.pass);
    CHECK(r.gain == Approx(0.02));
    CHECK(r.full_abs_error <= 10.0 * std::pow(r.gain, 4) * 2.0);
  }
  {
    const auto space = OracleSpace::build(2, suggested_pump_truncation(4.0), 6);
    const auto r = validate_perturbation(space, OracleScenario::vacuum, 0.025, 4.0);
    CHECK(r.mode_pairs == 2);
    CHECK(r.pass);
    CHECK(r.full_abs_error <= 10.0 * std::pow(r.gain, 4) * 4.0);
    CHECK_FALSE(r.truncation_warning);
  }
  {
    const auto space = OracleSpace::build(1, suggested_pump_truncation(2.0), 10);
    const auto r = validate_perturbation(space, OracleScenario::seeded, 0.025, 2.0, 1.0);
    CHECK(r.seed_photons == Approx(1.0));
    CHECK(r.pass);
    // Stimulated depletion -a_p (|a_sd|^2 + M)(chi t)^2 / 2 dominates the shift.
    CHECK(r.oracle_shift.real() == Approx(-2.0 * 2.0 * 0.025 * 0.025 / 2.0).epsilon(0.01));
  }
}

TEST_CASE("scenario names round-trip") {
  CHECK(parse_oracle_scenario("seeded") == OracleScenario::seeded);
  CHECK(to_string(OracleScenario::vacuum) == "vacuum");
  CHECK_THROWS_AS(parse_oracle_scenario("squeezed"), std::invalid_argument);
}
