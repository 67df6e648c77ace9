#include "csfg/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "csfg/errors.hpp"

namespace csfg {

namespace {

constexpr cplx kI{0.0, 1.0};

// out = H * in for a real row-major sparse matrix.
void apply(const OracleSpace::SparseMatrix& h, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const auto* outer = h.outerIndexPtr();
  const auto* inner = h.innerIndexPtr();
  const auto* values = h.valuePtr();
  for (Eigen::Index row = 0; row < h.outerSize(); ++row) {
    cplx acc{};
    for (auto k = outer[row]; k < outer[row + 1]; ++k) acc += values[k] * in[inner[k]];
    out[row] = acc;
  }
}

double norm1(const OracleSpace::SparseMatrix& h) {
  // Symmetric, so the max row sum equals the max column sum.
  double best = 0.0;
  for (Eigen::Index row = 0; row < h.outerSize(); ++row) {
    double sum = 0.0;
    for (OracleSpace::SparseMatrix::InnerIterator it(h, row); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

std::vector<cplx> coherent_amplitudes(cplx alpha, std::size_t levels) {
  std::vector<cplx> c(levels);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t n = 1; n < levels; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

}  // namespace

OracleSpace OracleSpace::build(std::size_t pair_count, std::size_t pump_truncation,
                               std::size_t pair_truncation, std::size_t dimension_cap) {
  if (pair_count < 1 || pair_count > 2) throw std::invalid_argument("pair_count must be 1 or 2");
  if (pump_truncation < 1) throw std::invalid_argument("pump_truncation must be >= 1");
  if (pair_truncation < 1) throw std::invalid_argument("pair_truncation must be >= 1");

  const double dim = static_cast<double>(pump_truncation + 1) *
                     std::pow(static_cast<double>(pair_truncation + 1), 2.0 * pair_count);
  if (dim > static_cast<double>(dimension_cap)) {
    throw ResourceError("oracle dimension " + std::to_string(static_cast<long long>(dim)) +
                        " exceeds cap " + std::to_string(dimension_cap));
  }

  OracleSpace space;
  space.pair_count_ = pair_count;
  space.pump_max_ = pump_truncation;
  space.pair_max_ = pair_truncation;
  space.dimension_ = static_cast<std::size_t>(dim);

  const std::size_t modes = 1 + 2 * pair_count;
  space.strides_.assign(modes, 1);
  for (std::size_t m = modes - 1; m-- > 0;) {
    space.strides_[m] = space.strides_[m + 1] * space.mode_levels(m + 1);
  }

  // a_p a_s^+ a_i^+ maps |n_p, n_s, n_i> to |n_p-1, n_s+1, n_i+1>.
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * pair_count * space.dimension_);
  for (std::size_t idx = 0; idx < space.dimension_; ++idx) {
    const auto occ = space.occupations(idx);
    if (occ[0] == 0) continue;
    for (std::size_t k = 0; k < pair_count; ++k) {
      const std::size_t ns = occ[1 + 2 * k];
      const std::size_t ni = occ[2 + 2 * k];
      if (ns == pair_truncation || ni == pair_truncation) continue;
      const std::size_t target =
          idx - space.strides_[0] + space.strides_[1 + 2 * k] + space.strides_[2 + 2 * k];
      const double value = std::sqrt(static_cast<double>(occ[0]) * static_cast<double>(ns + 1) *
                                     static_cast<double>(ni + 1));
      triplets.emplace_back(static_cast<int>(target), static_cast<int>(idx), value);
      triplets.emplace_back(static_cast<int>(idx), static_cast<int>(target), value);
    }
  }
  space.hamiltonian_.resize(static_cast<Eigen::Index>(space.dimension_),
                            static_cast<Eigen::Index>(space.dimension_));
  space.hamiltonian_.setFromTriplets(triplets.begin(), triplets.end());
  space.hamiltonian_.makeCompressed();
  return space;
}

std::vector<std::size_t> OracleSpace::occupations(std::size_t index) const {
  std::vector<std::size_t> occ(strides_.size());
  for (std::size_t m = 0; m < strides_.size(); ++m) {
    occ[m] = index / strides_[m];
    index %= strides_[m];
  }
  return occ;
}

std::size_t OracleSpace::index_of(const std::vector<std::size_t>& occupations) const {
  if (occupations.size() != strides_.size()) throw std::invalid_argument("wrong occupation count");
  std::size_t index = 0;
  for (std::size_t m = 0; m < strides_.size(); ++m) {
    if (occupations[m] >= mode_levels(m)) throw std::invalid_argument("occupation above truncation");
    index += occupations[m] * strides_[m];
  }
  return index;
}

double top_level_population(const OracleSpace& space, const Eigen::VectorXcd& amplitudes) {
  std::vector<double> top(space.mode_count(), 0.0);
  for (std::size_t idx = 0; idx < space.dimension(); ++idx) {
    const double p = std::norm(amplitudes[static_cast<Eigen::Index>(idx)]);
    if (p == 0.0) continue;
    const auto occ = space.occupations(idx);
    for (std::size_t m = 0; m < occ.size(); ++m) {
      if (occ[m] + 2 >= space.mode_levels(m)) top[m] += p;
    }
  }
  return *std::max_element(top.begin(), top.end());
}

OracleState prepare_state(const OracleSpace& space, const OracleInitial& initial) {
  if (initial.signal.size() > space.pair_count() || initial.idler.size() > space.pair_count()) {
    throw std::invalid_argument("more seeded modes than oracle pairs");
  }
  std::vector<std::vector<cplx>> factors(space.mode_count());
  factors[0] = coherent_amplitudes(initial.pump, space.mode_levels(0));
  for (std::size_t k = 0; k < space.pair_count(); ++k) {
    const cplx s = k < initial.signal.size() ? initial.signal[k] : cplx{};
    const cplx i = k < initial.idler.size() ? initial.idler[k] : cplx{};
    factors[1 + 2 * k] = coherent_amplitudes(s, space.mode_levels(1 + 2 * k));
    factors[2 + 2 * k] = coherent_amplitudes(i, space.mode_levels(2 + 2 * k));
  }

  OracleState state;
  state.initial = initial;
  state.amplitudes.resize(static_cast<Eigen::Index>(space.dimension()));
  for (std::size_t idx = 0; idx < space.dimension(); ++idx) {
    const auto occ = space.occupations(idx);
    cplx a{1.0, 0.0};
    for (std::size_t m = 0; m < occ.size(); ++m) a *= factors[m][occ[m]];
    state.amplitudes[static_cast<Eigen::Index>(idx)] = a;
  }
  state.amplitudes.normalize();
  state.top_population = top_level_population(space, state.amplitudes);
  state.truncation_warning = state.top_population >= kTruncationTolerance;
  return state;
}

OracleState evolve(const OracleSpace& space, const OracleState& initial, double chi_t) {
  OracleState state = initial;
  state.elapsed += chi_t;
  if (chi_t == 0.0) return state;

  const auto& h = space.hamiltonian();
  const double scale = norm1(h) * std::abs(chi_t);
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(scale / 0.5)));
  const double dt = chi_t / static_cast<double>(steps);

  Eigen::VectorXcd term(state.amplitudes.size());
  Eigen::VectorXcd next(state.amplitudes.size());
  for (long step = 0; step < steps; ++step) {
    Eigen::VectorXcd acc = state.amplitudes;
    term = state.amplitudes;
    const double ref = state.amplitudes.norm();
    for (int k = 1; k <= 80; ++k) {
      apply(h, term, next);
      term = next * (-kI * dt / static_cast<double>(k));
      acc += term;
      if (term.norm() <= 1e-17 * ref) break;
    }
    state.amplitudes = std::move(acc);
  }
  state.top_population = top_level_population(space, state.amplitudes);
  state.truncation_warning = initial.truncation_warning || state.top_population >= kTruncationTolerance;
  return state;
}

cplx OracleExpectations::pair_sum() const {
  return std::accumulate(pair_moments.begin(), pair_moments.end(), cplx{});
}

double OracleExpectations::photon_sum() const {
  return std::accumulate(signal_photons.begin(), signal_photons.end(), 0.0) +
         std::accumulate(idler_photons.begin(), idler_photons.end(), 0.0);
}

OracleExpectations expectations(const OracleSpace& space, const OracleState& state) {
  const auto& psi = state.amplitudes;
  const std::size_t pairs = space.pair_count();
  OracleExpectations e;
  e.signal_photons.assign(pairs, 0.0);
  e.idler_photons.assign(pairs, 0.0);
  e.pair_moments.assign(pairs, cplx{});

  for (std::size_t idx = 0; idx < space.dimension(); ++idx) {
    const cplx amp = psi[static_cast<Eigen::Index>(idx)];
    const double p = std::norm(amp);
    const auto occ = space.occupations(idx);
    e.norm += p;
    e.pump_photons += p * static_cast<double>(occ[0]);
    if (occ[0] > 0) {
      const auto lower = static_cast<Eigen::Index>(idx - space.stride(0));
      e.pump += std::conj(psi[lower]) * std::sqrt(static_cast<double>(occ[0])) * amp;
    }
    for (std::size_t k = 0; k < pairs; ++k) {
      const std::size_t ns = occ[1 + 2 * k];
      const std::size_t ni = occ[2 + 2 * k];
      e.signal_photons[k] += p * static_cast<double>(ns);
      e.idler_photons[k] += p * static_cast<double>(ni);
      if (ns > 0 && ni > 0) {
        const auto lower =
            static_cast<Eigen::Index>(idx - space.stride(1 + 2 * k) - space.stride(2 + 2 * k));
        e.pair_moments[k] +=
            std::conj(psi[lower]) * std::sqrt(static_cast<double>(ns * ni)) * amp;
      }
    }
  }

  Eigen::VectorXcd h_psi(psi.size());
  apply(space.hamiltonian(), psi, h_psi);
  e.hamiltonian = std::real(psi.dot(h_psi));
  return e;
}

OracleScenario parse_oracle_scenario(std::string_view name) {
  if (name == "vacuum") return OracleScenario::vacuum;
  if (name == "seeded") return OracleScenario::seeded;
  throw std::invalid_argument("unknown oracle scenario '" + std::string(name) + "'");
}

std::string_view to_string(OracleScenario scenario) {
  return scenario == OracleScenario::vacuum ? "vacuum" : "seeded";
}

ValidationReport validate_perturbation(const OracleSpace& space, OracleScenario scenario,
                                       double chi_t, double pump_amplitude,
                                       double seed_amplitude) {
  if (!(pump_amplitude > 0.0)) throw std::invalid_argument("pump_amplitude must be positive");

  OracleInitial init;
  init.pump = pump_amplitude;
  if (scenario == OracleScenario::seeded) init.signal = {cplx{seed_amplitude, 0.0}};

  const OracleState start = prepare_state(space, init);
  const OracleState end = evolve(space, start, chi_t);
  const OracleExpectations before = expectations(space, start);
  const OracleExpectations after = expectations(space, end);

  ParametricConfig config;
  config.pump_amplitude = pump_amplitude;
  config.coupling = chi_t;

  ValidationReport r;
  r.scenario = scenario;
  r.pump_amplitude = pump_amplitude;
  r.chi_t = chi_t;
  r.gain = config.gain();
  r.seed_photons = scenario == OracleScenario::seeded ? seed_amplitude * seed_amplitude : 0.0;
  r.mode_pairs = space.pair_count();
  r.dimension = space.dimension();
  r.input = before.bundle();
  r.oracle_shift = after.pump - before.pump;
  r.full_prediction = pump_correction_full(config, r.input, r.mode_pairs);
  r.lowgain_prediction = pump_correction_lowgain(config, r.input, r.mode_pairs);
  r.full_abs_error = std::abs(r.oracle_shift - r.full_prediction);
  r.lowgain_abs_error = std::abs(r.oracle_shift - r.lowgain_prediction);
  r.full_rel_error = r.full_abs_error / std::abs(r.full_prediction);
  r.lowgain_rel_error = r.lowgain_abs_error / std::abs(r.lowgain_prediction);
  const double g = r.gain;
  r.tolerance = std::max(10.0 * std::pow(g, 4), 5.0 * g * g / (pump_amplitude * pump_amplitude)) *
                pump_amplitude;
  r.norm_error = std::abs(after.norm - 1.0);
  r.charge_drift = std::abs(after.conserved_charge() - before.conserved_charge());
  r.truncation_warning = end.truncation_warning;
  r.pass = r.full_abs_error <= r.tolerance;
  return r;
}

std::size_t suggested_pump_truncation(double pump_amplitude) {
  const double a = std::abs(pump_amplitude);
  return static_cast<std::size_t>(std::ceil(a * a + 10.0 * a + 12.0));
}

}  // namespace csfg
