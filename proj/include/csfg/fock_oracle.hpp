#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "csfg/pump_perturbation.hpp"

namespace csfg {

inline constexpr std::size_t kDefaultOracleDimensionCap = 200000;

/// Populations above this in the top two levels of any mode flag a
/// truncation warning.
inline constexpr double kTruncationTolerance = 1e-8;

/// Truncated Fock space of one pump mode and 1-2 signal/idler pairs.
///
/// Basis states are stored in mixed radix with the pump as the most
/// significant digit, followed by (signal, idler) for each pair. The
/// Hamiltonian is H' = H / chi = sum_nu (a_p a_nu^+ a_-nu^+ + h.c.), real
/// symmetric in this basis.
class OracleSpace {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  /// Throws std::invalid_argument for bad counts and ResourceError when the
  /// dimension exceeds `dimension_cap`.
  static OracleSpace build(std::size_t pair_count, std::size_t pump_truncation,
                           std::size_t pair_truncation,
                           std::size_t dimension_cap = kDefaultOracleDimensionCap);

  std::size_t pair_count() const { return pair_count_; }
  std::size_t pump_truncation() const { return pump_max_; }
  std::size_t pair_truncation() const { return pair_max_; }
  std::size_t dimension() const { return dimension_; }
  const SparseMatrix& hamiltonian() const { return hamiltonian_; }

  /// Occupation numbers of basis state `index`: [pump, s0, i0, s1, i1, ...].
  std::vector<std::size_t> occupations(std::size_t index) const;
  std::size_t index_of(const std::vector<std::size_t>& occupations) const;
  /// Stride of mode `mode` (0 = pump, 1 + 2k = signal k, 2 + 2k = idler k).
  std::size_t stride(std::size_t mode) const { return strides_[mode]; }
  std::size_t mode_count() const { return strides_.size(); }
  std::size_t mode_levels(std::size_t mode) const { return mode == 0 ? pump_max_ + 1 : pair_max_ + 1; }

 private:
  std::size_t pair_count_ = 0;
  std::size_t pump_max_ = 0;
  std::size_t pair_max_ = 0;
  std::size_t dimension_ = 0;
  std::vector<std::size_t> strides_;
  SparseMatrix hamiltonian_;
};

/// Product coherent input: pump plus optional coherent amplitudes on each
/// signal and idler mode.
struct OracleInitial {
  cplx pump{};
  std::vector<cplx> signal;  // one per pair, empty means vacuum
  std::vector<cplx> idler;
};

struct OracleState {
  Eigen::VectorXcd amplitudes;
  OracleInitial initial;
  double elapsed = 0.0;              // accumulated chi * t
  double top_population = 0.0;       // worst top-two-level population
  bool truncation_warning = false;
};

OracleState prepare_state(const OracleSpace& space, const OracleInitial& initial);

/// exp(-i H' chi_t) |psi>, by Taylor series on sub-steps with ||H' dt||_1 <= 1/2.
OracleState evolve(const OracleSpace& space, const OracleState& initial, double chi_t);

struct OracleExpectations {
  cplx pump{};                      // <a_p>
  double pump_photons = 0.0;        // <N_p>
  std::vector<double> signal_photons;
  std::vector<double> idler_photons;
  std::vector<cplx> pair_moments;   // <a_nu a_-nu>
  double hamiltonian = 0.0;         // <H'>
  double norm = 0.0;                // <psi|psi>

  cplx pair_sum() const;
  double photon_sum() const;
  /// <N_p + (N_s + N_i) / 2>, conserved by H'.
  double conserved_charge() const { return pump_photons + 0.5 * photon_sum(); }
  ExpectationBundle bundle() const { return {pair_sum(), photon_sum(), hamiltonian}; }
};

OracleExpectations expectations(const OracleSpace& space, const OracleState& state);

/// Population held in the top two levels of the worst mode.
double top_level_population(const OracleSpace& space, const Eigen::VectorXcd& amplitudes);

enum class OracleScenario { vacuum, seeded };
OracleScenario parse_oracle_scenario(std::string_view name);
std::string_view to_string(OracleScenario scenario);

struct ValidationReport {
  OracleScenario scenario = OracleScenario::vacuum;
  double pump_amplitude = 0.0;
  double chi_t = 0.0;
  double gain = 0.0;
  double seed_photons = 0.0;
  std::size_t mode_pairs = 0;
  std::size_t dimension = 0;
  ExpectationBundle input;
  cplx oracle_shift{};   // <a_p>(t) - <a_p>(0)
  cplx full_prediction{};
  cplx lowgain_prediction{};
  double full_abs_error = 0.0;
  double lowgain_abs_error = 0.0;
  double full_rel_error = 0.0;
  double lowgain_rel_error = 0.0;
  double tolerance = 0.0;  // max(10 g^4, 5 g^2 / |a_p|^2) |a_p|
  double norm_error = 0.0;
  double charge_drift = 0.0;
  bool truncation_warning = false;
  bool pass = false;
};

/// Evolve a coherent pump with vacuum pairs (or a coherent seed of
/// `seed_amplitude` on the first signal mode) and compare the exact pump
/// shift with pump_correction_full / pump_correction_lowgain.
ValidationReport validate_perturbation(const OracleSpace& space, OracleScenario scenario,
                                       double chi_t, double pump_amplitude,
                                       double seed_amplitude = 1.0);

/// Pump truncation that keeps a coherent state of this amplitude well
/// inside the space.
std::size_t suggested_pump_truncation(double pump_amplitude);

}  // namespace csfg
