#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dicke/model.hpp"

namespace dicke {

/// Finite-N collective-basis problem: boson Fock states n <= n_max times
/// spin states |j m>, j = N/2 unless a smaller sector is requested.
struct EDConfig {
  int n_atoms = 1;
  int n_max = 16;
  ModelParams params;
  InverseTemperature beta = InverseTemperature::infinite();
};

struct EDResult {
  double free_energy_per_atom = 0.0;
  double photon_density = 0.0;  // <b^dagger b> / N
  double inversion = 0.0;       // <J_z> / N
  /// Lowest excitation energies E_i - E_0 of the symmetric (j = N/2) sector.
  std::vector<double> gaps;
  double parity_residual = 0.0;
  double nsum_residual = 0.0;
  double ndiff_residual = 0.0;
};

struct SymmetryResiduals {
  double parity = 0.0;
  double nsum = 0.0;
  double ndiff = 0.0;
};

/// Largest basis dimension allowed; DICKE_MAX_ED_DIM overrides 20000.
std::size_t max_ed_dimension();

/// Basis size (n_max + 1)(2j + 1) of the sector with total spin two_j / 2.
std::size_t sector_dimension(int n_max, int two_j) noexcept;

/// Fock cutoff large enough for the superradiant photon number at N atoms.
int default_fock_cutoff(int n_atoms, const ModelParams& p, InverseTemperature beta);

/// Dense Hamiltonian of the sector with total spin two_j / 2 (defaults to
/// j = N/2). Basis index is n * (2j + 1) + (m + j). Throws CapacityError when
/// the dimension exceeds max_ed_dimension().
Eigen::MatrixXd build_hamiltonian(const EDConfig& cfg, int two_j = -1);

/// Canonical-ensemble observables.
///
/// Finite beta sums every spin sector weighted by its multiplicity; beta=inf
/// uses the ground state of the symmetric sector. The free energy is checked
/// against a rerun with n_max + 8 and TruncationError is thrown when it moves
/// by 1e-8 or more.
EDResult thermal_observables(const EDConfig& cfg, int k_gaps, bool check_truncation = true);

/// Frobenius norms of [H, Pi], [H, N] and [H, N_-] in the symmetric sector.
SymmetryResiduals symmetry_residuals(const EDConfig& cfg);

}  // namespace dicke
