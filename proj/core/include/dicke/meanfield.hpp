#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>

#include "dicke/model.hpp"

namespace dicke {

enum class Phase { normal, superradiant, critical };

std::string_view to_string(Phase phase) noexcept;

/// Saddle point of the thermodynamic-limit action.
///
/// omega_delta is the effective atomic frequency sqrt(Omega^2 + 4 G^2 |b0|^2)
/// with G = g1 + g2; b0_sq is the per-atom photon density of the condensate.
struct GapSolution {
  Phase phase = Phase::normal;
  double omega_delta = 0.0;
  double b0_sq = 0.0;
};

/// A label is CRITICAL when |beta - beta_c| <= kCriticalWindow * beta_c.
inline constexpr double kCriticalWindow = 1e-9;

/// Inverse critical temperature, or nullopt when (g1+g2)^2 <= omega0*Omega.
/// Throws DomainError when g1 + g2 == 0.
std::optional<InverseTemperature> critical_beta(const ModelParams& p);

/// Solves omega0 x / G^2 = tanh(beta x / 2) for the effective frequency.
///
/// Below the transition (or without one) the solution is the normal phase
/// with omega_delta = Omega. Above it the root in (Omega, G^2/omega0] is
/// bracketed, bisected and Newton-polished to a 1e-12 residual. At beta=inf
/// the root is G^2/omega0 exactly.
GapSolution solve_gap(const ModelParams& p, InverseTemperature beta);

/// Residual omega0 x / G^2 - tanh(beta x / 2) of the gap equation.
double gap_residual(const ModelParams& p, InverseTemperature beta, double omega_delta);

/// Per-atom exponent of Z/Z0 relative to the free model.
///
/// For finite beta, value is phi (zero in the normal phase). At beta=inf phi
/// grows linearly in beta, so value holds the coefficient phi/beta and
/// rate_form is set.
struct PhiShift {
  double value = 0.0;
  bool rate_form = false;
};

PhiShift phi_shift(const ModelParams& p, InverseTemperature beta, const GapSolution& gap);

/// f = -(1/beta) [ln(2 cosh(beta Omega/2)) + phi]; the ground-state energy
/// per atom at beta=inf. Works for g1 = g2 = 0 (free atoms).
double free_energy_per_atom(const ModelParams& p, InverseTemperature beta);

/// R(w), S(w), S(-w) and H(w) of the Gaussian fluctuation integral.
///
/// r, s_plus and s_minus carry the factor alpha^2 = 1/(g2^2 - g1^2) and are
/// NaN when g1 == g2; h is finite for every coupling.
struct FluctuationKernel {
  std::complex<double> r;
  std::complex<double> s_plus;
  std::complex<double> s_minus;
  std::complex<double> h;
};

/// General kernel with tanh(beta Omega_Delta / 2) evaluated directly.
FluctuationKernel kernel(const ModelParams& p, InverseTemperature beta, const GapSolution& gap,
                         std::complex<double> omega);

/// Normal-phase specialization H_I(w) (Omega_Delta = Omega).
double kernel_normal(const ModelParams& p, InverseTemperature beta, double omega);

/// Superradiant specialization H_II(w), with tanh replaced through the gap
/// equation. Requires gap.phase != NORMAL.
double kernel_superradiant(const ModelParams& p, const GapSolution& gap, double omega);

/// Zero-mode amplitude A0 for the U(1) superradiant cases.
double goldstone_amplitude(const ModelParams& p, InverseTemperature beta, const GapSolution& gap);

struct PartitionAsymptotics {
  std::int64_t n_atoms = 0;
  double phi = 0.0;
  /// O(1) and ln N pieces of ln(Z/Z0).
  double log_correction = 0.0;
  bool goldstone_case = false;
  /// Tail estimate -sum_{n > cutoff} ln H(w_n) included in log_correction.
  double tail = 0.0;

  [[nodiscard]] double log_ratio() const noexcept {
    return static_cast<double>(n_atoms) * phi + log_correction;
  }
};

/// Asymptotic ln(Z/Z0) for N atoms with the Matsubara product truncated at
/// `cutoff` frequencies plus an analytic tail.
PartitionAsymptotics log_partition_ratio(const ModelParams& p, InverseTemperature beta,
                                         std::int64_t n_atoms, std::int64_t cutoff);

}  // namespace dicke
