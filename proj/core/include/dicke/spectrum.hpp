#pragma once

#include <string_view>
#include <vector>

#include "dicke/meanfield.hpp"
#include "dicke/model.hpp"

namespace dicke {

enum class SpectrumCase { normal, critical, sr_z2, sr_u1_sum, sr_u1_diff };

std::string_view to_string(SpectrumCase c) noexcept;

/// Collective excitation energies, ascending and non-negative.
/// goldstone marks a symmetry-protected zero mode (energies[0] == 0).
struct SpectrumResult {
  std::vector<double> energies;
  bool goldstone = false;
  SpectrumCase case_tag = SpectrumCase::normal;
};

/// Both normal-phase branches. At the critical point the lower branch is
/// reported as exactly 0 with case CRITICAL. Throws PhaseError in the
/// superradiant regime.
SpectrumResult spectrum_normal(const ModelParams& p, InverseTemperature beta);

/// Upper branch at beta = beta_c. Throws DomainError if there is no transition.
double spectrum_critical_e2(const ModelParams& p);

/// Superradiant branches for the Z2 and both U(1) cases. Throws PhaseError
/// unless beta > beta_c.
SpectrumResult spectrum_superradiant(const ModelParams& p, InverseTemperature beta);

/// Closed-form spectrum for whichever phase (p, beta) is in.
SpectrumResult spectrum(const ModelParams& p, InverseTemperature beta);

/// Coefficients of x^2 + linear x + constant, the numerator of H(w) with
/// x = w^2, collected term by term from the general kernel.
struct KernelPolynomial {
  double linear = 0.0;
  double constant = 0.0;
  /// Rounding scale of `constant`; values below it are treated as zero.
  double constant_noise = 0.0;
};

KernelPolynomial kernel_polynomial(const ModelParams& p, InverseTemperature beta,
                                   const GapSolution& gap);

/// Real non-negative roots of H(-iE) = 0, from the kernel polynomial.
SpectrumResult spectrum_via_kernel_roots(const ModelParams& p, InverseTemperature beta);

}  // namespace dicke
