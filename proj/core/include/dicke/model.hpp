#pragma once

#include <cmath>
#include <limits>
#include <string_view>

namespace dicke {

/// Hamiltonian constants of the full Dicke model (hbar = kB = 1).
///
/// omega0 is the boson mode frequency, Omega the atomic level splitting,
/// g1 the rotating and g2 the counter-rotating coupling.
struct ModelParams {
  double omega0 = 1.0;
  double Omega = 1.0;
  double g1 = 0.0;
  double g2 = 0.0;

  /// Sum of the couplings; the mean-field quantities depend on it alone.
  [[nodiscard]] double coupling_sum() const noexcept { return g1 + g2; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Inverse temperature with a first-class zero-temperature value.
class InverseTemperature {
 public:
  /// Throws DomainError unless beta > 0 (finite) or +infinity.
  explicit InverseTemperature(double beta);

  static InverseTemperature infinite() noexcept {
    return InverseTemperature(std::numeric_limits<double>::infinity(), Unchecked{});
  }

  [[nodiscard]] bool is_infinite() const noexcept { return std::isinf(beta_); }
  [[nodiscard]] double value() const noexcept { return beta_; }

  /// tanh(beta * energy / 2), exactly 1 at zero temperature for energy > 0.
  [[nodiscard]] double tanh_half(double energy) const noexcept;

  friend bool operator==(const InverseTemperature&, const InverseTemperature&) = default;

 private:
  struct Unchecked {};
  InverseTemperature(double beta, Unchecked) noexcept : beta_(beta) {}

  double beta_;
};

/// Parses "inf"/"infinity" or a positive decimal number.
InverseTemperature parse_inverse_temperature(std::string_view text);

enum class SymmetryTag { u1_sum, u1_diff, z2_only, free };

struct SymmetryClass {
  SymmetryTag tag;
  /// Conserved quantity: "n+m", "n-m", "parity" or "all".
  std::string_view conserved;

  friend bool operator==(const SymmetryClass&, const SymmetryClass&) = default;
};

std::string_view to_string(SymmetryTag tag) noexcept;

/// Returns p unchanged, or throws DomainError for non-finite values,
/// omega0 <= 0, Omega <= 0, or a negative coupling.
ModelParams validate_params(const ModelParams& p);

/// Symmetry class from the zero/nonzero pattern of (g1, g2). A coupling is
/// zero only when it compares equal to 0.0.
SymmetryClass classify_symmetry(const ModelParams& p) noexcept;

}  // namespace dicke
