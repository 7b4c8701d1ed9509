#include "dicke/model.hpp"

#include <charconv>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

InverseTemperature::InverseTemperature(double beta) : beta_(beta) {
  if (std::isnan(beta) || beta <= 0.0 || (std::isinf(beta) && beta < 0.0)) {
    throw DomainError("inverse temperature must be positive or infinite, got " +
                      std::to_string(beta));
  }
}

double InverseTemperature::tanh_half(double energy) const noexcept {
  if (is_infinite()) {
    if (energy > 0.0) return 1.0;
    if (energy < 0.0) return -1.0;
    return 0.0;
  }
  return std::tanh(0.5 * beta_ * energy);
}

InverseTemperature parse_inverse_temperature(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "+inf") {
    return InverseTemperature::infinite();
  }
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DomainError("cannot parse inverse temperature '" + std::string(text) + "'");
  }
  return InverseTemperature(value);
}

std::string_view to_string(SymmetryTag tag) noexcept {
  switch (tag) {
    case SymmetryTag::u1_sum: return "U1_SUM";
    case SymmetryTag::u1_diff: return "U1_DIFF";
    case SymmetryTag::z2_only: return "Z2_ONLY";
    case SymmetryTag::free: return "FREE";
  }
  return "?";
}

ModelParams validate_params(const ModelParams& p) {
  if (!std::isfinite(p.omega0) || !std::isfinite(p.Omega) || !std::isfinite(p.g1) ||
      !std::isfinite(p.g2)) {
    throw DomainError("model parameters must be finite");
  }
  if (p.omega0 <= 0.0) throw DomainError("omega0 must be positive");
  if (p.Omega <= 0.0) throw DomainError("Omega must be positive");
  if (p.g1 < 0.0) throw DomainError("g1 must be non-negative");
  if (p.g2 < 0.0) throw DomainError("g2 must be non-negative");
  return p;
}

SymmetryClass classify_symmetry(const ModelParams& p) noexcept {
  const bool rotating = p.g1 != 0.0;
  const bool counter = p.g2 != 0.0;
  if (rotating && !counter) return {SymmetryTag::u1_sum, "n+m"};
  if (!rotating && counter) return {SymmetryTag::u1_diff, "n-m"};
  if (rotating && counter) return {SymmetryTag::z2_only, "parity"};
  return {SymmetryTag::free, "all"};
}

}  // namespace dicke
