#include "dicke/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dicke/errors.hpp"

namespace dicke {
namespace {

// Squared energies come from sums that cancel exactly where a branch closes
// (critical points, Goldstone modes, double roots), so they are formed in
// 113-bit binary floating point and rounded to double only at the end.
using Wide = boost::multiprecision::cpp_bin_float_quad;

const Wide kNoiseFactor = 16 * std::numeric_limits<Wide>::epsilon();

Wide checked_sqrt(const Wide& e2, const char* branch) {
  if (!(e2 >= 0)) {
    throw NonrealError(std::string("negative squared energy on the ") + branch + " branch");
  }
  return sqrt(e2);
}

double to_energy(const Wide& e2, const char* branch) {
  return static_cast<double>(checked_sqrt(e2, branch));
}

// A value that should cancel to zero may land a few ulps below it; anything
// within rounding of `scale` is taken as zero.
Wide snap_rounding(const Wide& value, const Wide& scale) {
  return value < 0 && -value <= kNoiseFactor * scale ? Wide(0) : value;
}

GapSolution gap_or_free(const ModelParams& p, InverseTemperature beta) {
  if (p.coupling_sum() == 0.0) return {Phase::normal, p.Omega, 0.0};
  return solve_gap(p, beta);
}

SpectrumCase superradiant_case(const ModelParams& p) {
  switch (classify_symmetry(p).tag) {
    case SymmetryTag::u1_sum: return SpectrumCase::sr_u1_sum;
    case SymmetryTag::u1_diff: return SpectrumCase::sr_u1_diff;
    default: return SpectrumCase::sr_z2;
  }
}

SpectrumCase case_for(const ModelParams& p, const GapSolution& gap) {
  switch (gap.phase) {
    case Phase::normal: return SpectrumCase::normal;
    case Phase::critical: return SpectrumCase::critical;
    case Phase::superradiant: return superradiant_case(p);
  }
  return SpectrumCase::normal;
}

}  // namespace

std::string_view to_string(SpectrumCase c) noexcept {
  switch (c) {
    case SpectrumCase::normal: return "NORMAL";
    case SpectrumCase::critical: return "CRITICAL";
    case SpectrumCase::sr_z2: return "SR_Z2";
    case SpectrumCase::sr_u1_sum: return "SR_U1_SUM";
    case SpectrumCase::sr_u1_diff: return "SR_U1_DIFF";
  }
  return "?";
}

SpectrumResult spectrum_normal(const ModelParams& params, InverseTemperature beta) {
  const ModelParams p = validate_params(params);
  const GapSolution gap = gap_or_free(p, beta);
  if (gap.phase == Phase::superradiant) {
    throw PhaseError("normal-phase spectrum requested above the transition");
  }
  const bool critical = gap.phase == Phase::critical;
  const Wide w0 = p.omega0;
  const Wide om = p.Omega;
  const Wide g1 = p.g1;
  const Wide g2 = p.g2;
  const Wide t = critical ? w0 * om / ((g1 + g2) * (g1 + g2)) : Wide(beta.tanh_half(p.Omega));

  const Wide g1s = g1 * g1;
  const Wide g2s = g2 * g2;
  const Wide sum = w0 * w0 + om * om + 2 * (g1s - g2s) * t;
  const Wide split = w0 * w0 - om * om;
  const Wide plus = (w0 + om) * (w0 + om);
  const Wide minus = (w0 - om) * (w0 - om);
  const Wide disc = snap_rounding(split * split + 4 * (g1s * plus - g2s * minus) * t,
                                  split * split + 4 * (g1s * plus + g2s * minus) * t);
  // Product of the two squared energies, factored so that it vanishes cleanly
  // where the lower branch closes.
  const Wide product = (w0 * om - (g1 - g2) * (g1 - g2) * t) * (w0 * om - (g1 + g2) * (g1 + g2) * t);
  const Wide upper_sq = (sum + checked_sqrt(disc, "discriminant")) / 2;

  SpectrumResult out;
  out.case_tag = critical ? SpectrumCase::critical : SpectrumCase::normal;
  const double upper = to_energy(upper_sq, "upper");
  const Wide lower_sq = upper_sq > 0 ? product / upper_sq : Wide(0);
  const double lower =
      critical ? 0.0 : to_energy(snap_rounding(lower_sq, sum + 2 * (g1s + g2s) * t), "lower");
  out.energies = {lower, upper};
  return out;
}

double spectrum_critical_e2(const ModelParams& params) {
  const ModelParams p = validate_params(params);
  const double g = p.coupling_sum();
  if (g == 0.0 || !critical_beta(p)) throw DomainError("no finite-temperature transition");
  const double plus = p.Omega + p.omega0;
  const double minus = p.Omega - p.omega0;
  return std::sqrt((p.g1 * plus * plus + p.g2 * minus * minus) / g);
}

SpectrumResult spectrum_superradiant(const ModelParams& params, InverseTemperature beta) {
  const ModelParams p = validate_params(params);
  const GapSolution gap = gap_or_free(p, beta);
  if (gap.phase != Phase::superradiant) {
    throw PhaseError("superradiant spectrum requested at or below the transition");
  }
  const Wide w0 = p.omega0;
  const Wide om = p.Omega;
  const Wide od = gap.omega_delta;
  const Wide g1 = p.g1;
  const Wide g2 = p.g2;
  const Wide cross = 2 * w0 * om;

  SpectrumResult out;
  out.case_tag = superradiant_case(p);
  switch (out.case_tag) {
    case SpectrumCase::sr_u1_sum:
      out.energies = {0.0, to_energy(w0 * w0 + od * od + cross, "upper")};
      out.goldstone = true;
      return out;
    case SpectrumCase::sr_u1_diff:
      out.energies = {0.0, to_energy(w0 * w0 + od * od - cross, "upper")};
      out.goldstone = true;
      return out;
    default: break;
  }

  const Wide gs = (g1 + g2) * (g1 + g2);
  const Wide k = w0 * w0 + od * od + (g1 * g1 - g2 * g2) / gs * cross;
  const Wide product = 16 * g1 * g2 / gs * w0 * w0 * (od - om) * (od + om);
  const Wide k_scale = w0 * w0 + od * od + (g1 * g1 + g2 * g2) / gs * cross;
  const Wide upper_sq = (k + checked_sqrt(snap_rounding(k * k - product, k_scale * k_scale + product),
                                          "discriminant")) / 2;
  const Wide lower_sq = upper_sq > 0 ? product / (4 * upper_sq) : Wide(0);
  out.energies = {to_energy(lower_sq, "lower"), to_energy(upper_sq, "upper")};
  return out;
}

SpectrumResult spectrum(const ModelParams& params, InverseTemperature beta) {
  const ModelParams p = validate_params(params);
  if (gap_or_free(p, beta).phase == Phase::superradiant) return spectrum_superradiant(p, beta);
  return spectrum_normal(p, beta);
}

namespace {

struct WidePolynomial {
  Wide linear = 0;
  Wide constant = 0;
  Wide constant_scale = 0;
};

WidePolynomial wide_kernel_polynomial(const ModelParams& p, InverseTemperature beta,
                                      const GapSolution& gap) {
  const Wide od = gap.omega_delta;
  const Wide om = p.Omega;
  const Wide w0 = p.omega0;
  const Wide g1 = p.g1;
  const Wide g2 = p.g2;
  // At and above the transition tanh(beta od / 2) is fixed by the gap equation.
  const Wide t_over_od = gap.phase == Phase::normal ? Wide(beta.tanh_half(gap.omega_delta)) / od
                                                    : w0 / ((g1 + g2) * (g1 + g2));
  const Wide g1s = g1 * g1;
  const Wide g2s = g2 * g2;
  const Wide diff = g1s - g2s;
  const Wide od2 = od * od;
  const Wide om2 = om * om;

  const Wide terms[] = {
      od2 * w0 * w0,
      diff * diff * om2 * t_over_od * t_over_od,
      -(g1s + g2s) * (om2 + od2) * w0 * t_over_od,
      2 * g1 * g2 * (od2 - om2) * w0 * t_over_od,
  };
  WidePolynomial poly;
  poly.linear = od2 + w0 * w0 + 2 * diff * om * t_over_od;
  for (const Wide& term : terms) {
    poly.constant += term;
    poly.constant_scale += abs(term);
  }
  return poly;
}

}  // namespace

KernelPolynomial kernel_polynomial(const ModelParams& p, InverseTemperature beta,
                                   const GapSolution& gap) {
  const WidePolynomial wide = wide_kernel_polynomial(p, beta, gap);
  KernelPolynomial poly;
  poly.linear = static_cast<double>(wide.linear);
  poly.constant = static_cast<double>(wide.constant);
  poly.constant_noise = static_cast<double>(kNoiseFactor * wide.constant_scale);
  return poly;
}

SpectrumResult spectrum_via_kernel_roots(const ModelParams& params, InverseTemperature beta) {
  const ModelParams p = validate_params(params);
  const GapSolution gap = gap_or_free(p, beta);
  const WidePolynomial poly = wide_kernel_polynomial(p, beta, gap);
  if (!isfinite(poly.linear) || !isfinite(poly.constant)) {
    throw ConvergenceError("kernel polynomial has non-finite coefficients");
  }

  // E^4 - linear E^2 + constant = 0 in y = E^2.
  const Wide c = abs(poly.constant) <= kNoiseFactor * poly.constant_scale ? Wide(0) : poly.constant;
  const Wide& b = poly.linear;
  const Wide disc = snap_rounding(b * b - 4 * c, b * b + 4 * poly.constant_scale);
  const Wide big = (b + checked_sqrt(disc, "discriminant")) / 2;
  const Wide small = big > 0 ? c / big : Wide(0);
  const double lower = to_energy(small, "lower");
  const double upper = to_energy(big, "upper");

  SpectrumResult out;
  out.case_tag = case_for(p, gap);
  out.energies = {lower, upper};
  std::sort(out.energies.begin(), out.energies.end());
  out.goldstone = (out.case_tag == SpectrumCase::sr_u1_sum ||
                   out.case_tag == SpectrumCase::sr_u1_diff) &&
                  out.energies.front() == 0.0;
  return out;
}

}  // namespace dicke
