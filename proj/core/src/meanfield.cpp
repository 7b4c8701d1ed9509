#include "dicke/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dicke/errors.hpp"
#include "dicke/roots.hpp"

namespace dicke {
namespace {

// Sums and products of two doubles of similar size are exact at 113 bits, so
// the transition test (g1 + g2)^2 > omega0 Omega is decided exactly.
using Wide = boost::multiprecision::cpp_bin_float_quad;

Wide wide_coupling_sq(const ModelParams& p) {
  const Wide g = Wide(p.g1) + Wide(p.g2);
  return g * g;
}

// |b0|^2 = (x^2 - Omega^2) / (4 G^2), without cancelling x^2 against Omega^2.
double order_parameter(const ModelParams& p, const Wide& x) {
  return static_cast<double>((x - p.Omega) * (x + p.Omega) / (4 * wide_coupling_sq(p)));
}

// ln(2 cosh x) without overflow.
double log_two_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

// ln(cosh a / cosh b).
double log_cosh_ratio(double a, double b) {
  return log_two_cosh(a) - log_two_cosh(b);
}

double require_coupling(const ModelParams& p) {
  const double g = p.coupling_sum();
  if (g == 0.0) throw DomainError("g1 + g2 must be positive");
  return g;
}

void require_consistent(const ModelParams& p, InverseTemperature beta, const GapSolution& gap) {
  const GapSolution expected = solve_gap(p, beta);
  const double scale = std::max(1.0, expected.omega_delta);
  if (expected.phase != gap.phase ||
      std::abs(expected.omega_delta - gap.omega_delta) > 1e-9 * scale) {
    throw DomainError("gap solution is inconsistent with the parameters and temperature");
  }
}

// 1 - x / sinh(x) for x > 0.
double one_minus_x_over_sinh(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return x2 / 6.0 - 7.0 * x2 * x2 / 360.0;
  }
  return 1.0 - x / std::sinh(x);
}

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::normal: return "NORMAL";
    case Phase::superradiant: return "SUPERRADIANT";
    case Phase::critical: return "CRITICAL";
  }
  return "?";
}

std::optional<InverseTemperature> critical_beta(const ModelParams& params) {
  const ModelParams p = validate_params(params);
  require_coupling(p);
  const Wide gs = wide_coupling_sq(p);
  const Wide excess = gs - Wide(p.omega0) * Wide(p.Omega);
  if (excess <= 0) return std::nullopt;
  // 2 atanh(1 - delta) = ln((2 - delta) / delta) with delta = 1 - omega0 Omega / G^2.
  const Wide delta = excess / gs;
  return InverseTemperature(static_cast<double>(log((2 - delta) / delta)) / p.Omega);
}

double gap_residual(const ModelParams& p, InverseTemperature beta, double omega_delta) {
  const double g = p.coupling_sum();
  return p.omega0 * omega_delta / (g * g) - beta.tanh_half(omega_delta);
}

GapSolution solve_gap(const ModelParams& params, InverseTemperature beta) {
  const ModelParams p = validate_params(params);
  const double g = require_coupling(p);
  const GapSolution normal{Phase::normal, p.Omega, 0.0};

  const auto beta_c = critical_beta(p);
  if (!beta_c) return normal;

  const Wide upper_wide = wide_coupling_sq(p) / p.omega0;
  const double upper = static_cast<double>(upper_wide);

  if (beta.is_infinite()) {
    return {Phase::superradiant, upper, order_parameter(p, upper_wide)};
  }

  const double b = beta.value();
  const double bc = beta_c->value();
  if (std::abs(b - bc) <= kCriticalWindow * bc) return {Phase::critical, p.Omega, 0.0};
  if (b < bc) return normal;

  const double slope = p.omega0 / (g * g);
  auto f = [&](double x) { return slope * x - std::tanh(0.5 * b * x); };
  auto df = [&](double x) {
    const double c = std::cosh(0.5 * b * x);
    return slope - 0.5 * b / (c * c);
  };
  // Once tanh has saturated to 1 the root is the upper end to rounding.
  if (f(upper) <= 0.0) return {Phase::superradiant, upper, order_parameter(p, upper_wide)};
  const double root = bisect_newton(f, df, p.Omega, upper);
  if (!(root > p.Omega)) {
    throw ConvergenceError("superradiant root collapsed onto Omega");
  }
  return {Phase::superradiant, root, order_parameter(p, root)};
}

PhiShift phi_shift(const ModelParams& params, InverseTemperature beta, const GapSolution& gap) {
  const ModelParams p = validate_params(params);
  require_consistent(p, beta, gap);
  if (gap.phase != Phase::superradiant) return {0.0, beta.is_infinite()};

  const double condensate = p.omega0 * gap.b0_sq;
  if (beta.is_infinite()) {
    return {0.5 * (gap.omega_delta - p.Omega) - condensate, true};
  }
  const double b = beta.value();
  return {-b * condensate + log_cosh_ratio(0.5 * b * gap.omega_delta, 0.5 * b * p.Omega), false};
}

double free_energy_per_atom(const ModelParams& params, InverseTemperature beta) {
  const ModelParams p = validate_params(params);
  double omega_delta = p.Omega;
  double condensate = 0.0;
  if (p.coupling_sum() > 0.0) {
    const GapSolution gap = solve_gap(p, beta);
    if (gap.phase == Phase::superradiant) {
      omega_delta = gap.omega_delta;
      condensate = p.omega0 * gap.b0_sq;
    }
  }
  if (beta.is_infinite()) return -0.5 * omega_delta + condensate;
  const double b = beta.value();
  return -log_two_cosh(0.5 * b * omega_delta) / b + condensate;
}

FluctuationKernel kernel(const ModelParams& p, InverseTemperature beta, const GapSolution& gap,
                         std::complex<double> omega) {
  using cplx = std::complex<double>;
  const double od = gap.omega_delta;
  const double t = beta.tanh_half(od);
  const cplx w2 = omega * omega;
  const cplx d0 = w2 + p.omega0 * p.omega0;
  const cplx dd = w2 + od * od;
  if (d0 == cplx(0.0) || dd == cplx(0.0)) {
    throw DomainError("kernel evaluated at a pole");
  }

  const double g1s = p.g1 * p.g1;
  const double g2s = p.g2 * p.g2;
  const double diff = g1s - g2s;
  const double od2 = od * od;
  const double om2 = p.Omega * p.Omega;

  const cplx quadratic = diff * diff * om2 * t * t / (od2 * dd * d0);
  const cplx linear = (2.0 * diff * p.Omega * w2 - (g1s + g2s) * (om2 + od2) * p.omega0 +
                       2.0 * p.g1 * p.g2 * (od2 - om2) * p.omega0) *
                      t / (od * dd * d0);
  FluctuationKernel k;
  k.h = 1.0 + quadratic + linear;

  if (p.g1 == p.g2) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    k.r = k.s_plus = k.s_minus = cplx(nan, nan);
    return k;
  }
  const double inv_alpha2 = g2s - g1s;
  const double alpha2 = 1.0 / inv_alpha2;
  const cplx i(0.0, 1.0);
  k.r = 2.0 * p.omega0 * p.g1 * p.g2 * alpha2 - (od2 - om2) * inv_alpha2 * t / (2.0 * od * dd);
  const cplx odd = 1.0 - p.Omega * inv_alpha2 * t / (od * dd);
  const cplx even =
      -p.omega0 * (g1s + g2s) * alpha2 + (od2 + om2) * inv_alpha2 * t / (2.0 * od * dd);
  k.s_plus = i * omega * odd + even;
  k.s_minus = -i * omega * odd + even;
  return k;
}

double kernel_normal(const ModelParams& p, InverseTemperature beta, double omega) {
  const double t = beta.tanh_half(p.Omega);
  const double w2 = omega * omega;
  const double den = (w2 + p.Omega * p.Omega) * (w2 + p.omega0 * p.omega0);
  const double diff = p.g1 * p.g1 - p.g2 * p.g2;
  const double sum = p.g1 * p.g1 + p.g2 * p.g2;
  return 1.0 + diff * diff * t * t / den +
         (2.0 * diff * w2 - 2.0 * sum * p.Omega * p.omega0) * t / den;
}

double kernel_superradiant(const ModelParams& p, const GapSolution& gap, double omega) {
  if (gap.phase == Phase::normal) throw PhaseError("H_II requires a condensed saddle point");
  const double g = p.coupling_sum();
  const double g2sum = g * g;
  const double od2 = gap.omega_delta * gap.omega_delta;
  const double w02 = p.omega0 * p.omega0;
  const double w2 = omega * omega;
  const double linear =
      w02 + od2 + 2.0 * (p.g1 * p.g1 - p.g2 * p.g2) / g2sum * p.omega0 * p.Omega;
  const double constant =
      4.0 * p.g1 * p.g2 / g2sum * w02 * (od2 - p.Omega * p.Omega);
  return (w2 * w2 + linear * w2 + constant) / ((w2 + od2) * (w2 + w02));
}

double goldstone_amplitude(const ModelParams& params, InverseTemperature beta,
                           const GapSolution& gap) {
  const ModelParams p = validate_params(params);
  if (beta.is_infinite()) throw DomainError("zero-mode amplitude needs a finite temperature");
  if ((p.g1 == 0.0) == (p.g2 == 0.0)) {
    throw DomainError("zero-mode amplitude needs exactly one vanishing coupling");
  }
  if (gap.phase != Phase::superradiant) {
    throw DomainError("zero-mode amplitude is defined only in the superradiant phase");
  }
  const double g = p.g1 + p.g2;
  const double b = beta.value();
  const double od = gap.omega_delta;
  return g / (od * std::sqrt(std::numbers::pi * b * p.omega0)) *
         std::sqrt(one_minus_x_over_sinh(b * od));
}

PartitionAsymptotics log_partition_ratio(const ModelParams& params, InverseTemperature beta,
                                         std::int64_t n_atoms, std::int64_t cutoff) {
  const ModelParams p = validate_params(params);
  if (beta.is_infinite()) {
    throw DomainError("partition asymptotics are defined only at finite temperature");
  }
  if (cutoff < 1) throw DomainError("Matsubara cutoff must be at least 1");
  if (n_atoms < 1) throw DomainError("atom number must be at least 1");

  PartitionAsymptotics out;
  out.n_atoms = n_atoms;
  if (classify_symmetry(p).tag == SymmetryTag::free) return out;

  const GapSolution gap = solve_gap(p, beta);
  if (gap.phase == Phase::critical) {
    throw DomainError("Gaussian fluctuation integral diverges at the critical point");
  }
  const bool condensed = gap.phase == Phase::superradiant;
  auto log_h = [&](double w) {
    const double h = condensed ? kernel_superradiant(p, gap, w) : kernel_normal(p, beta, w);
    if (!(h > 0.0)) {
      throw ConvergenceError("fluctuation kernel is not positive at w = " + std::to_string(w));
    }
    return std::log(h);
  };

  const double b = beta.value();
  const double step = 2.0 * std::numbers::pi / b;
  double correction = 0.0;

  if (condensed) {
    out.phi = phi_shift(p, beta, gap).value;
    if (p.g1 != 0.0 && p.g2 != 0.0) {
      correction += std::numbers::ln2 - 0.5 * log_h(0.0);
    } else {
      out.goldstone_case = true;
      correction += 0.5 * std::log(static_cast<double>(n_atoms)) -
                    std::log(goldstone_amplitude(p, beta, gap));
    }
  } else {
    correction -= 0.5 * log_h(0.0);
  }

  double sum = 0.0;
  double last = 0.0;
  double half = 0.0;
  const std::int64_t half_index = std::max<std::int64_t>(1, cutoff / 2);
  for (std::int64_t n = 1; n <= cutoff; ++n) {
    const double term = log_h(step * static_cast<double>(n));
    sum += term;
    if (n == half_index) half = term;
    if (n == cutoff) last = term;
  }
  correction -= sum;

  // ln H(w) = c2/w^2 + c4/w^4 + ..., fitted through the last two octaves.
  const double w_last = step * static_cast<double>(cutoff);
  const double w_half = step * static_cast<double>(half_index);
  const double r_last = w_last * w_last * last;
  const double r_half = w_half * w_half * half;
  const double scale2 = 1.0 / (step * step);
  const double next = static_cast<double>(cutoff + 1);
  const double tail2 = scale2 * boost::math::trigamma(next);
  const double tail4 = scale2 * scale2 * boost::math::polygamma(3, next) / 6.0;

  double c2 = r_last;
  double c4 = 0.0;
  if (half_index < cutoff) {
    c4 = (r_last - r_half) / (1.0 / (w_last * w_last) - 1.0 / (w_half * w_half));
    c2 = r_last - c4 / (w_last * w_last);
    const double spread = std::abs(r_last - r_half);
    if (spread > 0.1 * std::max(std::abs(r_last), std::abs(r_half)) && spread * tail2 > 1e-8) {
      throw ConvergenceError("Matsubara tail coefficient is not settled; raise the cutoff");
    }
  }
  out.tail = -(c2 * tail2 + c4 * tail4);
  correction += out.tail;
  out.log_correction = correction;
  return out;
}

}  // namespace dicke
