#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <utility>

#include "dicke/errors.hpp"

namespace dicke {

struct RootOptions {
  double bracket_tolerance = 1e-6;   // bisection stops below this width
  double residual_tolerance = 1e-12; // |f(x)| target of the Newton polish
  int max_bisections = 200;
  int max_newton = 50;
};

/// Root of f on [lo, hi] with f(lo) < 0 < f(hi) (or the reverse).
///
/// Bisection narrows the bracket to bracket_tolerance * max(1, |hi|),
/// then Newton steps polish the residual. Newton iterates that leave the
/// bracket fall back to bisection, so the result always stays inside it.
/// Throws ConvergenceError when the residual target is not met.
template <class F, class DF>
  requires std::invocable<F, double> && std::invocable<DF, double>
double bisect_newton(F&& f, DF&& df, double lo, double hi, const RootOptions& opt = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw ConvergenceError("root is not bracketed");
  const bool rising = flo < 0.0;

  auto shrink = [&](double x, double fx) {
    if ((fx < 0.0) == rising) {
      lo = x;
    } else {
      hi = x;
    }
  };

  const double width = opt.bracket_tolerance * std::max(1.0, std::abs(hi));
  for (int i = 0; i < opt.max_bisections && hi - lo > width; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    shrink(mid, fm);
  }

  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int i = 0; i < opt.max_newton; ++i) {
    if (std::abs(fx) <= opt.residual_tolerance) {
      // Polish toward rounding level.
      for (int extra = 0; extra < 2 && fx != 0.0; ++extra) {
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        const double next = x - fx / d;
        if (!(next > lo && next < hi)) break;
        const double fn = f(next);
        if (std::abs(fn) >= std::abs(fx)) break;
        x = next;
        fx = fn;
      }
      return x;
    }
    shrink(x, fx);
    const double d = df(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
    fx = f(x);
  }
  if (std::abs(fx) <= opt.residual_tolerance) return x;
  throw ConvergenceError("root polish did not reach the residual tolerance");
}

}  // namespace dicke
