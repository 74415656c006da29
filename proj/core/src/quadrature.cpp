#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

namespace caslayer::detail {

double u_cut(double rel_tol) {
  const double target = std::max(rel_tol, 1e-14) * 0.01;
  const double l = -std::log(target);
  return l + 3.0 * std::log(std::max(10.0, l)) + 5.0;
}

PanelResult integrate_panel(const std::function<double(double)>& f, double a,
                            double b, double rel_tol, EvalBudget& budget) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const auto counted = [&](double x) {
    budget.charge(1);
    return f(x);
  };
  double err = 0.0;
  const double value = GK::integrate(counted, a, b, 15, rel_tol, &err);
  return PanelResult{value, err};
}

SpectralTerm kpar_integral(const std::function<double(double)>& f,
                           double scale, double rel_tol, EvalBudget& budget) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("kpar_integral: decay scale must be positive");
  }
  const double umax = u_cut(rel_tol);
  const std::size_t before = budget.used();
  const auto g = [&](double u) {
    // The double-exponential rule samples arbitrarily close to the lower
    // endpoint. At the zero-frequency term an ideal-mirror round trip there
    // is 1 - exp(-u), which rounds to exactly zero once u drops below the
    // spacing of doubles near one; the integrand itself behaves at worst
    // like u * log(u), so everything below this floor contributes less than
    // 1e-23 and is dropped rather than evaluated.
    if (u < 1e-12) return 0.0;
    budget.charge(1);
    return u * f(u / (2.0 * scale));
  };
  // tanh-sinh absorbs the logarithmic corner the energy kernels develop at
  // the spectral origin (log(1 - x) with x -> 1); plain adaptive bisection
  // needs millions of points there, the double-exponential map a few hundred.
  // One instance per thread: the node table is lazily extended and per-thread
  // instances keep that extension race-free under sweep parallelism.
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  double raw_err = 0.0;
  double l1 = 0.0;
  const double value = ts.integrate(g, 0.0, umax, rel_tol * 0.25, &raw_err,
                                    &l1);
  // The reported residual is on the unit-scaled interval.
  const double abs_err = raw_err * 0.5 * umax;
  // Probe near the cut: the remaining tail is bounded by a few times the
  // integrand there (the kernel keeps decaying at least exponentially; the
  // probe call charges itself through g).
  const double tail = 2.0 * std::abs(g(0.98 * umax));
  const double norm = 8.0 * std::numbers::pi * scale * scale;
  SpectralTerm t;
  t.value = value / norm;
  t.error = (abs_err + tail) / norm;
  t.evals = budget.used() - before;
  return t;
}

}  // namespace caslayer::detail
