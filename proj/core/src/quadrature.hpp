#pragma once

// Internal adaptive-quadrature plumbing shared by the thermal-sum and force
// translation units. Not installed.

#include <cstddef>
#include <functional>

#include "caslayer/thermo.hpp"

namespace caslayer::detail {

// Thrown (and caught internally) when the caller's evaluation cap is hit;
// converted into ConvergenceError where the partial result is known.
struct BudgetExhausted {};

class EvalBudget {
 public:
  explicit EvalBudget(std::size_t cap) : cap_(cap) {}
  void charge(std::size_t n) {
    used_ += n;
    if (used_ > cap_) throw BudgetExhausted{};
  }
  std::size_t used() const noexcept { return used_; }

 private:
  std::size_t used_ = 0;
  std::size_t cap_;
};

// Upper cut for integrands decaying at least like exp(-u) times a cubic
// polynomial: the discarded tail stays near one percent of rel_tol.
double u_cut(double rel_tol);

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod integration over [a, b]; every function call is
// charged to the budget.
PanelResult integrate_panel(const std::function<double(double)>& f, double a,
                            double b, double rel_tol, EvalBudget& budget);

// (1/2pi) * Integral_0^inf kpar f(kpar) dkpar, evaluated on the substituted
// variable u = 2 * scale * kpar so the kernel decays like exp(-u); `scale`
// must be the smallest gap width whose traversal the integrand contains.
SpectralTerm kpar_integral(const std::function<double(double)>& f,
                           double scale, double rel_tol, EvalBudget& budget);

}  // namespace caslayer::detail
