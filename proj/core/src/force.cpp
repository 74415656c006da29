#include "caslayer/force.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "caslayer/errors.hpp"
#include "caslayer/matrix.hpp"
#include "quadrature.hpp"

namespace caslayer {

namespace {

// Shared relative bound for declaring a spectral-point value real.
constexpr double kImagTol = 1.0e-10;

double take_real(const cplx& z, const char* who) {
  if (std::abs(z.imag()) > kImagTol * std::max(1.0, std::abs(z.real()))) {
    throw NumericError(std::string(who) +
                       ": spectral integrand has a non-negligible imaginary "
                       "part; the stack is outside the validated regime");
  }
  return z.real();
}

void validate_gap(const LayerStack& s, std::size_t gap, const char* who) {
  if (gap == 0 || gap + 1 >= s.num_regions()) {
    throw DomainError(std::string(who) + ": gap must be an interior region");
  }
  if (!(s.width(gap) > 0.0)) {
    throw DomainError(std::string(who) +
                      ": the target gap needs positive width");
  }
}

struct GapScattering {
  CMat refl_left;    // looking toward region 0 from inside the gap
  CMat refl_right;   // looking toward the last region from inside the gap
  CMat prop;         // one-way decay across the gap
  WaveNumbers khat;  // longitudinal wavenumbers of the gap medium
};

GapScattering gap_scattering(const LayerStack& s, std::size_t gap, double xi,
                             double kpar, Basis basis) {
  const Basis wb = s.has_weyl() ? Basis::Helicity : basis;
  GapScattering g{CMat(2), CMat(2), CMat(2), {}};
  g.refl_left =
      boundary_reflection(s, gap, xi, kpar, wb, Boundary::LeftEnd);
  g.refl_right =
      boundary_reflection(s, gap, xi, kpar, wb, Boundary::RightEnd);
  g.prop = propagation_factor(s, gap, xi, kpar, wb);
  g.khat = wavenumbers(s.material(gap), xi, kpar, wb);
  return g;
}

// tr[khat X (1 - X)^{-1}] for one round-trip operator X.
cplx khat_trace(const CMat& x, const WaveNumbers& khat) {
  const CMat resolvent = mat_inv(CMat::identity(2) - x);
  const CMat prod = x * resolvent;
  return khat.k1 * prod(0, 0) + khat.k2 * prod(1, 1);
}

}  // namespace

double force_integrand(const LayerStack& s, std::size_t gap, double xi,
                       double kpar, Basis basis) {
  validate_gap(s, gap, "force_integrand");
  const GapScattering g = gap_scattering(s, gap, xi, kpar, basis);
  const CMat x = g.prop * g.refl_right * g.prop * g.refl_left;
  const CMat y = g.prop * g.refl_left * g.prop * g.refl_right;
  // The two traces are complex conjugates channel-by-channel in helicity
  // setups; only their sum is guaranteed real.
  const cplx total = khat_trace(x, g.khat) + khat_trace(y, g.khat);
  return -take_real(total, "force_integrand");
}

double force_integrand_diagonal(const LayerStack& s, std::size_t gap,
                                double xi, double kpar, Basis basis) {
  validate_gap(s, gap, "force_integrand_diagonal");
  const GapScattering g = gap_scattering(s, gap, xi, kpar, basis);

  const auto check_diagonal = [](const CMat& r, const char* side) {
    const double ref = std::max(1.0, max_abs(r));
    if (std::abs(r(0, 1)) > 1.0e-12 * ref ||
        std::abs(r(1, 0)) > 1.0e-12 * ref) {
      throw NumericError(
          std::string("force_integrand_diagonal: the ") + side +
          " boundary reflection is not diagonal in the working basis; use "
          "the matrix-valued route");
    }
  };
  check_diagonal(g.refl_left, "left");
  check_diagonal(g.refl_right, "right");

  cplx total = 0.0;
  const cplx ks[2] = {g.khat.k1, g.khat.k2};
  for (int c = 0; c < 2; ++c) {
    const cplx e = g.prop(c, c);
    const cplx x = e * g.refl_right(c, c) * e * g.refl_left(c, c);
    const cplx denom = 1.0 - x;
    if (std::abs(denom) < 1.0e-300) {
      throw NumericError(
          "force_integrand_diagonal: round-trip factor reaches unity; the "
          "spectral point sits on a cavity pole");
    }
    total += 2.0 * ks[c] * x / denom;
  }
  return -take_real(total, "force_integrand_diagonal");
}

namespace {

ObservableResult run_force(const ForceQuery& q,
                           double (*integrand)(const LayerStack&, std::size_t,
                                               double, double, Basis),
                           const char* who) {
  validate_gap(q.stack, q.gap, who);
  const double scale = q.stack.width(q.gap);
  const auto term = [&](double xi) {
    detail::EvalBudget term_budget(q.quad.max_evals);
    return detail::kpar_integral(
        [&](double kpar) {
          return integrand(q.stack, q.gap, xi, kpar, q.basis);
        },
        scale, q.quad.rel_tol, term_budget);
  };
  return matsubara_sum(term, q.thermal, q.quad, scale);
}

}  // namespace

ObservableResult force_general(const ForceQuery& q) {
  return run_force(q, &force_integrand, "force_general");
}

ObservableResult force_diagonal(const ForceQuery& q) {
  return run_force(q, &force_integrand_diagonal, "force_diagonal");
}

ObservableResult force_on_body(const LayerStack& s, std::size_t body,
                               const ThermalSpec& thermal,
                               const QuadratureSpec& quad, Basis basis) {
  if (body < 2 || body + 2 >= s.num_regions()) {
    throw DomainError(
        "force_on_body: the body needs interior regions on both sides");
  }
  ForceQuery left{s, body - 1, thermal, quad, basis};
  ForceQuery right{s, body + 1, thermal, quad, basis};
  const ObservableResult fl = force_general(left);
  const ObservableResult fr = force_general(right);
  ObservableResult out;
  out.value = fl.value - fr.value;
  out.error_estimate = fl.error_estimate + fr.error_estimate;
  out.evaluations = fl.evaluations + fr.evaluations;
  out.terms = fl.terms + fr.terms;
  return out;
}

}  // namespace caslayer
