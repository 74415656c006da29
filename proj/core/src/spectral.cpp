#include "caslayer/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace caslayer {

namespace {

// Extracts the guaranteed-real value of a characteristic determinant,
// flagging points where rounding or a bug broke the exact conjugation
// symmetry that makes it real, or where positivity is lost (the logarithm
// downstream needs both).
double real_char_value(const cplx& det, const char* what) {
  const double scale = std::max(1.0, std::abs(det.real()));
  if (!(std::abs(det.imag()) <= 1e-10 * scale)) {
    throw NumericError(std::string(what) +
                       ": imaginary residue " + std::to_string(det.imag()) +
                       " on a value that must be real");
  }
  if (!(det.real() > 0.0)) {
    throw NumericError(std::string(what) + ": non-positive value " +
                       std::to_string(det.real()));
  }
  return det.real();
}

void check_triple(const LayerStack& s, CavityTriple c) {
  if (!(c.l < c.k && c.k < c.j) || c.j >= s.num_regions()) {
    throw DomainError("char_fn: need region indices l < k < j inside the "
                      "stack");
  }
}

}  // namespace

double char_fn(const LayerStack& s, CavityTriple c, double xi, double kpar,
               Basis basis) {
  check_triple(s, c);
  const Basis work = s.has_weyl() ? Basis::Helicity : basis;
  const CMat e = propagation_factor(s, c.k, xi, kpar, work);
  const CMat r_right = segment_coeffs(s, Segment{c.k, c.j}, xi, kpar, work).r;
  const CMat r_left =
      segment_coeffs(s, Segment{c.l, c.k}, xi, kpar, work).r_rev;
  const CMat arg = CMat::identity(2) - e * r_right * e * r_left;
  return real_char_value(mat_det(arg), "char_fn");
}

double tilde_char_fn(const LayerStack& s, std::size_t split, double xi,
                     double kpar, Basis basis) {
  const std::size_t last = s.num_regions() - 1;
  if (split < 1 || split >= last) {
    throw DomainError("tilde_char_fn: split must name an interior region");
  }
  double value = char_fn(s, CavityTriple{0, split, last}, xi, kpar, basis);
  for (std::size_t m = 1; m < split; ++m) {
    value *= char_fn(s, CavityTriple{0, m, m + 1}, xi, kpar, basis);
  }
  for (std::size_t m = split + 1; m < last; ++m) {
    value *= char_fn(s, CavityTriple{m - 1, m, last}, xi, kpar, basis);
  }
  return value;
}

double verify_swap_identity(const LayerStack& s, CavityQuad q, double xi,
                            double kpar, Basis basis) {
  if (!(q.i < q.l && q.l < q.k && q.k < q.j)) {
    throw DomainError("verify_swap_identity: need i < l < k < j");
  }
  const double lhs = char_fn(s, CavityTriple{q.i, q.k, q.j}, xi, kpar, basis) *
                     char_fn(s, CavityTriple{q.i, q.l, q.k}, xi, kpar, basis);
  const double rhs = char_fn(s, CavityTriple{q.i, q.l, q.j}, xi, kpar, basis) *
                     char_fn(s, CavityTriple{q.l, q.k, q.j}, xi, kpar, basis);
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

double verify_uv_factorization(const LayerStack& s, double xi, double kpar) {
  if (!s.reciprocal()) {
    throw DomainError(
        "verify_uv_factorization: defined for reciprocal stacks only");
  }
  const std::size_t last = s.num_regions() - 1;
  if (!is_perfect_conductor(s.material(0)) ||
      !is_perfect_conductor(s.material(last))) {
    throw DomainError(
        "verify_uv_factorization: both end regions must be perfect "
        "conductors");
  }
  const Basis work = Basis::TMTE;
  double flipped = 1.0;   // product over the opposite branch
  double straight = 1.0;  // product over the physical branch
  double log_growth = 0.0;
  for (std::size_t k = 1; k < last; ++k) {
    const double w = s.width(k);
    const WaveNumbers kk = wavenumbers(s.material(k), xi, kpar, work);
    const std::array<cplx, 2> up{kk.k1 * w, kk.k2 * w};
    const std::array<cplx, 2> down{-kk.k1 * w, -kk.k2 * w};
    const CMat e_inv = diag_exp(std::span<const cplx>(up));
    const CMat e = diag_exp(std::span<const cplx>(down));
    const CMat r_iface =
        interface_coeffs(s.material(k), s.material(k + 1), xi, kpar, work).r;
    const CMat r0k = boundary_reflection(s, k, xi, kpar, work);
    const CMat arg_straight = CMat::identity(2) - e * r_iface * e * r0k;
    const CMat arg_flipped =
        CMat::identity(2) - e_inv * r_iface * e_inv * mat_inv(r0k);
    straight *=
        real_char_value(mat_det(arg_straight), "verify_uv_factorization");
    // The flipped-branch factor is real but has either sign.
    const cplx df = mat_det(arg_flipped);
    if (!(std::abs(df.imag()) <= 1e-10 * std::max(1.0, std::abs(df.real())))) {
      throw NumericError(
          "verify_uv_factorization: flipped-branch factor not real");
    }
    flipped *= df.real();
    log_growth += 2.0 * (kk.k1.real() + kk.k2.real()) * w;
  }
  const double rhs = straight * std::exp(log_growth);
  return std::abs(flipped - rhs) /
         std::max(std::abs(flipped), std::abs(rhs));
}

}  // namespace caslayer
