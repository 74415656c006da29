#pragma once

#include "caslayer/stack.hpp"

namespace caslayer {

// A cavity inside a stack: gap region k, bounded by the sub-stack that ends
// at region l on the left and the sub-stack that starts at region j on the
// right (l < k < j, k interior).
struct CavityTriple {
  std::size_t l, k, j;
};

// Four region indices i < l < k < j for the two-gap factorization identity.
struct CavityQuad {
  std::size_t i, l, k, j;
};

// Characteristic function of one cavity at imaginary frequency i*xi and
// transverse wavenumber kpar:
//
//   f(l|k|j) = det[ 1 - E_k R(j|k) E_k R(l|k) ]
//
// with E_k the decaying traversal factor of the gap, R(j|k) the reflection
// of the right sub-stack seen from inside the gap and R(l|k) that of the
// left sub-stack. The value is real for every material here (reciprocal
// media give real matrices; the Weyl semimetal's two helicity channels are
// complex conjugates); a NumericError flags the pathological points where
// the imaginary part exceeds 1e-10 relative or the value is not positive.
double char_fn(const LayerStack& s, CavityTriple c, double xi, double kpar,
               Basis basis);

// Pole-subtracted characteristic function of the whole stack: the product of
// the outer cavity factor f(0|split|N+1) and one single-layer ladder factor
// per remaining interior region,
//
//   f(0|split|N+1) * prod_{m<split} f(0|m|m+1) * prod_{m>split} f(m-1|m|N+1).
//
// The value is independent of which interior region is chosen as `split`
// (to ~1e-10 relative); its logarithm is the spectral density of the
// renormalized free energy.
double tilde_char_fn(const LayerStack& s, std::size_t split, double xi,
                     double kpar, Basis basis);

// Relative residual of the cavity-splitting identity
//   f(i|k|j) f(i|l|k) = f(i|l|j) f(l|k|j)
// at one spectral point. Zero up to rounding for any stack.
double verify_swap_identity(const LayerStack& s, CavityQuad q, double xi,
                            double kpar, Basis basis);

// Relative residual of the opposite-branch factorization: flipping the sign
// of every interior decay constant turns each ladder factor's boundary
// reflection into its inverse and multiplies the product by the determinant
// of the accumulated growth factors,
//
//   prod_k det[1 - E_k^{-1} R(k+1|k) E_k^{-1} R(0|k)^{-1}]
//     = prod_k f(0|k|k+1) * det[prod_k E_k^{-2}].
//
// Preconditions (DomainError): every region reciprocal (the identity's
// inversion step needs scalar channel parity), both end regions perfect
// conductors, and widths small enough that the growing exponentials stay
// representable (OverflowError otherwise).
double verify_uv_factorization(const LayerStack& s, double xi, double kpar);

}  // namespace caslayer
