#pragma once

#include <cstddef>

#include "caslayer/stack.hpp"
#include "caslayer/thermo.hpp"

namespace caslayer {

// A force computation targets one interior gap of a stack.  The reported
// value is the force per unit area conjugate to that gap's width: negative
// values mean the mirrors attract (the gap wants to shrink).  Unlike the
// energy, a force does not need conductor end caps -- semi-infinite
// dielectric or conducting ends are handled directly.
struct ForceQuery {
  LayerStack stack;
  std::size_t gap = 1;  // interior region index of the target gap
  ThermalSpec thermal;
  QuadratureSpec quad;
  Basis basis = Basis::TMTE;
};

// Spectral-point integrand of the gap force at one (xi, kpar) node, in the
// stack's working basis.  Differentiating ln det[1 - E R_right E R_left]
// with respect to the gap width pulls one longitudinal wavenumber out of
// each propagation factor, giving
//
//   d/da ln det[1 - X] = tr[khat X (1 - X)^{-1}] + tr[khat Y (1 - Y)^{-1}],
//
// with X = E R_right E R_left, Y = E R_left E R_right and khat the diagonal
// wavenumber matrix of the gap medium.  The sum is manifestly symmetric
// under exchanging the two mirrors, so the force computed from either side
// of the gap is equal and opposite by construction; tests probe both
// assemblies.  The returned value is the (negated) derivative integrand, so
// that feeding it through the same thermal machinery as the energy yields
// the force directly.
double force_integrand(const LayerStack& s, std::size_t gap, double xi,
                       double kpar, Basis basis);

// Per-channel variant of force_integrand for stacks whose reflection
// operators are diagonal in the working basis (reciprocal media in the
// TM/TE basis, or uniaxial setups in the helicity basis).  Throws
// NumericError if any boundary reflection carries off-diagonal weight above
// 1e-12 relative to its largest entry; otherwise runs the scalar ladder per
// channel.  Serves as an independent route against the matrix-valued trace.
double force_integrand_diagonal(const LayerStack& s, std::size_t gap,
                                double xi, double kpar, Basis basis);

// Force per unit area on the target gap, matrix-valued route.  Negative
// means attraction.  Throws DomainError for non-interior gaps or
// non-positive gap widths, and ConvergenceError (with partial result) if
// the evaluation budget runs out.
ObservableResult force_general(const ForceQuery& q);

// Same observable through the per-channel scalar route; rejects stacks
// that could not be diagonalized in the working basis.  Agreement between
// force_general and force_diagonal is a library invariant wherever both
// apply.
ObservableResult force_diagonal(const ForceQuery& q);

// Net force per unit area on one interior body: the difference between the
// force on the gap to its left and the force on the gap to its right,
//
//   F(body) = F(body - 1) - F(body + 1),
//
// positive when the body is pushed toward larger z (higher region index).
// Both neighbours of `body` must be interior regions with positive width.
// A mirror-symmetric environment yields zero by the exchange symmetry of
// the integrand.
ObservableResult force_on_body(const LayerStack& s, std::size_t body,
                               const ThermalSpec& thermal,
                               const QuadratureSpec& quad,
                               Basis basis = Basis::TMTE);

}  // namespace caslayer
