#pragma once

// Independent reference implementations ("oracles") used by the test suite.
//
// The scattering oracle re-derives interface coefficients from nothing but
// Maxwell boundary conditions: it builds the explicit polarization vectors of
// the plane-wave modes on both sides of a planar interface, imposes
// continuity of the tangential E and H fields, and solves the resulting 4x4
// complex linear system with its own tiny Gaussian elimination. No scattering
// formula from the production library enters; agreement between the two is a
// genuine cross-check of the physics, not of one code path against itself.
//
// The same solver runs at real frequencies (propagating waves, comparable to
// textbook Fresnel formulas) and at imaginary frequencies (evanescent waves,
// comparable to the production library's working domain).

#include <array>
#include <complex>
#include <cstddef>
#include <random>

#include "caslayer/materials.hpp"
#include "caslayer/stack.hpp"

namespace testsupport {

using cd = std::complex<double>;

// --------------------------------------------------------------------------
// Tiny self-contained linear algebra (independent of the production library)
// --------------------------------------------------------------------------

// Solves the 4x4 complex system a * x = b by partially pivoted elimination.
std::array<cd, 4> solve4(std::array<std::array<cd, 4>, 4> a,
                         std::array<cd, 4> b);

// --------------------------------------------------------------------------
// Plane-wave mode sets
// --------------------------------------------------------------------------

// The two propagation channels of a homogeneous medium at in-plane
// wavenumber kx (along x) and frequency omega (complex; use pure-imaginary
// omega = i*xi for the evanescent domain). For each channel the set carries
// the +z longitudinal wavenumber and the full 3-vector E polarizations of
// the right-moving and left-moving solutions, in the pairing layout of the
// scattering convention: left-moving channel c is the partner of
// right-moving channel c (for circular/helicity sets the partner has the
// opposite handedness; the channel label follows the longitudinal
// wavenumber, not the handedness).
struct ModeSet {
  std::array<cd, 2> kz;                       // +z wavenumbers per channel
  std::array<std::array<cd, 3>, 2> e_right;   // E of right-movers
  std::array<std::array<cd, 3>, 2> e_left;    // E of left-movers
  double mu = 1.0;                            // for the H = B/mu condition
};

// Isotropic medium (dielectric or vacuum), TM/TE layout: channel 0 = TM
// (E in the plane of incidence), channel 1 = TE (E along y).
ModeSet isotropic_modes_tmte(cd eps, double mu, cd omega, double kx);

// Isotropic medium, circular layout: channel 0 = {right-circular
// right-mover, left-circular left-mover}, channel 1 the mirror pairing.
ModeSet isotropic_modes_circular(cd eps, double mu, cd omega, double kx);

// Medium with a node-splitting vector of magnitude b along z (helicity
// layout; the two channels carry distinct longitudinal wavenumbers
// kz_pm^2 = kappa_z (kappa_z +- b) with kappa_z^2 = omega^2 - kx^2).
ModeSet weyl_modes(double b, cd omega, double kx);

// --------------------------------------------------------------------------
// Boundary-condition scattering solve
// --------------------------------------------------------------------------

// Amplitudes of the outgoing waves for a unit-amplitude incident wave in
// channel `ch`: from the left (right-moving incident, reflected amplitudes in
// `left`'s left-moving layout, transmitted in `right`'s right-moving layout)
// or from the right when from_right is set (mirrored roles). `omega` and
// `kx` must be the values the two mode sets were built at.
struct ScatterSolution {
  std::array<cd, 2> refl, trans;
};

ScatterSolution scatter(const ModeSet& left, const ModeSet& right, cd omega,
                        double kx, int ch, bool from_right);

// --------------------------------------------------------------------------
// Closed forms (for checking the oracle itself against textbook results)
// --------------------------------------------------------------------------

// Fresnel coefficients of an (eps1,mu1) | (eps2,mu2) interface for a wave
// incident from medium 1:
//   r_te = (mu2 kz1 - mu1 kz2) / (mu2 kz1 + mu1 kz2)
//   t_te = 2 mu2 kz1 / (mu2 kz1 + mu1 kz2)
//   r_tm = (eps2 kz1 - eps1 kz2) / (eps2 kz1 + eps1 kz2)
//   t_tm = sqrt(eps1 eps2 mu2 / mu1) * 2 kz1 / (eps2 kz1 + eps1 kz2)
// with kz_i = sqrt(eps_i mu_i omega^2 - kx^2) on the decaying branch.
struct Fresnel {
  cd r_tm, t_tm, r_te, t_te;
};
Fresnel fresnel_closed(cd eps1, double mu1, cd eps2, double mu2, cd omega,
                       double kx);

// Closed forms for the vacuum | node-split-medium interface, per channel
// lambda in {+,-}:
//   R = (kz_l - qz) / (kz_l + qz)
//   T = (2 N_l / omega) / (kz_l + qz)            (into the medium)
//   T_rev = (2 omega / N_l) kz_l qz / (kz_l + qz) (out of the medium)
// with qz the vacuum wavenumber, kz_l the medium channel wavenumber and
// N_l = sqrt((qz^4 + omega^2 qz^2 + kx^2 kz_l^2) / 2).
struct WeylClosed {
  cd r[2], t[2], t_rev[2];
  cd kz[2];  // medium channel wavenumbers
  cd qz;     // vacuum wavenumber
};
WeylClosed weyl_closed(double b, cd omega, double kx);

// Longitudinal wavenumber sqrt(eps*mu*omega^2 - kx^2) on the branch used by
// the mode sets: positive real for propagating waves, positive imaginary for
// evanescent ones.
cd branch_kz(cd eps, double mu, cd omega, double kx);

// --------------------------------------------------------------------------
// Multiple-reflection (etalon) closed form, scalar per channel
// --------------------------------------------------------------------------

// Effective reflection and transmission of [half-space 1 | slab 2 of width d
// | half-space 3] from the three interface coefficient sets and the decaying
// traversal factor exp_factor = e^{-khat_2 d}:
//   r = r12 + t12 t21 r23 E^2 / (1 - r21 r23 E^2)
//   t = t23 E t12 / (1 - r21 r23 E^2)
// (geometric series over internal bounces; all quantities scalars of one
// decoupled polarization channel).
struct EtalonCoeffs {
  cd r, t;
};
EtalonCoeffs etalon(cd r12, cd t12, cd r21, cd t21, cd r23, cd t23,
                    cd exp_factor);

// --------------------------------------------------------------------------
// Scattering coefficients out of a folded transfer matrix
// --------------------------------------------------------------------------

// Inverts the block structure of the transfer matrix of a segment
// (left region i, right region j at reference interfaces z_left / z_right):
//   M11 = P_i(+z_left) T^{-1}          P_j(-z_right)
//   M12 = P_i(+z_left) (-T^{-1} Rrev)  P_j(+z_right)
//   M21 = P_i(-z_left) (R T^{-1})      P_j(-z_right)
//   M22 = P_i(-z_left) (Trev - R T^{-1} Rrev) P_j(+z_right)
// with P(s z) = diag(e^{s khat z}), recovering {R, T, Trev, Rrev}. This is
// the independent route from wave-matching to scattering coefficients; it is
// compared against the production recursion.
caslayer::CoeffPair coeffs_from_transfer(const caslayer::TransferMatrix& m,
                                         const caslayer::WaveNumbers& ki,
                                         const caslayer::WaveNumbers& kj,
                                         double z_left, double z_right,
                                         caslayer::Basis basis);

// --------------------------------------------------------------------------
// Analytic invariants of the ideal-mirror cavity
// --------------------------------------------------------------------------

// Zero-temperature energy per unit area of two perfectly reflecting planes
// at distance a: -pi^2 / (720 a^3).
double ideal_energy_t0(double a);
// Zero-temperature force per unit area: -pi^2 / (240 a^4).
double ideal_force_t0(double a);
// Classical (high-temperature) limits: energy -zeta(3) T / (8 pi a^2) and
// force -zeta(3) T / (4 pi a^3).
double ideal_energy_hot(double a, double temperature);
double ideal_force_hot(double a, double temperature);

// Riemann zeta(3) to double precision.
double zeta3();

// --------------------------------------------------------------------------
// Convenience comparisons
// --------------------------------------------------------------------------

// max_{r,c} |a(r,c) - b(r,c)|.
double mat_dist(const caslayer::CMat& a, const caslayer::CMat& b);

// Relative distance |a - b| / max(|a|, |b|, floor).
double rel_err(double a, double b, double floor = 1e-300);
double rel_err_c(cd a, cd b, double floor = 1e-300);

}  // namespace testsupport
