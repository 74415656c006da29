#pragma once

#include <variant>

#include "caslayer/matrix.hpp"

namespace caslayer {

// ---------------------------------------------------------------------------
// Dispersion models, evaluated on the imaginary frequency axis: eps(i*xi)
// with xi >= 0. Natural units (hbar = c = kB = 1) throughout the library:
// frequencies and wavevectors share one inverse-length unit.
// ---------------------------------------------------------------------------

struct ConstantEps {
  double eps;  // must be >= 1
};

// eps(i xi) = 1 + omega_p^2 / xi^2
struct PlasmaEps {
  double omega_p;  // > 0
};

// eps(i xi) = 1 + omega_p^2 / (xi * (xi + gamma))
struct DrudeEps {
  double omega_p;  // > 0
  double gamma;    // > 0
};

using EpsModel = std::variant<ConstantEps, PlasmaEps, DrudeEps>;

// eps(i xi); diverges at xi = 0 for Plasma/Drude (returns +inf there).
double eps_model_value(const EpsModel& m, double xi);

// eps(i xi) * xi^2, analytically simplified so the xi -> 0 limit is finite:
// Constant: eps*xi^2; Plasma: xi^2 + omega_p^2; Drude: xi^2 + omega_p^2
// xi/(xi+gamma). This is the quantity that enters the wavenumber.
double eps_model_xi2(const EpsModel& m, double xi);

// ---------------------------------------------------------------------------
// Materials
// ---------------------------------------------------------------------------

struct Vacuum {};

struct PerfectConductor {};

struct Dielectric {
  EpsModel eps;
};

// Weyl semimetal with the node-splitting vector (magnitude b) along the
// stacking axis. Its eigenmodes are circularly polarized with distinct
// longitudinal wavenumbers, so stacks containing it run in the helicity
// basis and generally break reciprocity.
struct WeylSemimetal {
  double b;  // node splitting; b = 0 reduces the medium to vacuum
};

using Material =
    std::variant<Vacuum, PerfectConductor, Dielectric, WeylSemimetal>;

bool is_perfect_conductor(const Material& m);
bool is_weyl(const Material& m);
// True when the material's reflection/transmission is reciprocal (everything
// except the Weyl semimetal).
bool is_reciprocal(const Material& m);

// Throws DomainError for unphysical parameters (eps < 1, negative plasma
// frequency or damping, non-finite values).
void validate_material(const Material& m);

// Exact comparison of material kind and parameters.
bool material_equal(const Material& a, const Material& b);

// ---------------------------------------------------------------------------
// Polarization bases
// ---------------------------------------------------------------------------

// TMTE: channel 0 = TM (p), channel 1 = TE (s).
// Helicity: channel 0 = positive helicity, channel 1 = negative helicity;
// inside a Weyl medium these are its eigenmodes with distinct wavenumbers.
enum class Basis { TMTE, Helicity };

const char* basis_name(Basis b);

// Channel-exchange matrix of the basis: identity for TMTE, the swap matrix
// for Helicity (a left-moving wave of one helicity pairs with the opposite
// helicity of the right-moving wave).
CMat parity_matrix(Basis b);

// ---------------------------------------------------------------------------
// Longitudinal wavenumbers on the imaginary axis
// ---------------------------------------------------------------------------

// Decay constants (principal branch, Re >= 0) of the two polarization
// channels at imaginary frequency i*xi and transverse wavenumber kpar.
// For reciprocal media both channels coincide and are real; for the Weyl
// semimetal the two helicity channels are complex conjugates of each other.
struct WaveNumbers {
  cplx k1, k2;
};

// Throws DomainError for a PerfectConductor (no interior propagation) and at
// the origin xi = kpar = 0 (the wavenumber vanishes there and no scattering
// coefficient is defined).
WaveNumbers wavenumbers(const Material& m, double xi, double kpar,
                        Basis basis);

// ---------------------------------------------------------------------------
// Interface scattering coefficients
// ---------------------------------------------------------------------------

// Two-sided coefficient set of a planar interface with a "left" and a
// "right" medium (left sits at smaller stacking coordinate):
//   r      reflection of a wave arriving from the left medium,
//   t      its transmission into the right medium,
//   r_rev  reflection of a wave arriving from the right medium,
//   t_rev  its transmission into the left medium.
// All four are square matrices acting on the two polarization channels of
// `basis`.
struct CoeffPair {
  CMat r, t, t_rev, r_rev;
  Basis basis;

  CoeffPair()
      : r(2), t(2), t_rev(2), r_rev(2), basis(Basis::TMTE) {}
  CoeffPair(CMat r_, CMat t_, CMat t_rev_, CMat r_rev_, Basis basis_)
      : r(std::move(r_)),
        t(std::move(t_)),
        t_rev(std::move(t_rev_)),
        r_rev(std::move(r_rev_)),
        basis(basis_) {}

  // The coefficient set of the same interface looked at from the other side.
  CoeffPair reversed() const { return CoeffPair(r_rev, t_rev, t, r, basis); }
};

// Coefficients of the interface between two half-spaces, evaluated at
// imaginary frequency i*xi (xi >= 0) and transverse wavenumber kpar.
//
// Preconditions (DomainError):
//  * at most one side may be a PerfectConductor;
//  * a WeylSemimetal only has closed-form coefficients against Vacuum, any
//    other pairing is rejected;
//  * (xi, kpar) != (0, 0).
//
// Identical materials yield r = 0, t = identity. A PerfectConductor side
// reflects with +1 (TM) / -1 (TE) as seen from the material side — the
// identity matrix in the helicity basis — and transmits nothing; its
// formal "from inside the conductor" entries are the negated reflection,
// matching the eps -> infinity limit of a dielectric.
CoeffPair interface_coeffs(const Material& left, const Material& right,
                           double xi, double kpar, Basis basis);

// Change the polarization basis of a coefficient set. Round-tripping is an
// exact involution up to floating-point rounding.
CoeffPair change_basis(const CoeffPair& c, Basis target);

// Basis a stack of these materials must be evaluated in: Helicity whenever a
// Weyl semimetal participates (its propagation factors are diagonal only
// there), else whatever the caller asked for.
bool requires_helicity(const Material& m);

}  // namespace caslayer
