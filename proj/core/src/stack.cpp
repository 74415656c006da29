#include "caslayer/stack.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace caslayer {

namespace {

bool is_vacuum(const Material& m) { return std::holds_alternative<Vacuum>(m); }

}  // namespace

LayerStack::LayerStack(std::vector<Region> regions)
    : regions_(std::move(regions)) {
  if (regions_.size() < 2) {
    throw DomainError("stack: need at least two regions (the half-spaces)");
  }
  const std::size_t n = regions_.size();
  for (std::size_t i = 0; i < n; ++i) {
    validate_material(regions_[i].material);
    const bool interior = (i > 0 && i + 1 < n);
    if (interior) {
      const double w = regions_[i].width;
      if (!(std::isfinite(w) && w >= 0.0)) {
        throw DomainError("stack: width of region " + std::to_string(i) +
                          " must be finite and >= 0");
      }
      if (is_perfect_conductor(regions_[i].material)) {
        throw DomainError(
            "stack: perfect conductors are only allowed as the end "
            "half-spaces (region " +
            std::to_string(i) + " is interior)");
      }
    }
    if (is_weyl(regions_[i].material)) {
      has_weyl_ = true;
      if (i > 0 && !is_vacuum(regions_[i - 1].material) &&
          !material_equal(regions_[i - 1].material, regions_[i].material)) {
        throw DomainError("stack: region " + std::to_string(i) +
                          " (Weyl) must neighbor vacuum");
      }
      if (i + 1 < n && !is_vacuum(regions_[i + 1].material) &&
          !material_equal(regions_[i + 1].material, regions_[i].material)) {
        throw DomainError("stack: region " + std::to_string(i) +
                          " (Weyl) must neighbor vacuum");
      }
    }
  }
  if (is_perfect_conductor(regions_[0].material) && regions_.size() == 2 &&
      is_perfect_conductor(regions_[1].material)) {
    throw DomainError(
        "stack: two adjacent perfect conductors leave no medium in between");
  }
}

const Material& LayerStack::material(std::size_t region) const {
  if (region >= regions_.size()) {
    throw DomainError("stack: region index " + std::to_string(region) +
                      " out of range");
  }
  return regions_[region].material;
}

double LayerStack::width(std::size_t region) const {
  if (region == 0 || region + 1 >= regions_.size()) {
    throw DomainError("stack: half-space region " + std::to_string(region) +
                      " has no width");
  }
  return regions_[region].width;
}

LayerStack LayerStack::with_width(std::size_t region, double width) const {
  if (region == 0 || region + 1 >= regions_.size()) {
    throw DomainError("stack: cannot set the width of a half-space");
  }
  std::vector<Region> r = regions_;
  r[region].width = width;
  return LayerStack(std::move(r));
}

double interface_position(const LayerStack& s, std::size_t iface) {
  if (iface >= s.num_interfaces()) {
    throw DomainError("stack: interface index out of range");
  }
  double z = 0.0;
  for (std::size_t m = 1; m <= iface; ++m) z += s.width(m);
  return z;
}

CMat propagation_factor(const LayerStack& s, std::size_t region, double xi,
                        double kpar, Basis basis) {
  const double w = s.width(region);  // validates interiority
  const WaveNumbers k = wavenumbers(s.material(region), xi, kpar, basis);
  const std::array<cplx, 2> v{-k.k1 * w, -k.k2 * w};
  return diag_exp(std::span<const cplx>(v));
}

CoeffPair combine_segments(const CoeffPair& left, const CoeffPair& right,
                           const CMat& mid) {
  if (left.basis != right.basis) {
    throw DomainError("combine_segments: operands in different bases");
  }
  const CMat& E = mid;
  const CMat I = CMat::identity(E.dim());
  // Round trips of the shared middle layer as seen from its two edges.
  const CMat bounce_l = left.r_rev * E * right.r * E;   // rightward, left edge
  const CMat bounce_r = right.r * E * left.r_rev * E;   // leftward, right edge
  const CMat gl = mat_inv(I - bounce_l);
  const CMat gr = mat_inv(I - bounce_r);
  CoeffPair out;
  out.basis = left.basis;
  out.t = right.t * E * gl * left.t;
  out.r = left.r + left.t_rev * E * right.r * E * gl * left.t;
  out.t_rev = left.t_rev * E * gr * right.t_rev;
  out.r_rev = right.r_rev + right.t * E * left.r_rev * E * gr * right.t_rev;
  return out;
}

CoeffPair segment_coeffs(const LayerStack& s, Segment seg, double xi,
                         double kpar, Basis basis) {
  const std::size_t n = s.num_regions();
  if (seg.i >= n || seg.j >= n) {
    throw DomainError("segment_coeffs: region index out of range");
  }
  if (seg.i == seg.j) {
    throw DomainError("segment_coeffs: segment endpoints must differ");
  }
  if (seg.i > seg.j) {
    return segment_coeffs(s, Segment{seg.j, seg.i}, xi, kpar, basis)
        .reversed();
  }
  // A Weyl layer's propagation factor is diagonal only in the helicity
  // basis, so fold there whenever one participates.
  const Basis work = s.has_weyl() ? Basis::Helicity : basis;
  CoeffPair acc =
      interface_coeffs(s.material(seg.i), s.material(seg.i + 1), xi, kpar,
                       work);
  for (std::size_t k = seg.i + 1; k < seg.j; ++k) {
    const CMat mid = propagation_factor(s, k, xi, kpar, work);
    const CoeffPair iface =
        interface_coeffs(s.material(k), s.material(k + 1), xi, kpar, work);
    try {
      acc = combine_segments(acc, iface, mid);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError(
          "segment_coeffs: singular multiple-reflection denominator while "
          "folding across region " +
              std::to_string(k) + ": " + e.what(),
          e.condition_estimate());
    }
  }
  return change_basis(acc, basis);
}

CMat boundary_reflection(const LayerStack& s, std::size_t j, double xi,
                         double kpar, Basis basis, Boundary end) {
  const std::size_t nreg = s.num_regions();
  const std::size_t nslab = s.num_slabs();
  const Basis work = s.has_weyl() ? Basis::Helicity : basis;
  CMat refl(2);
  if (end == Boundary::LeftEnd) {
    if (j < 1 || j >= nreg) {
      throw DomainError(
          "boundary_reflection: left-end reflection needs 1 <= j <= N+1");
    }
    // Sweep rightward, tracking only the reflection seen from region m.
    refl = interface_coeffs(s.material(0), s.material(1), xi, kpar, work)
               .r_rev;
    for (std::size_t m = 2; m <= j; ++m) {
      const CMat E = propagation_factor(s, m - 1, xi, kpar, work);
      const CoeffPair f =
          interface_coeffs(s.material(m - 1), s.material(m), xi, kpar, work);
      const CMat ebe = E * refl * E;
      const CMat g = mat_inv(CMat::identity(2) - f.r * ebe);
      refl = f.r_rev + f.t * ebe * g * f.t_rev;
    }
  } else {
    if (j > nslab) {
      throw DomainError(
          "boundary_reflection: right-end reflection needs 0 <= j <= N");
    }
    const std::size_t last = nreg - 1;
    refl = interface_coeffs(s.material(last - 1), s.material(last), xi, kpar,
                            work)
               .r;
    // Sweep leftward from m = N-1 down to m = j.
    for (std::size_t count = nslab - j; count > 0; --count) {
      const std::size_t m = j + count - 1;
      const CMat E = propagation_factor(s, m + 1, xi, kpar, work);
      const CoeffPair f =
          interface_coeffs(s.material(m), s.material(m + 1), xi, kpar, work);
      const CMat ebe = E * refl * E;
      const CMat g = mat_inv(CMat::identity(2) - f.r_rev * ebe);
      refl = f.r + f.t_rev * ebe * g * f.t;
    }
  }
  if (work == basis) return refl;
  // Re-express in the requested basis. A reflection converts like the r /
  // r_rev block depending on which way it maps; boundary reflections from
  // the left end map leftward -> rightward movers (the r_rev slot), from
  // the right end rightward -> leftward (the r slot).
  CoeffPair tmp;
  tmp.basis = work;
  tmp.r = refl;
  tmp.r_rev = refl;
  tmp.t = CMat::identity(2);
  tmp.t_rev = CMat::identity(2);
  const CoeffPair conv = change_basis(tmp, basis);
  return end == Boundary::LeftEnd ? conv.r_rev : conv.r;
}

TransferMatrix transfer_mul(const TransferMatrix& a, const TransferMatrix& b) {
  TransferMatrix r;
  r.m11 = a.m11 * b.m11 + a.m12 * b.m21;
  r.m12 = a.m11 * b.m12 + a.m12 * b.m22;
  r.m21 = a.m21 * b.m11 + a.m22 * b.m21;
  r.m22 = a.m21 * b.m12 + a.m22 * b.m22;
  return r;
}

TransferMatrix transfer_matrix(const LayerStack& s, std::size_t iface,
                               double xi, double kpar, Basis basis,
                               bool reversed) {
  if (iface >= s.num_interfaces()) {
    throw DomainError("transfer_matrix: interface index out of range");
  }
  const Material& ml = s.material(iface);
  const Material& mr = s.material(iface + 1);
  if (is_perfect_conductor(ml) || is_perfect_conductor(mr)) {
    throw DomainError(
        "transfer_matrix: undefined at a perfect-conductor interface (zero "
        "transmission cannot be inverted)");
  }
  const CoeffPair f = interface_coeffs(ml, mr, xi, kpar, basis);
  const double z = interface_position(s, iface);
  const WaveNumbers kl = wavenumbers(ml, xi, kpar, basis);
  const WaveNumbers kr = wavenumbers(mr, xi, kpar, basis);
  const auto phase = [&](const WaveNumbers& k, double sign) {
    const std::array<cplx, 2> v{sign * k.k1 * z, sign * k.k2 * z};
    return diag_exp(std::span<const cplx>(v));
  };
  TransferMatrix m;
  if (!reversed) {
    // Exact inversion of the scattering relation: region iface+1 amplitudes
    // to region iface amplitudes, re-referenced to the stack origin.
    const CMat tinv = mat_inv(f.t);
    const CMat p = tinv;
    const CMat q = -(tinv * f.r_rev);
    const CMat u = f.r * tinv;
    const CMat v = f.t_rev - f.r * tinv * f.r_rev;
    m.m11 = phase(kl, 1.0) * p * phase(kr, -1.0);
    m.m12 = phase(kl, 1.0) * q * phase(kr, 1.0);
    m.m21 = phase(kl, -1.0) * u * phase(kr, -1.0);
    m.m22 = phase(kl, -1.0) * v * phase(kr, 1.0);
  } else {
    const CMat tinv = mat_inv(f.t_rev);
    const CMat p = f.t - f.r_rev * tinv * f.r;
    const CMat q = f.r_rev * tinv;
    const CMat u = -(tinv * f.r);
    const CMat v = tinv;
    m.m11 = phase(kr, 1.0) * p * phase(kl, -1.0);
    m.m12 = phase(kr, 1.0) * q * phase(kl, 1.0);
    m.m21 = phase(kr, -1.0) * u * phase(kl, -1.0);
    m.m22 = phase(kr, -1.0) * v * phase(kl, 1.0);
  }
  return m;
}

}  // namespace caslayer
