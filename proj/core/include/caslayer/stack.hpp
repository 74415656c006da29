#pragma once

#include <cstddef>
#include <vector>

#include "caslayer/materials.hpp"

namespace caslayer {

// One region of a planar stack. The two outermost regions are half-spaces
// whose width is ignored; interior regions need a finite width >= 0 (zero is
// legal and means the two neighboring interfaces coincide).
struct Region {
  Material material;
  double width = 0.0;
};

// An ordered multilayer: regions 0 and N+1 are semi-infinite, regions
// 1..N are slabs. Validation (DomainError):
//  * at least two regions;
//  * interior widths finite and >= 0;
//  * perfect conductors only at the ends (an interior one has no
//    propagating interior, so no scattering coefficients exist for it);
//  * every Weyl region's neighbors must be vacuum (no closed-form
//    coefficients exist for other pairings);
//  * material parameters physical.
class LayerStack {
 public:
  explicit LayerStack(std::vector<Region> regions);

  // Total number of regions, N + 2.
  std::size_t num_regions() const noexcept { return regions_.size(); }
  // Number of interfaces, N + 1; interface i sits between regions i and i+1
  // (i in 0..N).
  std::size_t num_interfaces() const noexcept { return regions_.size() - 1; }
  // Number of interior slabs, N.
  std::size_t num_slabs() const noexcept { return regions_.size() - 2; }

  const Material& material(std::size_t region) const;
  double width(std::size_t region) const;  // interior regions only

  // True if any region is a Weyl semimetal (forces the helicity basis for
  // propagation).
  bool has_weyl() const noexcept { return has_weyl_; }
  // True if every region is reciprocal.
  bool reciprocal() const noexcept { return !has_weyl_; }

  // Returns a copy with the width of `region` (interior) replaced.
  LayerStack with_width(std::size_t region, double width) const;

  const std::vector<Region>& regions() const noexcept { return regions_; }

 private:
  std::vector<Region> regions_;
  bool has_weyl_ = false;
};

// A contiguous piece of a stack delimited by two distinct region indices.
// first < second means the segment is traversed left-to-right; swapped
// indices address the same piece from the other side.
struct Segment {
  std::size_t i, j;
};

// Propagation factor of region `region` of the stack: the diagonal matrix
// exp(-khat * width) over the two polarization channels, which is the
// imaginary-axis (always-decaying) form of the layer traversal phase.
CMat propagation_factor(const LayerStack& s, std::size_t region, double xi,
                        double kpar, Basis basis);

// Joins the coefficients of two adjacent segments sharing their middle
// region, whose two traversals contribute the decaying factor `mid`:
// the standard multiple-reflection composition, organised so that only
// 1 - (round trip) is ever inverted and all exponentials decay.
CoeffPair combine_segments(const CoeffPair& left, const CoeffPair& right,
                           const CMat& mid);

// Scattering coefficients of the sub-stack between regions seg.i and seg.j
// (exclusive of their interiors), evaluated at imaginary frequency i*xi and
// transverse wavenumber kpar. For seg.i < seg.j the CoeffPair is oriented
// i -> j; for seg.i > seg.j it is the reversed orientation of the same
// piece. Adjacent indices reduce to interface_coeffs. Stacks containing a
// Weyl interior are evaluated internally in the helicity basis and converted
// at the end. Throws SingularMatrixError (with the offending interface index
// in the message) if a multiple-reflection denominator is singular.
CoeffPair segment_coeffs(const LayerStack& s, Segment seg, double xi,
                         double kpar, Basis basis);

// Which end of the stack a boundary reflection is anchored at.
enum class Boundary { LeftEnd, RightEnd };

// Reflection matrix seen from inside region j looking toward the given end
// of the stack: the LeftEnd flavor is the reflection of everything in
// regions 0..j-1 onto a wave in region j, the RightEnd flavor covers
// regions j+1..N+1. Computed by an O(N) stabilized sweep along the stack
// (never folding growing exponentials), with a per-step fallback that
// avoids inverting non-invertible interface transmissions (for example a
// perfectly conducting end at zero frequency). Agrees with the
// corresponding segment_coeffs reflection to ~1e-10.
CMat boundary_reflection(const LayerStack& s, std::size_t j, double xi,
                         double kpar, Basis basis,
                         Boundary end = Boundary::LeftEnd);

// 2x2-block transfer matrix of interface `iface` (between regions iface and
// iface+1) at its actual stacking position: maps the (rightward, leftward)
// amplitude pair of region iface+1 to that of region iface. Products of
// adjacent-interface matrices automatically accumulate the interior
// propagation factors, so the full-segment matrix is the plain product. The
// imaginary-axis phase references grow with position, so large stacks at
// large xi can overflow (OverflowError); intended for identity checks, not
// the production recursion.
struct TransferMatrix {
  CMat m11, m12, m21, m22;
  TransferMatrix() : m11(2), m12(2), m21(2), m22(2) {}
};

TransferMatrix transfer_matrix(const LayerStack& s, std::size_t iface,
                               double xi, double kpar, Basis basis,
                               bool reversed = false);

TransferMatrix transfer_mul(const TransferMatrix& a, const TransferMatrix& b);

// Stacking coordinate of interface `iface` (interface 0 sits at z = 0).
double interface_position(const LayerStack& s, std::size_t iface);

}  // namespace caslayer
