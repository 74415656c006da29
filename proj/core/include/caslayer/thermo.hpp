#pragma once

#include <cstddef>
#include <functional>

#include "caslayer/spectral.hpp"

namespace caslayer {

// Temperature in natural units (same inverse-length unit as frequencies;
// multiply by hbar*c = 197.3269804 eV nm to translate lengths in nm to
// energies in eV). T = 0 selects the continuum frequency integral.
struct ThermalSpec {
  double temperature = 0.0;
};

// Accuracy controls for one observable evaluation.
struct QuadratureSpec {
  // Target relative accuracy of the final value. The panel integrator runs
  // at a quarter of this, the thermal-sum truncation at what remains, and
  // the discarded integration tails are held near one percent of it.
  double rel_tol = 1e-9;
  // Hard cap on integrand (spectral point) evaluations across the whole
  // observable; exceeding it raises ConvergenceError with the partial value.
  std::size_t max_evals = 200'000'000;
};

struct ObservableResult {
  double value = 0.0;
  // Estimated absolute error: quadrature panel estimates, discarded tails
  // and thermal-sum truncation combined. On success this is at or below
  // rel_tol * |value| (plus an absolute floor for values near zero).
  double error_estimate = 0.0;
  std::size_t evaluations = 0;  // spectral-point evaluations
  std::size_t terms = 0;        // thermal terms (T>0) or outer nodes (T=0)
};

// The evaluation budget ran out or the accuracy target was missed; carries
// whatever had accumulated so far.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, ObservableResult partial)
      : Error(what), partial_(partial) {}
  const ObservableResult& partial() const noexcept { return partial_; }

 private:
  ObservableResult partial_;
};

// One thermal term: the transverse-momentum-integrated spectral density at a
// single imaginary frequency, with its own error estimate and cost.
struct SpectralTerm {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
};

// Thermal spectral sum of `term`:
//   T > 0:  T * [ term(0)/2 + sum_{l>=1} term(2 pi T l) ]
//   T = 0:  (1/2pi) * Integral_0^inf term(xi) dxi
// The T > 0 sum truncates once three consecutive terms fall below the
// tolerance relative to the accumulated value; accumulation is compensated
// (Neumaier) so it is independent of grouping. `decay_scale` is the slowest
// decay length of term(xi) in xi (the smallest participating gap width); it
// sets the integration cut at T = 0. The two branches join continuously:
// values at T ~ 1e-4/scale sit within about a percent of the T = 0 value.
ObservableResult matsubara_sum(const std::function<SpectralTerm(double)>& term,
                               const ThermalSpec& thermal,
                               const QuadratureSpec& quad, double decay_scale);

// Renormalized free energy per unit area of the whole stack: the thermal
// spectral sum over the transverse-momentum integral of the logarithm of the
// pole-subtracted characteristic function. Negative values mean the stack's
// walls attract. Preconditions (DomainError): both end regions perfect
// conductors (use emulate_open_boundaries to cap an open stack), at least
// one interior region, all interior widths > 0 (a zero-width gap carries a
// divergent contact contribution).
ObservableResult casimir_energy(const LayerStack& s, const ThermalSpec& thermal,
                                const QuadratureSpec& quad,
                                Basis basis = Basis::TMTE);

// Work of formation of one cavity: the same spectral sum over
// ln f(l|k|j) alone. Defined for any stack (no conductor-end precondition);
// requires width(k) > 0.
ObservableResult cavity_work(const LayerStack& s, CavityTriple c,
                             const ThermalSpec& thermal,
                             const QuadratureSpec& quad,
                             Basis basis = Basis::TMTE);

// Replaces open (non-conductor) ends by the same medium as a very thick slab
// backed by a wide vacuum gap and a perfect conductor. The added interfaces
// sit so far away (pad_scale times the largest interior width) that every
// exponential reaching them underflows; gap observables of the padded stack
// match the open stack far below solver tolerances. Ends already made of
// perfect conductor are kept unchanged.
LayerStack emulate_open_boundaries(const LayerStack& s,
                                   double pad_scale = 2.0e4);

}  // namespace caslayer
