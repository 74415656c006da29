#include "caslayer/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace caslayer {

namespace {

// Compensated (Neumaier) accumulator: the result is independent of term
// grouping at double precision, which keeps thermal sums reproducible.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + comp; }
};

void validate_specs(const ThermalSpec& thermal, const QuadratureSpec& quad) {
  if (!(thermal.temperature >= 0.0) || !std::isfinite(thermal.temperature)) {
    throw DomainError("thermal: temperature must be finite and >= 0");
  }
  if (!(quad.rel_tol > 0.0) || !(quad.rel_tol < 1.0)) {
    throw DomainError("quadrature: rel_tol must be in (0, 1)");
  }
  if (quad.max_evals == 0) {
    throw DomainError("quadrature: max_evals must be positive");
  }
}

ObservableResult snapshot(const Kahan& acc, double err, std::size_t evals,
                          std::size_t terms) {
  ObservableResult r;
  r.value = acc.total();
  r.error_estimate = err;
  r.evaluations = evals;
  r.terms = terms;
  return r;
}

}  // namespace

ObservableResult matsubara_sum(const std::function<SpectralTerm(double)>& term,
                               const ThermalSpec& thermal,
                               const QuadratureSpec& quad,
                               double decay_scale) {
  validate_specs(thermal, quad);
  if (!(decay_scale > 0.0) || !std::isfinite(decay_scale)) {
    throw DomainError("matsubara_sum: decay scale must be positive");
  }
  const double T = thermal.temperature;
  detail::EvalBudget budget(quad.max_evals);

  if (T == 0.0) {
    // (1/2pi) Integral term(xi) dxi on the substituted axis v = 2*scale*xi.
    const double umax = detail::u_cut(quad.rel_tol);
    Kahan inner_err;
    std::size_t nodes = 0;
    const auto g = [&](double v) {
      const SpectralTerm t = term(v / (2.0 * decay_scale));
      budget.charge(t.evals);
      inner_err.add(t.error);
      ++nodes;
      return t.value;
    };
    try {
      // The outer integrator's own calls are charged through g (the inner
      // integral does the spectral-point work), so give the panel driver a
      // free budget and rely on the shared one.
      detail::EvalBudget outer_budget(quad.max_evals);
      const detail::PanelResult p =
          detail::integrate_panel(g, 0.0, umax, quad.rel_tol * 0.25,
                                  outer_budget);
      const double tailprobe = std::abs(g(0.98 * umax));
      const double norm = 4.0 * std::numbers::pi * decay_scale;
      Kahan acc;
      acc.add(p.value / norm);
      const double err =
          (p.error + 2.0 * tailprobe) / norm +
          quad.rel_tol * 0.25 * std::abs(p.value) / norm;
      return snapshot(acc, err, budget.used(), nodes);
    } catch (const detail::BudgetExhausted&) {
      ObservableResult partial;
      partial.evaluations = budget.used();
      partial.terms = nodes;
      throw ConvergenceError(
          "matsubara_sum: evaluation budget exhausted during the "
          "zero-temperature frequency integral",
          partial);
    }
  }

  // T > 0: discrete thermal frequencies xi_l = 2 pi T l, the l = 0 term at
  // half weight.
  Kahan acc;
  Kahan err_acc;
  std::size_t terms = 0;
  std::size_t consecutive_small = 0;
  double last_mag = 0.0;
  try {
    {
      const SpectralTerm t0 = term(0.0);
      budget.charge(t0.evals);
      acc.add(0.5 * T * t0.value);
      err_acc.add(0.5 * T * t0.error);
      ++terms;
    }
    for (std::size_t l = 1;; ++l) {
      const double xi = 2.0 * std::numbers::pi * T * static_cast<double>(l);
      const SpectralTerm t = term(xi);
      budget.charge(t.evals);
      const double contrib = T * t.value;
      acc.add(contrib);
      err_acc.add(T * t.error);
      ++terms;
      last_mag = std::abs(contrib);
      if (last_mag <= quad.rel_tol * std::abs(acc.total())) {
        if (++consecutive_small >= 3) break;
      } else {
        consecutive_small = 0;
      }
    }
  } catch (const detail::BudgetExhausted&) {
    throw ConvergenceError(
        "matsubara_sum: evaluation budget exhausted after " +
            std::to_string(terms) + " thermal terms",
        snapshot(acc, err_acc.total() + 3.0 * last_mag, budget.used(),
                 terms));
  }
  return snapshot(acc, err_acc.total() + 3.0 * last_mag, budget.used(),
                  terms);
}

namespace {

double min_interior_width(const LayerStack& s, const char* who) {
  if (s.num_slabs() == 0) {
    throw DomainError(std::string(who) + ": stack has no interior region");
  }
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m + 1 < s.num_regions(); ++m) {
    w = std::min(w, s.width(m));
  }
  if (!(w > 0.0)) {
    throw DomainError(std::string(who) +
                      ": every interior width must be positive (zero-width "
                      "gaps carry divergent contact terms)");
  }
  return w;
}

}  // namespace

ObservableResult casimir_energy(const LayerStack& s,
                                const ThermalSpec& thermal,
                                const QuadratureSpec& quad, Basis basis) {
  const std::size_t last = s.num_regions() - 1;
  if (!is_perfect_conductor(s.material(0)) ||
      !is_perfect_conductor(s.material(last))) {
    throw DomainError(
        "casimir_energy: both end regions must be perfect conductors; wrap "
        "open stacks with emulate_open_boundaries first");
  }
  const double scale = min_interior_width(s, "casimir_energy");
  const auto term = [&](double xi) {
    detail::EvalBudget term_budget(quad.max_evals);
    return detail::kpar_integral(
        [&](double kpar) {
          return std::log(tilde_char_fn(s, 1, xi, kpar, basis));
        },
        scale, quad.rel_tol, term_budget);
  };
  return matsubara_sum(term, thermal, quad, scale);
}

ObservableResult cavity_work(const LayerStack& s, CavityTriple c,
                             const ThermalSpec& thermal,
                             const QuadratureSpec& quad, Basis basis) {
  if (c.k == 0 || c.k + 1 >= s.num_regions()) {
    throw DomainError("cavity_work: gap must be an interior region");
  }
  const double scale = s.width(c.k);
  if (!(scale > 0.0)) {
    throw DomainError("cavity_work: the cavity gap needs positive width");
  }
  const auto term = [&](double xi) {
    detail::EvalBudget term_budget(quad.max_evals);
    return detail::kpar_integral(
        [&](double kpar) { return std::log(char_fn(s, c, xi, kpar, basis)); },
        scale, quad.rel_tol, term_budget);
  };
  return matsubara_sum(term, thermal, quad, scale);
}

LayerStack emulate_open_boundaries(const LayerStack& s, double pad_scale) {
  if (!(pad_scale >= 100.0) || !std::isfinite(pad_scale)) {
    throw DomainError(
        "emulate_open_boundaries: pad_scale must be finite and >= 100");
  }
  double ref = 0.0;
  for (std::size_t m = 1; m + 1 < s.num_regions(); ++m) {
    ref = std::max(ref, s.width(m));
  }
  if (ref == 0.0) ref = 1.0;
  const double pad = pad_scale * ref;

  std::vector<Region> out;
  const auto& regions = s.regions();
  const std::size_t last = regions.size() - 1;

  const auto push_end = [&](const Region& end, bool front) {
    std::vector<Region> wrap;
    if (is_perfect_conductor(end.material)) {
      wrap.push_back(end);
    } else if (std::holds_alternative<Vacuum>(end.material)) {
      wrap.push_back({PerfectConductor{}, 0.0});
      wrap.push_back({Vacuum{}, pad});
    } else {
      wrap.push_back({PerfectConductor{}, 0.0});
      wrap.push_back({Vacuum{}, pad});
      wrap.push_back({end.material, pad});
    }
    if (!front) std::reverse(wrap.begin(), wrap.end());
    for (const Region& r : wrap) out.push_back(r);
  };

  push_end(regions[0], true);
  for (std::size_t m = 1; m < last; ++m) out.push_back(regions[m]);
  push_end(regions[last], false);
  return LayerStack(std::move(out));
}

}  // namespace caslayer
