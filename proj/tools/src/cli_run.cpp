#include "cli_run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "caslayer/errors.hpp"
#include "caslayer/force.hpp"
#include "caslayer/spectral.hpp"
#include "caslayer/version.hpp"

namespace caslayer::cli {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------------------
// Observable evaluation for one (possibly sweep-patched) config.

ResultRow compute_row(const RunConfig& c, const std::string& label) {
  ResultRow row;
  row.label = label;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ObservableResult r;
    const Basis basis = c.working_basis();
    switch (c.observable) {
      case Observable::Energy: {
        const LayerStack s =
            c.padding ? emulate_open_boundaries(c.stack, c.padding->scale)
                      : c.stack;
        r = casimir_energy(s, c.thermal, c.quadrature, basis);
        break;
      }
      case Observable::Force: {
        if (c.target.body) {
          r = force_on_body(c.stack, *c.target.body, c.thermal, c.quadrature,
                            basis);
        } else {
          r = force_general(
              {c.stack, *c.target.gap, c.thermal, c.quadrature, basis});
        }
        break;
      }
      case Observable::Work:
        r = cavity_work(c.stack, *c.target.triple, c.thermal, c.quadrature,
                        basis);
        break;
      case Observable::IdentityCheck:
        throw Error("identity-check rows are produced elsewhere");
    }
    row.value = r.value;
    row.error_estimate = r.error_estimate;
    row.terms = r.terms;
    row.evaluations = r.evaluations;
  } catch (const ConvergenceError& e) {
    const ObservableResult& p = e.partial();
    row.value = p.value;
    row.error_estimate = p.error_estimate;
    row.terms = p.terms;
    row.evaluations = p.evaluations;
    row.status = "partial";
    row.message = e.what();
  } catch (const std::exception& e) {
    row.has_value = false;
    row.status = "failed";
    row.message = e.what();
  }
  row.wall_ms = elapsed_ms(t0);
  return row;
}

// ---------------------------------------------------------------------------
// Identity-check observable: residual suite over random spectral points.

struct IdentityOutcome {
  double residual = 0.0;
  std::size_t points = 0;
  bool applicable = true;
  std::string why_not;
};

double characteristic_length(const LayerStack& s) {
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m + 1 < s.num_regions(); ++m) {
    if (s.width(m) > 0.0) w = std::min(w, s.width(m));
  }
  return std::isfinite(w) ? w : 1.0;
}

// Log-uniform spectral point away from the origin, scaled to the stack.
struct PointSampler {
  std::mt19937_64 rng;
  double scale;
  std::uniform_real_distribution<double> u{0.0, 1.0};
  explicit PointSampler(std::uint64_t seed, double s) : rng(seed), scale(s) {}
  double draw() {
    const double lo = std::log(0.01), hi = std::log(20.0);
    return std::exp(lo + (hi - lo) * u(rng)) / scale;
  }
};

IdentityOutcome check_contractibility(const RunConfig& c) {
  IdentityOutcome out;
  PointSampler sample(c.identity.seed, characteristic_length(c.stack));
  const Basis wb = c.working_basis();
  const CMat eye = CMat::identity(2);
  for (std::size_t n = 0; n < c.identity.samples; ++n) {
    const double xi = sample.draw(), kpar = sample.draw();
    for (std::size_t i = 0; i < c.stack.num_interfaces(); ++i) {
      const CoeffPair p = interface_coeffs(c.stack.material(i),
                                           c.stack.material(i + 1), xi, kpar,
                                           wb);
      out.residual = std::max(
          {out.residual, norm_inf(p.t * p.t_rev + p.r_rev * p.r_rev - eye),
           norm_inf(p.t * p.r + p.r_rev * p.t),
           norm_inf(p.t_rev * p.t + p.r * p.r - eye),
           norm_inf(p.t_rev * p.r_rev + p.r * p.t_rev)});
      ++out.points;
    }
  }
  return out;
}

IdentityOutcome check_swap(const RunConfig& c) {
  IdentityOutcome out;
  const std::size_t n_regions = c.stack.num_regions();
  if (n_regions < 4) {
    out.applicable = false;
    out.why_not = "needs at least four regions";
    return out;
  }
  PointSampler sample(c.identity.seed + 1, characteristic_length(c.stack));
  std::uniform_int_distribution<std::size_t> pick(0, n_regions - 1);
  const Basis wb = c.working_basis();
  for (std::size_t n = 0; n < c.identity.samples; ++n) {
    const double xi = sample.draw(), kpar = sample.draw();
    // Four sorted distinct boundary indices i < l < k < j.
    std::size_t idx[4];
    do {
      for (auto& v : idx) v = pick(sample.rng);
      std::sort(std::begin(idx), std::end(idx));
    } while (idx[0] == idx[1] || idx[1] == idx[2] || idx[2] == idx[3]);
    const double r = verify_swap_identity(
        c.stack, {idx[0], idx[1], idx[2], idx[3]}, xi, kpar, wb);
    out.residual = std::max(out.residual, r);
    ++out.points;
  }
  return out;
}

IdentityOutcome check_split_independence(const RunConfig& c) {
  IdentityOutcome out;
  PointSampler sample(c.identity.seed + 2, characteristic_length(c.stack));
  const Basis wb = c.working_basis();
  const std::size_t nslab = c.stack.num_slabs();
  for (std::size_t n = 0; n < c.identity.samples; ++n) {
    const double xi = sample.draw(), kpar = sample.draw();
    const double ref = tilde_char_fn(c.stack, 1, xi, kpar, wb);
    for (std::size_t split = 2; split <= nslab; ++split) {
      const double v = tilde_char_fn(c.stack, split, xi, kpar, wb);
      out.residual =
          std::max(out.residual, std::abs(v - ref) / std::max(1.0, ref));
      ++out.points;
    }
    if (nslab == 1) ++out.points;  // single split: identity trivially exact
  }
  return out;
}

IdentityOutcome check_uv_factorization(const RunConfig& c) {
  IdentityOutcome out;
  if (c.stack.has_weyl() || !c.stack.reciprocal()) {
    out.applicable = false;
    out.why_not = "needs a reciprocal stack";
    return out;
  }
  const std::size_t last = c.stack.num_regions() - 1;
  if (!is_perfect_conductor(c.stack.material(0)) ||
      !is_perfect_conductor(c.stack.material(last))) {
    out.applicable = false;
    out.why_not = "needs perfect-conductor end regions";
    return out;
  }
  for (std::size_t m = 1; m + 1 < c.stack.num_regions(); ++m) {
    // e^{+2 khat w} must stay finite: keep the sampled frequencies low
    // enough for the widest slab.
    if (!(c.stack.width(m) > 0.0)) {
      out.applicable = false;
      out.why_not = "needs positive slab widths";
      return out;
    }
  }
  double wmax = 0.0;
  for (std::size_t m = 1; m + 1 < c.stack.num_regions(); ++m) {
    wmax = std::max(wmax, c.stack.width(m));
  }
  PointSampler sample(c.identity.seed + 3, 1.0);
  for (std::size_t n = 0; n < c.identity.samples; ++n) {
    // Cap the growth exponent ~ 2(k1+k2)w <~ 600 per region to stay well
    // inside double range.
    const double cap = 60.0 / wmax;
    const double xi = sample.draw() / 20.0 * cap;
    const double kpar = sample.draw() / 20.0 * cap;
    const double r = verify_uv_factorization(c.stack, xi, kpar);
    out.residual = std::max(out.residual, r);
    ++out.points;
  }
  return out;
}

RunOutcome run_identity_suite(const RunConfig& c) {
  struct Entry {
    const char* name;
    double threshold;
    IdentityOutcome (*fn)(const RunConfig&);
  };
  const Entry entries[] = {
      {"contractibility", 1.0e-12, &check_contractibility},
      {"swap", 1.0e-10, &check_swap},
      {"split-independence", 1.0e-10, &check_split_independence},
      {"uv-factorization", 1.0e-9, &check_uv_factorization},
  };
  RunOutcome out;
  for (const Entry& e : entries) {
    ResultRow row;
    row.label = e.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const IdentityOutcome res = e.fn(c);
      if (!res.applicable) {
        row.has_value = false;
        row.status = "skipped";
        row.message = res.why_not;
      } else {
        row.value = res.residual;
        row.error_estimate = e.threshold;
        row.terms = c.identity.samples;
        row.evaluations = res.points;
        if (!(res.residual < e.threshold)) {
          row.status = "failed";
          row.message = "residual above threshold";
          out.exit_code = std::max(out.exit_code, kExitNumericFailure);
        }
      }
    } catch (const std::exception& ex) {
      row.has_value = false;
      row.status = "failed";
      row.message = ex.what();
      out.exit_code = std::max(out.exit_code, kExitNumericFailure);
    }
    row.wall_ms = elapsed_ms(t0);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

RunOutcome run(const RunConfig& config, const RunOptions& options) {
  if (config.observable == Observable::IdentityCheck) {
    return run_identity_suite(config);
  }

  // Materialize every sweep point up front so validation failures abort
  // before any computation starts.
  std::vector<RunConfig> points;
  std::vector<std::string> labels;
  if (config.sweep.path.empty()) {
    points.push_back(config);
    labels.emplace_back();
  } else {
    const nlohmann::json::json_pointer ptr(config.sweep.path);
    for (std::size_t i = 0; i < config.sweep.values.size(); ++i) {
      nlohmann::json doc = config.document;
      doc[ptr] = config.sweep.values[i];
      doc.erase("sweep");  // each point is a single, sweep-free run
      try {
        points.push_back(parse_config(doc.dump()));
      } catch (const ConfigValidationError& e) {
        throw ConfigValidationError(ConfigError{
            e.error().path, "at sweep value " +
                                format_double(config.sweep.values[i]) + ": " +
                                e.error().message});
      }
      labels.push_back(format_double(config.sweep.values[i]));
    }
  }

  RunOutcome out;
  out.rows.resize(points.size());
  const unsigned workers = std::max(
      1u, std::min<unsigned>(options.threads,
                             static_cast<unsigned>(points.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      out.rows[i] = compute_row(points[i], labels[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= points.size()) return;
          out.rows[i] = compute_row(points[i], labels[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const ResultRow& row : out.rows) {
    if (row.status == "partial") {
      out.exit_code = std::max(out.exit_code, kExitNonConvergence);
    } else if (row.status == "failed") {
      out.exit_code = std::max(out.exit_code, kExitNumericFailure);
    }
  }
  return out;
}

void write_table(std::ostream& os, const RunConfig& config,
                 const RunOptions& options, const RunOutcome& outcome) {
  const char sep = config.output.format == OutputFormat::Csv ? ',' : '\t';
  const bool si = options.si_units;

  // Natural dimension (inverse-length power) of the observable, for the SI
  // column: energy and work per unit area are 1/length^3, force per unit
  // area is 1/length^4.
  int dim = 3;
  if (config.observable == Observable::Force) dim = 4;

  os << "# caslayer " << kLibraryVersion << "\n";
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "# config_hash=" << config_hash(config) << "\n";
  os << "# observable=" << observable_name(config.observable) << "\n";
  if (si) {
    os << "# si: value_si = value * " << format_double(kHbarC_eV_nm)
       << " eV nm / (" << format_double(config.unit_length_nm) << " nm)^"
       << dim << "\n";
  }
  os << "sweep_value" << sep << "value" << sep << "error_estimate" << sep
     << "matsubara_terms" << sep << "evaluations";
  if (si) os << sep << "value_si";
  os << sep << "wall_ms" << sep << "status\n";

  const double si_factor =
      kHbarC_eV_nm / std::pow(config.unit_length_nm, dim);
  for (const ResultRow& row : outcome.rows) {
    os << row.label << sep;
    if (row.has_value) {
      os << format_double(row.value) << sep
         << format_double(row.error_estimate) << sep << row.terms << sep
         << row.evaluations;
      if (si) os << sep << format_double(row.value * si_factor);
    } else {
      os << sep << sep << sep;
      if (si) os << sep;
    }
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", row.wall_ms);
    os << sep << wall << sep << row.status << "\n";
  }
}

}  // namespace caslayer::cli
