#include "caslayer/materials.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace caslayer {

namespace {

constexpr cplx kI{0.0, 1.0};

bool finite(double x) { return std::isfinite(x); }

}  // namespace

// ---------------------------------------------------------------------------
// Dispersion models
// ---------------------------------------------------------------------------

double eps_model_value(const EpsModel& m, double xi) {
  if (!(xi >= 0.0)) throw DomainError("eps model: xi must be >= 0");
  return std::visit(
      [&](const auto& mm) -> double {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, ConstantEps>) {
          return mm.eps;
        } else if constexpr (std::is_same_v<T, PlasmaEps>) {
          if (xi == 0.0) return std::numeric_limits<double>::infinity();
          return 1.0 + mm.omega_p * mm.omega_p / (xi * xi);
        } else {
          if (xi == 0.0) return std::numeric_limits<double>::infinity();
          return 1.0 + mm.omega_p * mm.omega_p / (xi * (xi + mm.gamma));
        }
      },
      m);
}

double eps_model_xi2(const EpsModel& m, double xi) {
  if (!(xi >= 0.0)) throw DomainError("eps model: xi must be >= 0");
  return std::visit(
      [&](const auto& mm) -> double {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, ConstantEps>) {
          return mm.eps * xi * xi;
        } else if constexpr (std::is_same_v<T, PlasmaEps>) {
          return xi * xi + mm.omega_p * mm.omega_p;
        } else {
          // xi^2 + omega_p^2 * xi / (xi + gamma); -> 0 as xi -> 0 when
          // gamma > 0, -> omega_p^2 when gamma == 0 (plasma limit).
          if (xi == 0.0 && mm.gamma == 0.0) return mm.omega_p * mm.omega_p;
          if (xi == 0.0) return 0.0;
          return xi * xi + mm.omega_p * mm.omega_p * xi / (xi + mm.gamma);
        }
      },
      m);
}

// ---------------------------------------------------------------------------
// Material predicates
// ---------------------------------------------------------------------------

bool is_perfect_conductor(const Material& m) {
  return std::holds_alternative<PerfectConductor>(m);
}

bool is_weyl(const Material& m) {
  return std::holds_alternative<WeylSemimetal>(m);
}

bool is_reciprocal(const Material& m) { return !is_weyl(m); }

bool requires_helicity(const Material& m) { return is_weyl(m); }

void validate_material(const Material& m) {
  std::visit(
      [](const auto& mm) {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, Dielectric>) {
          std::visit(
              [](const auto& em) {
                using E = std::decay_t<decltype(em)>;
                if constexpr (std::is_same_v<E, ConstantEps>) {
                  if (!(finite(em.eps) && em.eps >= 1.0)) {
                    throw DomainError(
                        "dielectric: constant eps must be finite and >= 1");
                  }
                } else if constexpr (std::is_same_v<E, PlasmaEps>) {
                  if (!(finite(em.omega_p) && em.omega_p >= 0.0)) {
                    throw DomainError(
                        "dielectric: plasma frequency must be finite and >= "
                        "0");
                  }
                } else {
                  if (!(finite(em.omega_p) && em.omega_p >= 0.0) ||
                      !(finite(em.gamma) && em.gamma >= 0.0)) {
                    throw DomainError(
                        "dielectric: Drude parameters must be finite and >= "
                        "0");
                  }
                }
              },
              mm.eps);
        } else if constexpr (std::is_same_v<T, WeylSemimetal>) {
          if (!finite(mm.b) || mm.b < 0.0) {
            throw DomainError(
                "weyl: node splitting is a magnitude, must be finite and "
                ">= 0");
          }
        }
      },
      m);
}

bool material_equal(const Material& a, const Material& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<Vacuum>(a) ||
      std::holds_alternative<PerfectConductor>(a)) {
    return true;
  }
  if (const auto* wa = std::get_if<WeylSemimetal>(&a)) {
    return wa->b == std::get<WeylSemimetal>(b).b;
  }
  const EpsModel& ea = std::get<Dielectric>(a).eps;
  const EpsModel& eb = std::get<Dielectric>(b).eps;
  if (ea.index() != eb.index()) return false;
  if (const auto* c = std::get_if<ConstantEps>(&ea)) {
    return c->eps == std::get<ConstantEps>(eb).eps;
  }
  if (const auto* p = std::get_if<PlasmaEps>(&ea)) {
    return p->omega_p == std::get<PlasmaEps>(eb).omega_p;
  }
  const auto& da = std::get<DrudeEps>(ea);
  const auto& db = std::get<DrudeEps>(eb);
  return da.omega_p == db.omega_p && da.gamma == db.gamma;
}

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

const char* basis_name(Basis b) {
  return b == Basis::TMTE ? "tmte" : "helicity";
}

CMat parity_matrix(Basis b) {
  if (b == Basis::TMTE) return CMat::identity(2);
  return CMat::from_rows(2, {0.0, 1.0, 1.0, 0.0});
}

namespace {

// Hadamard mixer between the linear (TM/TE) and circular (helicity) channel
// pairs, and the channel swap. Both are involutions.
CMat hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return CMat::from_rows(2, {s, s, s, -s});
}

CMat swap_matrix() { return CMat::from_rows(2, {0.0, 1.0, 1.0, 0.0}); }

}  // namespace

CoeffPair change_basis(const CoeffPair& c, Basis target) {
  if (c.basis == target) return c;
  if (c.r.dim() != 2) {
    throw DomainError("change_basis: coefficient blocks must be 2x2");
  }
  const CMat H = hadamard();
  const CMat S = swap_matrix();
  CoeffPair out;
  out.basis = target;
  if (target == Basis::Helicity) {
    // Right-movers mix with H, left-movers with H*S (the helicity label of a
    // left-mover attaches to the opposite linear combination).
    out.r = S * H * c.r * H;
    out.t = H * c.t * H;
    out.r_rev = H * c.r_rev * H * S;
    out.t_rev = S * H * c.t_rev * H * S;
  } else {
    out.r = H * S * c.r * H;
    out.t = H * c.t * H;
    out.r_rev = H * c.r_rev * S * H;
    out.t_rev = H * S * c.t_rev * S * H;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wavenumbers
// ---------------------------------------------------------------------------

WaveNumbers wavenumbers(const Material& m, double xi, double kpar,
                        Basis basis) {
  if (!(xi >= 0.0) || !(kpar >= 0.0)) {
    throw DomainError("wavenumbers: xi and kpar must be >= 0");
  }
  if (xi == 0.0 && kpar == 0.0) {
    throw DomainError(
        "wavenumbers: undefined at the spectral origin xi = kpar = 0");
  }
  if (is_perfect_conductor(m)) {
    throw DomainError("wavenumbers: a perfect conductor has no interior");
  }
  if (const auto* w = std::get_if<WeylSemimetal>(&m)) {
    if (basis != Basis::Helicity) {
      throw DomainError(
          "wavenumbers: Weyl propagation is diagonal only in the helicity "
          "basis");
    }
    const double kappa = std::hypot(kpar, xi);
    // Principal square roots; real parts are positive because
    // Re[kappa*(kappa -+ i b)] = kappa^2 > 0. The two channels are complex
    // conjugates of one another.
    const cplx kp = std::sqrt(kappa * (cplx(kappa) - kI * w->b));
    const cplx km = std::sqrt(kappa * (cplx(kappa) + kI * w->b));
    return WaveNumbers{kp, km};
  }
  double exi2 = 0.0;
  if (const auto* d = std::get_if<Dielectric>(&m)) {
    exi2 = eps_model_xi2(d->eps, xi);
  } else {
    exi2 = xi * xi;  // vacuum
  }
  const double k = std::sqrt(kpar * kpar + exi2);
  return WaveNumbers{k, k};
}

// ---------------------------------------------------------------------------
// Interface coefficients
// ---------------------------------------------------------------------------

namespace {

// One side of a dielectric-type interface (vacuum counts as eps = 1),
// described so the xi -> 0 metallic limits stay exact. The TM channel is
// controlled by w = khat/eps, which behaves as w ~ coef * xi^order for small
// xi: order 0 for any finite eps, 1 for Drude metals, 2 for plasma metals.
struct DielSide {
  double khat;     // longitudinal decay constant
  bool metal0;     // xi == 0 and eps diverging
  double eps;      // finite eps (valid when !metal0)
  int w_order;     // order of w in xi at xi == 0 (0 when eps finite)
  double w_coef;   // leading coefficient of w
};

DielSide diel_side(const Material& m, double xi, double kpar) {
  EpsModel model = ConstantEps{1.0};
  if (const auto* d = std::get_if<Dielectric>(&m)) model = d->eps;
  DielSide s{};
  s.khat = std::sqrt(kpar * kpar + eps_model_xi2(model, xi));
  if (xi > 0.0) {
    s.metal0 = false;
    s.eps = eps_model_value(model, xi);
    s.w_order = 0;
    s.w_coef = s.khat / s.eps;
    return s;
  }
  // xi == 0: classify the TM response.
  if (const auto* c = std::get_if<ConstantEps>(&model)) {
    s.metal0 = false;
    s.eps = c->eps;
    s.w_order = 0;
    s.w_coef = s.khat / c->eps;
  } else if (const auto* p = std::get_if<PlasmaEps>(&model)) {
    if (p->omega_p == 0.0) {
      s.metal0 = false;
      s.eps = 1.0;
      s.w_order = 0;
      s.w_coef = s.khat;
    } else {
      s.metal0 = true;
      s.w_order = 2;
      s.w_coef = s.khat / (p->omega_p * p->omega_p);
    }
  } else {
    const auto& d = std::get<DrudeEps>(model);
    if (d.omega_p == 0.0) {
      s.metal0 = false;
      s.eps = 1.0;
      s.w_order = 0;
      s.w_coef = s.khat;
    } else if (d.gamma == 0.0) {
      // Undamped Drude degenerates to the plasma model.
      s.metal0 = true;
      s.w_order = 2;
      s.w_coef = s.khat / (d.omega_p * d.omega_p);
    } else {
      s.metal0 = true;
      s.w_order = 1;
      s.w_coef = s.khat * d.gamma / (d.omega_p * d.omega_p);
    }
  }
  return s;
}

struct ScalarPair {
  double r, t, t_rev, r_rev;
};

// TM coefficients, exact in the xi -> 0 metallic limits: with w = khat/eps,
//   r = (w1 - w2) / (w1 + w2),
//   t = 2 sqrt((k1/k2) w1 w2) / (w1 + w2),
// and when the two sides vanish at different orders in xi the more metallic
// side wins: r -> +-1, t -> 0.
ScalarPair tm_pair(const DielSide& a, const DielSide& b) {
  if (a.w_order == b.w_order) {
    const double w1 = a.w_coef;
    const double w2 = b.w_coef;
    const double den = w1 + w2;
    ScalarPair p{};
    p.r = (w1 - w2) / den;
    p.r_rev = -p.r;
    p.t = 2.0 * std::sqrt((a.khat / b.khat) * w1 * w2) / den;
    p.t_rev = 2.0 * std::sqrt((b.khat / a.khat) * w1 * w2) / den;
    return p;
  }
  if (a.w_order < b.w_order) {
    return ScalarPair{1.0, 0.0, 0.0, -1.0};
  }
  return ScalarPair{-1.0, 0.0, 0.0, 1.0};
}

ScalarPair te_pair(const DielSide& a, const DielSide& b) {
  const double den = a.khat + b.khat;
  ScalarPair p{};
  p.r = (a.khat - b.khat) / den;
  p.r_rev = -p.r;
  p.t = 2.0 * a.khat / den;
  p.t_rev = 2.0 * b.khat / den;
  return p;
}

CoeffPair dielectric_pair(const Material& left, const Material& right,
                          double xi, double kpar) {
  const DielSide s1 = diel_side(left, xi, kpar);
  const DielSide s2 = diel_side(right, xi, kpar);
  const ScalarPair tm = tm_pair(s1, s2);
  const ScalarPair te = te_pair(s1, s2);
  return CoeffPair(CMat::diag2(tm.r, te.r), CMat::diag2(tm.t, te.t),
                   CMat::diag2(tm.t_rev, te.t_rev),
                   CMat::diag2(tm.r_rev, te.r_rev), Basis::TMTE);
}

// Perfect conductor on the right of `mat`: +1 (TM) / -1 (TE) reflection seen
// from the material, zero transmission; the formal inside-the-conductor
// reflection is the negation, matching the eps -> infinity limit.
CoeffPair conductor_right_pair() {
  return CoeffPair(CMat::diag2(1.0, -1.0), CMat(2), CMat(2),
                   CMat::diag2(-1.0, 1.0), Basis::TMTE);
}

// Vacuum on the left, Weyl semimetal on the right. Helicity basis; the two
// channels carry the conjugate wavenumbers k+- = sqrt(kappa (kappa -+ i b)).
// Transmission normalization is fixed so that b = 0 reduces the interface to
// nothing (r = 0, t = 1); any channel rescaling t -> s t, t_rev -> t_rev / s
// would cancel in every observable. Each channel satisfies
// r^2 + t * t_rev = 1 exactly.
CoeffPair weyl_right_pair(double b, double xi, double kpar) {
  const double kappa = std::hypot(kpar, xi);
  const cplx kp = std::sqrt(kappa * (cplx(kappa) - kI * b));
  const cplx km = std::sqrt(kappa * (cplx(kappa) + kI * b));
  const cplx rp = (kp - kappa) / (kp + kappa);
  const cplx rm = (km - kappa) / (km + kappa);
  const cplx tp = 2.0 * kappa / (kp + kappa);
  const cplx tm = 2.0 * kappa / (km + kappa);
  const cplx tp_rev = 2.0 * kp / (kp + kappa);
  const cplx tm_rev = 2.0 * km / (km + kappa);
  return CoeffPair(CMat::diag2(rp, rm), CMat::diag2(tp, tm),
                   CMat::diag2(tp_rev, tm_rev), CMat::diag2(-rp, -rm),
                   Basis::Helicity);
}

}  // namespace

CoeffPair interface_coeffs(const Material& left, const Material& right,
                           double xi, double kpar, Basis basis) {
  if (!(xi >= 0.0) || !(kpar >= 0.0)) {
    throw DomainError("interface_coeffs: xi and kpar must be >= 0");
  }
  if (xi == 0.0 && kpar == 0.0) {
    throw DomainError(
        "interface_coeffs: undefined at the spectral origin xi = kpar = 0");
  }
  validate_material(left);
  validate_material(right);
  if (is_perfect_conductor(left) && is_perfect_conductor(right)) {
    throw DomainError(
        "interface_coeffs: at most one side may be a perfect conductor");
  }
  if (material_equal(left, right)) {
    // Nothing scatters; zero and identity look the same in every basis.
    return CoeffPair(CMat(2), CMat::identity(2), CMat::identity(2), CMat(2),
                     basis);
  }
  if (is_weyl(left) || is_weyl(right)) {
    const bool weyl_right = is_weyl(right);
    const Material& other = weyl_right ? left : right;
    if (!std::holds_alternative<Vacuum>(other)) {
      throw DomainError(
          "interface_coeffs: a Weyl semimetal only has closed-form "
          "coefficients against vacuum");
    }
    const double b = std::get<WeylSemimetal>(weyl_right ? right : left).b;
    CoeffPair p = weyl_right_pair(b, xi, kpar);
    if (!weyl_right) p = p.reversed();
    return change_basis(p, basis);
  }
  if (is_perfect_conductor(right)) {
    return change_basis(conductor_right_pair(), basis);
  }
  if (is_perfect_conductor(left)) {
    return change_basis(conductor_right_pair().reversed(), basis);
  }
  return change_basis(dielectric_pair(left, right, xi, kpar), basis);
}

}  // namespace caslayer
