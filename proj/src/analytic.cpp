#include "ptsusy/analytic.hpp"

#include <cmath>
#include <numbers>

#include "ptsusy/errors.hpp"

namespace ptsusy {

using std::numbers::pi;

std::string to_string(Variant v) { return v == Variant::Tangent ? "tangent" : "cotangent"; }

std::string to_string(HierarchyMode m) { return m == HierarchyMode::FixedK ? "fixed-k" : "paper-k"; }

void FamilyParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw UnsupportedParameters("k must be positive and finite");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw UnsupportedParameters("alpha must be positive and finite");
  }
  if (!std::isfinite(q)) throw UnsupportedParameters("q must be finite");
  if (n < 1) throw UnsupportedParameters("hierarchy level n must be >= 1");
}

FamilyParams family(Variant variant, double k, double q, int n) {
  FamilyParams p{variant, k, q, k, n};
  p.validate();
  return p;
}

double well_half_width(const FamilyParams& p) { return pi / (2.0 * p.k); }

double domain_shift(const FamilyParams& p) {
  return p.variant == Variant::Cotangent ? well_half_width(p) : 0.0;
}

ClosedFormFunction on_symmetric_domain(const ClosedFormFunction& f, const FamilyParams& p) {
  const double s = domain_shift(p);
  return s == 0.0 ? f : f.shifted(s);
}

namespace {

std::pair<double, double> natural_well(const FamilyParams& p) {
  const double hw = well_half_width(p);
  return p.variant == Variant::Tangent ? std::pair{-hw, hw} : std::pair{0.0, 2.0 * hw};
}

// Zeros of cos(alpha x) and sin(alpha x).
PointSet cos_zeros(double alpha) { return PointSet::periodic(pi / (2.0 * alpha), pi / alpha); }
PointSet sin_zeros(double alpha) { return PointSet::periodic(0.0, pi / alpha); }

void require_alpha_equals_k(const FamilyParams& p) {
  p.validate();
  if (!p.alpha_equals_k()) {
    throw UnsupportedParameters("closed forms are only available for alpha == k (got alpha=" +
                                std::to_string(p.alpha) + ", k=" + std::to_string(p.k) + ")");
  }
}

}  // namespace

std::pair<ClosedFormFunction, ClosedFormFunction> square_well_ground_states(double k) {
  if (!(k > 0.0)) throw UnsupportedParameters("k must be positive");
  auto s = ClosedFormFunction::from([k](auto x) { return sin(k * x); }, {}, sin_zeros(k));
  auto c = ClosedFormFunction::from([k](auto x) { return cos(k * x); }, {}, cos_zeros(k));
  return {s, c};
}

ClosedFormFunction superpotential_from_wavefunction(const ClosedFormFunction& psi) {
  ClosedFormFunction::JetFn fn = [psi](double x) {
    const Jet j = psi.jet(x);
    if (j.value() == cplx(0.0)) throw EvaluationAtZero(x);
    return -(j.differentiated() / j);
  };
  return {fn, psi.poles().united(psi.zeros())};
}

ClosedFormFunction constraint_function(Variant variant, double q, double alpha) {
  if (!(alpha > 0.0)) throw UnsupportedParameters("alpha must be positive");
  if (q == 0.0) return ClosedFormFunction::constant(0.0);
  if (variant == Variant::Tangent) {
    return ClosedFormFunction::from([q, alpha](auto x) { return q / cos(alpha * x); }, cos_zeros(alpha));
  }
  return ClosedFormFunction::from([q, alpha](auto x) { return q / sin(alpha * x); }, sin_zeros(alpha));
}

ClosedFormFunction complexified_superpotential(Variant variant, double amplitude, double alpha,
                                               const ClosedFormFunction& f) {
  ClosedFormFunction real;
  if (variant == Variant::Tangent) {
    real = ClosedFormFunction::from([amplitude, alpha](auto x) { return amplitude * tan(alpha * x); },
                                    cos_zeros(alpha));
  } else {
    real = ClosedFormFunction::from(
        [amplitude, alpha](auto x) { return -amplitude * cos(alpha * x) / sin(alpha * x); },
        sin_zeros(alpha));
  }
  return real + kI * f;
}

ClosedFormFunction build_superpotential(const FamilyParams& p) {
  require_alpha_equals_k(p);
  const double k = p.k, q = p.q, n = p.n;
  const ClosedFormFunction w =
      complexified_superpotential(p.variant, n * k, k, constraint_function(p.variant, q, k));
  if (p.variant == Variant::Tangent) {
    return w.with_antiderivative_from([k, q, n](auto x) {
      const auto c = cos(k * x);
      return -n * log(c) + kI * (q / k) * log(1.0 / c + sin(k * x) / c);
    });
  }
  return w.with_antiderivative_from([k, q, n](auto x) {
    const auto s = sin(k * x);
    return -n * log(s) + kI * (q / k) * log(1.0 / s - cos(k * x) / s);
  });
}

PartnerPair partner_pair_from_superpotential(const ClosedFormFunction& w, double e0) {
  const ClosedFormFunction w2 = w * w;
  const ClosedFormFunction dw = w.derivative();
  return {w2 - dw + cplx(e0), w2 + dw + cplx(e0), e0};
}

PartnerPair closed_form_potentials(const FamilyParams& p) {
  require_alpha_equals_k(p);
  const double k = p.k, q = p.q, n = p.n;
  const double c1 = n * (n - 1) * k * k - q * q;
  const double c2 = n * (n + 1) * k * k - q * q;
  const double i1 = (2 * n - 1) * q * k;
  const double i2 = (2 * n + 1) * q * k;
  const double e0 = k * k * (n * n - 1);
  if (p.variant == Variant::Tangent) {
    auto make = [k](double coeff, double imag) {
      return ClosedFormFunction::from(
          [k, coeff, imag](auto x) {
            const auto sec = 1.0 / cos(k * x);
            return coeff * sec * sec - k * k + kI * imag * tan(k * x) * sec;
          },
          cos_zeros(k));
    };
    return {make(c1, i1), make(c2, i2), e0};
  }
  auto make = [k](double coeff, double imag) {
    return ClosedFormFunction::from(
        [k, coeff, imag](auto x) {
          const auto csc = 1.0 / sin(k * x);
          return coeff * csc * csc - k * k - kI * imag * cos(k * x) * csc * csc;
        },
        sin_zeros(k));
  };
  return {make(c1, i1), make(c2, i2), e0};
}

ClosedFormFunction shape_invariance_remainder(const FamilyParams& p) {
  p.validate();
  return shape_invariance_remainder(p, constraint_function(p.variant, p.q, p.alpha));
}

ClosedFormFunction shape_invariance_remainder(const FamilyParams& p, const ClosedFormFunction& f) {
  p.validate();
  const double a = p.n * p.k;
  const auto wa = complexified_superpotential(p.variant, a, p.alpha, f);
  const auto wb = complexified_superpotential(p.variant, a + p.alpha, p.alpha, f);
  return partner_pair_from_superpotential(wa).v2 - partner_pair_from_superpotential(wb).v1;
}

double remainder_value(int n, double k_n) { return (2.0 * n + 1.0) * k_n * k_n; }

double energy_spectrum(int n) { return double(n) * double(n + 2); }

int wave_number(int n) { return n + 1; }

ClosedFormFunction ground_state_wavefunction(const FamilyParams& p,
                                             std::optional<std::pair<double, double>> domain) {
  require_alpha_equals_k(p);
  const auto [lo, hi] = domain.value_or(natural_well(p));
  if (!(lo < hi)) throw UnsupportedParameters("empty wavefunction domain");
  const double k = p.k, q = p.q;
  const int n = p.n;
  const double mid = 0.5 * (lo + hi);

  if (p.variant == Variant::Tangent) {
    // sec + tan = (1 + sin)/cos > 0 exactly where cos > 0.
    const auto crossing = cos_zeros(k).inside(lo, hi);
    if (!crossing.empty()) throw BranchViolation(crossing.front());
    if (std::cos(k * mid) <= 0.0) throw BranchViolation(mid);
    ClosedFormFunction::JetFn fn = [k, q, n](double xv) {
      const Jet x = Jet::variable(xv);
      Jet s, c;
      sincos(k * x, s, c);
      const Jet arg = (1.0 + s) / c;
      if (!(arg.value().real() > 0.0)) throw BranchViolation(xv);
      return pow(c, n) * exp(-kI * (q / k) * log(arg));
    };
    return {fn, {}, cos_zeros(k)};
  }
  const auto crossing = sin_zeros(k).inside(lo, hi);
  if (!crossing.empty()) throw BranchViolation(crossing.front());
  if (std::sin(k * mid) <= 0.0) throw BranchViolation(mid);
  ClosedFormFunction::JetFn fn = [k, q, n](double xv) {
    const Jet x = Jet::variable(xv);
    Jet s, c;
    sincos(k * x, s, c);
    const Jet arg = (1.0 - c) / s;
    if (!(arg.value().real() > 0.0)) throw BranchViolation(xv);
    return pow(s, n) * exp(-kI * (q / k) * log(arg));
  };
  return {fn, {}, sin_zeros(k)};
}

namespace {

cplx simpson(const ClosedFormFunction& w, double a, double b) {
  constexpr double kTargetStep = 2e-3;
  auto panels = static_cast<long long>(std::ceil(std::abs(b - a) / kTargetStep));
  panels = std::max<long long>(2, panels + (panels % 2));
  const double h = (b - a) / double(panels);
  cplx sum = w.eval(a) + w.eval(b);
  for (long long i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * w.eval(a + double(i) * h);
  return sum * (h / 3.0);
}

}  // namespace

ClosedFormFunction exponent_from_superpotential(const ClosedFormFunction& w, double anchor) {
  if (w.poles().contains(anchor)) throw PoleOnPath(anchor);
  if (const auto& F = w.antiderivative()) {
    const cplx base = (*F)(anchor).value();
    auto Fn = *F;
    return ClosedFormFunction([Fn, base](double x) { return Fn(x) - base; }, w.poles());
  }
  ClosedFormFunction::JetFn fn = [w, anchor](double x) {
    const auto crossed = w.poles().in(std::min(anchor, x), std::max(anchor, x));
    if (!crossed.empty()) throw PoleOnPath(crossed.front());
    const cplx value = x == anchor ? cplx(0.0) : simpson(w, anchor, x);
    return w.jet(x).integrated(value);
  };
  return {fn, w.poles()};
}

std::vector<HierarchyLevel> hierarchy(const FamilyParams& p, int depth, HierarchyMode mode) {
  p.validate();
  if (depth < 1) throw UnsupportedParameters("hierarchy depth must be >= 1");
  const auto [lo, hi] = natural_well(p);
  std::vector<HierarchyLevel> levels;
  levels.reserve(std::size_t(depth));
  for (int j = 1; j <= depth; ++j) {
    HierarchyLevel L;
    L.level = j;
    if (mode == HierarchyMode::FixedK) {
      const FamilyParams pj = family(p.variant, p.k, p.q, j);
      L.k = p.k;
      L.w = build_superpotential(pj);
      L.potentials = closed_form_potentials(pj);
      L.e0 = L.potentials.e0;
      L.ground_state = ground_state_wavefunction(pj);
    } else {
      L.k = double(wave_number(j));
      const FamilyParams pj = family(p.variant, L.k, p.q, j);
      L.w = build_superpotential(pj);
      L.e0 = double(j - 1) * double(j + 1);
      L.potentials = partner_pair_from_superpotential(L.w, L.e0);
      // Valid only on the principal cell of k_j; wider evaluations raise BranchViolation.
      L.ground_state = ground_state_wavefunction(pj);
    }
    L.interior_poles = L.w.poles().inside(lo, hi);
    levels.push_back(std::move(L));
  }
  return levels;
}

}  // namespace ptsusy
