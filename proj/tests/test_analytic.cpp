#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ptsusy/analytic.hpp"
#include "ptsusy/errors.hpp"
#include "ptsusy/numerics.hpp"
#include "support.hpp"

using namespace ptsusy;
using testing::Gen;
using testing::pi;

namespace {

constexpr double kTight = 1e-10;

bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// 101 probes strictly inside the tangent or cotangent well, away from the walls.
std::vector<double> probes(const FamilyParams& p) {
  const double lo = -well_half_width(p) + domain_shift(p);
  const double L = 2.0 * well_half_width(p);
  std::vector<double> xs;
  for (int i = 0; i < 101; ++i) xs.push_back(lo + L * (0.01 + 0.98 * i / 100.0));
  return xs;
}

std::vector<FamilyParams> builtin_families() {
  std::vector<FamilyParams> out;
  for (Variant v : {Variant::Tangent, Variant::Cotangent})
    for (double k : {1.0, 2.5})
      for (double q : {0.0, 2.0, -1.5})
        for (int n : {1, 3}) out.push_back(family(v, k, q, n));
  return out;
}

}  // namespace

TEST_CASE("square-well ground states") {
  const auto [s, c] = square_well_ground_states(1.0);
  CHECK(c(0.0) == cplx(1.0));
  CHECK(s(0.0) == cplx(0.0));
  CHECK(std::abs(square_well_ground_states(2.0).second(pi / 4)) < 1e-15);
}

TEST_CASE("superpotential from a wavefunction") {
  const auto [s, c] = square_well_ground_states(1.0);
  const auto wt = superpotential_from_wavefunction(c);
  CHECK(close(wt(pi / 4), 1.0));
  for (double x : {0.3, -1.1, 1.4}) CHECK(close(wt(x), std::tan(x)));
  const auto wc = superpotential_from_wavefunction(s);
  for (double x : {0.3, 1.1, 2.9}) CHECK(close(wc(x), -1.0 / std::tan(x)));
  CHECK_THROWS_AS(wc(0.0), EvaluationAtZero);
  const auto gauss = ClosedFormFunction::from([](auto x) { return exp(-0.5 * x * x); });
  const auto wg = superpotential_from_wavefunction(gauss);
  for (double x : {-2.0, 0.0, 0.7}) CHECK(close(wg(x), x));
}

TEST_CASE("constraint functions") {
  CHECK(close(constraint_function(Variant::Tangent, 2.0, 1.0)(0.0), 2.0));
  CHECK(close(constraint_function(Variant::Cotangent, 2.0, 1.0)(pi / 2), 2.0));
  const auto zero = constraint_function(Variant::Tangent, 0.0, 1.0);
  for (double x : {-1.0, 0.0, 1.3}) CHECK(zero(x) == cplx(0.0));
  CHECK(constraint_function(Variant::Tangent, 2.0, 1.0).poles().contains(pi / 2));
  CHECK(constraint_function(Variant::Cotangent, 2.0, 1.0).poles().contains(0.0));
}

TEST_CASE("built superpotentials") {
  const auto wt = build_superpotential(family(Variant::Tangent, 1.0, 2.0));
  CHECK(close(wt(0.0), cplx(0.0, 2.0)));
  CHECK(close(wt(pi / 4), cplx(1.0, 2.0 * std::sqrt(2.0))));
  const auto wc = build_superpotential(family(Variant::Cotangent, 1.0, 2.0));
  CHECK(close(wc(pi / 2), cplx(0.0, 2.0)));
  // level 3, k = 2: 6 tan(2x) + i q sec(2x)
  const auto w3 = build_superpotential(family(Variant::Tangent, 2.0, -1.5, 3));
  CHECK(close(w3(0.2), cplx(6.0 * std::tan(0.4), -1.5 / std::cos(0.4))));
  CHECK(w3.has_antiderivative());

  FamilyParams bad = family(Variant::Tangent, 1.0, 2.0);
  bad.alpha = 2.0;
  CHECK_THROWS_AS(build_superpotential(bad), UnsupportedParameters);
  CHECK_THROWS_AS(closed_form_potentials(bad), UnsupportedParameters);
  FamilyParams neg = family(Variant::Tangent, 1.0, 2.0);
  neg.k = -1.0;
  CHECK_THROWS_AS(neg.validate(), UnsupportedParameters);
  neg = family(Variant::Tangent, 1.0, 2.0);
  neg.n = 0;
  CHECK_THROWS_AS(neg.validate(), UnsupportedParameters);
}

TEST_CASE("partner pairs") {
  const auto x = ClosedFormFunction::from([](auto t) { return t; });
  const auto osc = partner_pair_from_superpotential(x);
  for (double t : {-1.5, 0.0, 2.0}) {
    CHECK(close(osc.v1(t), t * t - 1.0));
    CHECK(close(osc.v2(t), t * t + 1.0));
  }
  CHECK(osc.e0 == 0.0);
  const auto pt = partner_pair_from_superpotential(build_superpotential(family(Variant::Tangent, 1.0, 2.0)));
  CHECK(close(pt.v1(0.0), -5.0));
  CHECK(close(pt.v2(0.0), -3.0));
  const auto pc = partner_pair_from_superpotential(build_superpotential(family(Variant::Cotangent, 1.0, 2.0)));
  CHECK(close(pc.v1(pi / 2), -5.0));
  CHECK(close(partner_pair_from_superpotential(x, 4.0).v1(0.0), 3.0));
}

TEST_CASE("closed-form potentials") {
  const auto v = closed_form_potentials(family(Variant::Tangent, 1.0, 2.0));
  CHECK(close(v.v1(0.0), -5.0));
  for (double t : {-1.2, 0.4, 1.0}) {
    const double sec = 1.0 / std::cos(t);
    CHECK(close(v.v1(t), cplx(-4.0 * sec * sec - 1.0, 2.0 * std::tan(t) * sec)));
  }
  const auto free = closed_form_potentials(family(Variant::Tangent, 1.0, 0.0));
  for (double t : {-1.2, 0.0, 1.4}) CHECK(std::abs(free.v1(t) + 1.0) < 1e-12);

  // level 2: at x = 0 only the sec^2 coefficient 2 k^2 - q^2 and the -k^2 survive
  const double k = 1.5, q = 0.5;
  const auto v2 = closed_form_potentials(family(Variant::Tangent, k, q, 2));
  CHECK(close(v2.v1(0.0) + k * k, 2.0 * k * k - q * q));
  CHECK(v2.e0 == k * k * 3.0);
}

TEST_CASE("closed-form potentials match the factorization (property)") {
  for (const auto& p : builtin_families()) {
    CAPTURE(to_string(p.variant));
    CAPTURE(p.k);
    CAPTURE(p.q);
    CAPTURE(p.n);
    const auto direct = closed_form_potentials(p);
    const auto w = build_superpotential(p);
    const auto built = partner_pair_from_superpotential(w, direct.e0);
    for (double x : probes(p)) {
      const Jet j = w.jet(x);
      const cplx w0 = j.value(), w1 = j.derivative(1);
      CHECK(close(built.v1(x), w0 * w0 - w1 + direct.e0, kTight));
      CHECK(close(built.v2(x), w0 * w0 + w1 + direct.e0, kTight));
      CHECK(close(direct.v1(x), built.v1(x), kTight));
      CHECK(close(direct.v2(x), built.v2(x), kTight));
    }
  }
}

TEST_CASE("shape invariance remainder") {
  const auto r = shape_invariance_remainder(family(Variant::Tangent, 1.0, 2.0));
  for (double x : probes(family(Variant::Tangent, 1.0, 2.0))) CHECK(close(r(x), 3.0, kTight));
  const auto r0 = shape_invariance_remainder(family(Variant::Tangent, 1.0, 0.0));
  CHECK(close(r0(0.9), 3.0, kTight));
  const auto lin = ClosedFormFunction::from([](auto x) { return 2.0 * x; });
  const auto ru = shape_invariance_remainder(family(Variant::Tangent, 1.0, 2.0), lin);
  CHECK(std::abs(ru(0.1) - ru(0.8)) > 1e-2);
}

TEST_CASE("remainder is the constant alpha(alpha + 2nk) (property)") {
  for (const auto& p : builtin_families()) {
    const auto r = shape_invariance_remainder(p);
    const double expected = p.alpha * (p.alpha + 2.0 * p.n * p.k);
    double lo = 1e300, hi = -1e300;
    for (double x : probes(p)) {
      const cplx v = r(x);
      CHECK(std::abs(v.imag()) <= kTight * expected);
      lo = std::min(lo, v.real());
      hi = std::max(hi, v.real());
    }
    CHECK(hi - lo <= 1e-10 * std::max(1.0, expected));
    CHECK(std::abs(0.5 * (lo + hi) - expected) <= 1e-9 * expected);
    CHECK(std::abs(expected - remainder_value(p.n, p.k)) <= 1e-12 * expected);
  }
}

TEST_CASE("remainder values, spectrum and wave numbers") {
  CHECK(remainder_value(1, 1.0) == 3.0);
  CHECK(remainder_value(2, 1.0) == 5.0);
  CHECK(remainder_value(0, 1.7) == doctest::Approx(1.7 * 1.7));
  CHECK(energy_spectrum(0) == 0.0);
  CHECK(energy_spectrum(1) == 3.0);
  CHECK(energy_spectrum(3) == 15.0);
  CHECK(wave_number(0) == 1);
  CHECK(wave_number(4) == 5);
}

TEST_CASE("telescoping spectrum") {
  for (int n = 0; n <= 10; ++n) {
    double sum = 0.0;
    for (int j = 1; j <= n; ++j) sum += remainder_value(j, 1.0);
    CHECK(sum == energy_spectrum(n));
  }
}

TEST_CASE("ground-state wavefunction") {
  const auto p = family(Variant::Tangent, 1.0, 2.0);
  const auto psi = ground_state_wavefunction(p);
  CHECK(close(psi(0.0), 1.0));
  Gen gen(17);
  for (int i = 0; i < 100; ++i) {
    const double x = gen.uniform(-pi / 2 + 1e-6, pi / 2 - 1e-6);
    CHECK(std::abs(std::abs(psi(x)) - std::cos(x)) <= 1e-12);
  }
  CHECK(std::abs(psi(pi / 2 - 1e-6)) < 2e-6);
  CHECK(std::abs(psi(-pi / 2 + 1e-6)) < 2e-6);
  CHECK_THROWS_AS(ground_state_wavefunction(p, std::pair{-1.0, 2.0}), BranchViolation);
  CHECK_THROWS_AS(psi(2.0), BranchViolation);
  const auto pc = family(Variant::Cotangent, 1.0, 2.0);
  CHECK_THROWS_AS(ground_state_wavefunction(pc, std::pair{-0.5, 1.0}), BranchViolation);
  CHECK(std::abs(std::abs(ground_state_wavefunction(pc)(1.0)) - std::sin(1.0)) < 1e-12);
}

TEST_CASE("log-derivative of the ground state is the superpotential (property)") {
  for (const auto& p : builtin_families()) {
    const auto psi = ground_state_wavefunction(p);
    const auto w = build_superpotential(p);
    for (double x : probes(p)) {
      const Jet j = psi.jet(x);
      CHECK(close(-j.derivative(1) / j.value(), w(x), 1e-8));
    }
  }
}

TEST_CASE("exponent from superpotential") {
  const auto x = ClosedFormFunction::from([](auto t) { return t; });
  const auto fx = exponent_from_superpotential(x, 0.0);
  CHECK(std::abs(fx(2.0) - 2.0) < 1e-8);
  CHECK(std::abs(fx(0.0)) < 1e-15);

  const auto w = build_superpotential(family(Variant::Tangent, 1.0, 2.0));
  const auto closed = exponent_from_superpotential(w, 0.0);
  // same function without its antiderivative takes the Simpson route
  const auto bare = ClosedFormFunction::from([](auto t) { return tan(t) + 2.0 * kI / cos(t); },
                                             PointSet::periodic(pi / 2, pi));
  CHECK_FALSE(bare.has_antiderivative());
  const auto numeric = exponent_from_superpotential(bare, 0.0);
  CHECK(std::abs(closed(0.0)) < 1e-15);
  for (double t : {-1.4, -0.6, 0.0, 0.5, 1.2, 1.5}) {
    const cplx expected(-std::log(std::cos(t)), 2.0 * std::log(1.0 / std::cos(t) + std::tan(t)));
    CHECK(std::abs(closed(t) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    CHECK(std::abs(numeric(t) - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
  }
  CHECK_THROWS_AS(numeric(2.0), PoleOnPath);

  // exp(-f) reproduces the ground state up to a constant
  const auto psi = ground_state_wavefunction(family(Variant::Tangent, 1.0, 2.0));
  for (double t : {-1.0, 0.3, 1.3}) CHECK(std::abs(std::exp(-closed(t)) / psi(t) - 1.0) < 1e-12);

  const auto real = exponent_from_superpotential(build_superpotential(family(Variant::Tangent, 1.0, 0.0)), 0.0);
  for (double t : {-1.0, 0.3, 1.3}) {
    CHECK(real(t).imag() == 0.0);
    CHECK(std::abs(real(t).real() + std::log(std::cos(t))) < 1e-12);
  }
}

TEST_CASE("q = 0 outputs are real (property)") {
  for (Variant v : {Variant::Tangent, Variant::Cotangent})
    for (int n : {1, 2, 4}) {
      const auto p = family(v, 1.3, 0.0, n);
      const auto pair = closed_form_potentials(p);
      const auto w = build_superpotential(p);
      const auto psi = ground_state_wavefunction(p);
      const auto r = shape_invariance_remainder(p);
      for (double x : probes(p)) {
        CHECK(w(x).imag() == 0.0);
        CHECK(pair.v1(x).imag() == 0.0);
        CHECK(pair.v2(x).imag() == 0.0);
        CHECK(psi(x).imag() == 0.0);
        CHECK(r(x).imag() == 0.0);
      }
    }
}

TEST_CASE("hierarchy in fixed-k mode") {
  const auto one = hierarchy(family(Variant::Tangent, 1.0, 2.0), 1);
  REQUIRE(one.size() == 1);
  CHECK(close(one[0].w(0.0), cplx(0.0, 2.0)));
  CHECK(close(one[0].potentials.v1(0.0), -5.0));
  CHECK(close(one[0].potentials.v2(0.0), -3.0));
  CHECK(one[0].e0 == 0.0);
  CHECK_FALSE(one[0].poles_inside_domain());

  const auto levels = hierarchy(family(Variant::Tangent, 1.0, 0.0), 3);
  REQUIRE(levels.size() == 3);
  // oracle: dense diagonalization of each level's V1 on a fine grid
  const Grid g = Grid::symmetric(pi / 2, 401);
  const double expected[] = {0.0, 3.0, 8.0};
  for (int j = 0; j < 3; ++j) {
    CHECK(levels[j].level == j + 1);
    CHECK(levels[j].e0 == expected[j]);
    for (double x : {-1.2, 0.0, 0.7}) {
      const double sec2 = 1.0 / (std::cos(x) * std::cos(x));
      CHECK(close(levels[j].potentials.v1(x), (j + 1) * j * sec2 - 1.0, 1e-10));
    }
    // q = 0: the matrix is real symmetric
    const Eigen::MatrixXd dense = discretize(levels[j].potentials.v1, g).dense().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    CHECK(std::abs(es.eigenvalues()[0] - expected[j]) < 2e-2);
  }
}

TEST_CASE("hierarchy chain: partner of level j is level j + 1 (property)") {
  Gen gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto v = gen.integer(0, 1) ? Variant::Tangent : Variant::Cotangent;
    const auto p = family(v, gen.uniform(0.5, 3.0), gen.uniform(-3.0, 3.0));
    const auto levels = hierarchy(p, 4);
    for (int j = 0; j + 1 < 4; ++j)
      for (double x : probes(p)) {
        const cplx a = levels[j].potentials.v2(x), b = levels[j + 1].potentials.v1(x);
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
      }
  }
}

TEST_CASE("hierarchy in paper-k mode puts poles inside the well") {
  const auto levels = hierarchy(family(Variant::Tangent, 1.0, 2.0), 2, HierarchyMode::PaperK);
  REQUIRE(levels.size() == 2);
  CHECK(levels[0].k == 2.0);
  CHECK(levels[1].k == 3.0);
  CHECK(levels[0].e0 == 0.0);
  CHECK(levels[1].e0 == 3.0);
  CHECK(levels[1].poles_inside_domain());
  const auto& poles = levels[1].interior_poles;
  CHECK(std::any_of(poles.begin(), poles.end(), [](double x) { return std::abs(x - pi / 6) < 1e-12; }));
  CHECK(std::any_of(poles.begin(), poles.end(), [](double x) { return std::abs(x + pi / 6) < 1e-12; }));
  CHECK(levels[0].poles_inside_domain());
}
