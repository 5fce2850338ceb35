#include <doctest.h>

#include <cmath>
#include <vector>

#include "ptsusy/analytic.hpp"
#include "ptsusy/errors.hpp"
#include "ptsusy/symmetry.hpp"
#include "support.hpp"

using namespace ptsusy;
using testing::Gen;
using testing::from_values;
using testing::max_abs_diff;
using testing::pi;

namespace {

const ConjugationStrategy kAll[] = {ConjugationStrategy::Hermitian, ConjugationStrategy::PT,
                                    ConjugationStrategy::APT};

Grid well(std::size_t n = 4001) { return Grid::symmetric(pi / 2, n); }

// sqrt(2/pi) times cos(m x) (m odd) or sin(m x) (m even): the real well eigenstates.
ComplexGridFunction well_state(const Grid& g, int m) {
  const double c = std::sqrt(2.0 / pi);
  return from_values(g, [=](double x) { return cplx(c * (m % 2 ? std::cos(m * x) : std::sin(m * x))); });
}

}  // namespace

TEST_CASE("conjugation strategies by name") {
  CHECK(parse_conjugation("hermitian") == ConjugationStrategy::Hermitian);
  CHECK(parse_conjugation("pt") == ConjugationStrategy::PT);
  CHECK(parse_conjugation("apt") == ConjugationStrategy::APT);
  CHECK_THROWS_AS(parse_conjugation("cpt"), std::invalid_argument);
  for (auto s : kAll) CHECK(parse_conjugation(to_string(s)) == s);
}

TEST_CASE("apply_conjugation examples") {
  const Grid g = well(201);
  const auto ic = from_values(g, [](double x) { return cplx(0.0, std::cos(x)); });
  const auto is = from_values(g, [](double x) { return cplx(0.0, std::sin(x)); });
  const auto ptsym = from_values(g, [](double x) { return cplx(std::cos(x), std::sin(x)); });
  CHECK(max_abs_diff(apply_conjugation(ConjugationStrategy::APT, ic), ic) == 0.0);
  CHECK(max_abs_diff(apply_conjugation(ConjugationStrategy::APT, is), cplx(-1.0) * is) == 0.0);
  CHECK(max_abs_diff(apply_conjugation(ConjugationStrategy::PT, ptsym), ptsym) <= 1e-15);
  const auto h = apply_conjugation(ConjugationStrategy::Hermitian, ptsym);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(h[j] == std::conj(ptsym[j]));

  const auto off = ComplexGridFunction::zeros(Grid(0.0, pi, 11));
  CHECK_THROWS_AS(apply_conjugation(ConjugationStrategy::PT, off), AsymmetricGrid);
  CHECK_THROWS_AS(apply_conjugation(ConjugationStrategy::APT, off), AsymmetricGrid);
  CHECK_NOTHROW(apply_conjugation(ConjugationStrategy::Hermitian, off));
}

TEST_CASE("conjugations are antilinear involutions (property)") {
  Gen gen(29);
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = Grid::symmetric(gen.uniform(0.5, 4.0), gen.odd_size(3, 301));
    const ComplexGridFunction u(g, gen.vector(Eigen::Index(g.size()), 5.0));
    const cplx a = gen.complex(4.0);
    for (auto s : kAll) {
      CHECK(max_abs_diff(apply_conjugation(s, a * u), std::conj(a) * apply_conjugation(s, u)) <= 1e-12);
      CHECK(max_abs_diff(apply_conjugation(s, apply_conjugation(s, u)), u) == 0.0);
    }
    CHECK(max_abs_diff(apply_conjugation(ConjugationStrategy::APT, u),
                       cplx(-1.0) * apply_conjugation(ConjugationStrategy::PT, u)) <= 1e-15);
  }
}

TEST_CASE("classify examples") {
  const auto p = family(Variant::Tangent, 1.0, 2.0);
  const auto pair = closed_form_potentials(p);
  const Grid g = well();
  const auto v1 = sample(pair.v1, g);
  const auto v2 = sample(pair.v2, g);
  // sampled potentials reach ~1e7 near the walls; the identity holds to rounding
  const auto r1 = classify_pt(v1, 1e-8 * v1.sup_norm());
  const auto r2 = classify_pt(v2, 1e-8 * v2.sup_norm());
  CHECK(r1.is_pt_symmetric);
  CHECK(r2.is_pt_symmetric);
  CHECK(r1.real_odd <= 1e-8 * v1.sup_norm());
  CHECK(r1.imag_even <= 1e-8 * v1.sup_norm());
  CHECK(r1.real_even > 1.0);
  CHECK(r1.imag_odd > 1.0);

  const auto xix = from_values(g, [](double x) { return cplx(x, x); });
  CHECK_FALSE(classify_pt(xix, 1e-10).is_pt_symmetric);

  const auto w = sample(build_superpotential(p), g);
  const auto rw = classify_apt(w, 1e-8 * w.sup_norm());
  CHECK(rw.is_apt_symmetric);
  CHECK_FALSE(rw.is_pt_symmetric);

  // cotangent superpotential sampled through the shift is APT about the well center
  const auto pc = family(Variant::Cotangent, 1.0, 2.0);
  const auto wc = sample(on_symmetric_domain(build_superpotential(pc), pc), g);
  CHECK(classify_apt(wc, 1e-8 * wc.sup_norm()).is_apt_symmetric);

  const auto c = from_values(g, [](double x) { return cplx(std::cos(x)); });
  const auto rc = classify_apt(c, 1e-10);
  CHECK_FALSE(rc.is_apt_symmetric);
  CHECK(rc.is_pt_symmetric);
  CHECK(rc.apt_defect == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("symmetry of closed-form samples at random parameters (property)") {
  Gen gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const double k = gen.uniform(0.3, 4.0), q = gen.uniform(-5.0, 5.0);
    const auto p = family(Variant::Tangent, k, q);
    const Grid g = Grid::symmetric(well_half_width(p), 201);
    const auto pair = closed_form_potentials(p);
    for (const auto& f : {pair.v1, pair.v2}) {
      const auto u = sample(f, g);
      CHECK(classify_pt(u, 1e-10).pt_defect <= 1e-10 * std::max(1.0, u.sup_norm()));
    }
    const auto w = sample(build_superpotential(p), g);
    CHECK(classify_apt(w, 1e-10).apt_defect <= 1e-10 * std::max(1.0, w.sup_norm()));

    // real-even contamination of 1e-6 breaks APT symmetry
    const auto bump = from_values(g, [&](double x) { return cplx(1e-6 * std::cos(k * x)); });
    const auto r = classify_apt(w + bump, 1e-10 * std::max(1.0, w.sup_norm()));
    CHECK_FALSE(r.is_apt_symmetric);
    CHECK(r.apt_defect >= 1e-6);
  }
}

TEST_CASE("report verdicts follow the tolerance (property)") {
  Gen gen(37);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid g = Grid::symmetric(1.0, gen.odd_size(3, 101));
    const ComplexGridFunction u(g, gen.vector(Eigen::Index(g.size())));
    const double tol = gen.uniform(0.0, 3.0);
    const auto r = classify(u, tol);
    CHECK(r.is_pt_symmetric == (r.pt_defect <= tol));
    CHECK(r.is_apt_symmetric == (r.apt_defect <= tol));
    CHECK(r.tolerance == tol);
  }
}

TEST_CASE("inner products") {
  const Grid g = well();
  const auto c = well_state(g, 1);
  const auto s2 = well_state(g, 2);
  CHECK(std::abs(inner_product(c, c, ConjugationStrategy::Hermitian) - 1.0) <= 1e-8);
  CHECK(std::abs(inner_product(c, s2, ConjugationStrategy::Hermitian)) <= 1e-10);
  CHECK(std::abs(inner_product(c, s2, ConjugationStrategy::PT)) <= 1e-10);

  const auto p = family(Variant::Tangent, 1.0, 2.0);
  const auto psi = normalize_state(sample(ground_state_wavefunction(p), g));
  CHECK(std::abs(inner_product(psi, psi, ConjugationStrategy::Hermitian) - 1.0) <= 1e-8);
  // the Hermitian norm of the complex ground state is the norm of cos x
  const double n = normalization_constant(exponent_from_superpotential(build_superpotential(p), 0.0), g);
  const auto raw = sample(ground_state_wavefunction(p), g);
  CHECK(std::abs(inner_product(raw, raw, ConjugationStrategy::Hermitian) * n * n - 1.0) <= 1e-8);

  CHECK_THROWS_AS(inner_product(c, well_state(well(201), 1), ConjugationStrategy::APT), GridMismatch);
}

TEST_CASE("q = 0 strategies agree up to the APT sign (property)") {
  const Grid g = well(1001);
  std::vector<ComplexGridFunction> states;
  for (int m = 1; m <= 5; ++m) states.push_back(well_state(g, m));
  for (std::size_t a = 0; a < states.size(); ++a)
    for (std::size_t b = 0; b < states.size(); ++b) {
      const cplx h = inner_product(states[a], states[b], ConjugationStrategy::Hermitian);
      const cplx pt = inner_product(states[a], states[b], ConjugationStrategy::PT);
      const cplx apt = inner_product(states[a], states[b], ConjugationStrategy::APT);
      // PT flips the sign of odd real states
      const double parity = (a % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(pt - parity * h) <= 1e-12);
      CHECK(std::abs(apt + pt) <= 1e-12);
    }
}

TEST_CASE("gram matrices") {
  const Grid g = well();
  std::vector<ComplexGridFunction> states;
  for (int m = 1; m <= 4; ++m) states.push_back(well_state(g, m));
  const auto h = gram_matrix(states, ConjugationStrategy::Hermitian);
  CHECK(h.strategy == ConjugationStrategy::Hermitian);
  CHECK((h.entries - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(h.max_off_diagonal <= 1e-8);
  CHECK(h.max_diagonal_defect <= 1e-8);

  const std::vector<ComplexGridFunction> one{states[0]};
  CHECK(std::abs(gram_matrix(one, ConjugationStrategy::Hermitian).entries(0, 0) - 1.0) <= 1e-8);
  CHECK(std::abs(gram_matrix(one, ConjugationStrategy::PT).entries(0, 0) - 1.0) <= 1e-8);
  CHECK(std::abs(gram_matrix(one, ConjugationStrategy::APT).entries(0, 0) + 1.0) <= 1e-8);

  const auto apt = gram_matrix(states, ConjugationStrategy::APT);
  CHECK(apt.max_off_diagonal <= 1e-8);
  CHECK(apt.max_diagonal_defect == doctest::Approx(2.0).epsilon(1e-8));

  std::vector<ComplexGridFunction> mixed{states[0], well_state(well(201), 1)};
  CHECK_THROWS_AS(gram_matrix(mixed, ConjugationStrategy::Hermitian), GridMismatch);
}

TEST_CASE("gram entries are the pairwise inner products (property)") {
  Gen gen(41);
  const Grid g = Grid::symmetric(1.0, 51);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ComplexGridFunction> states;
    for (int m = 0; m < 3; ++m) states.emplace_back(g, gen.vector(51));
    for (auto s : kAll) {
      const auto G = gram_matrix(states, s);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(G.entries(a, b) == inner_product(states[a], states[b], s));
    }
  }
}

TEST_CASE("normalization constants") {
  const Grid g = well();
  const auto lncos = ClosedFormFunction::from([](auto x) { return -log(cos(x)); });
  CHECK(std::abs(normalization_constant(lncos, g) - std::sqrt(2.0 / pi)) <= 1e-8);
  const auto fq = exponent_from_superpotential(build_superpotential(family(Variant::Tangent, 1.0, 2.0)), 0.0);
  CHECK(std::abs(normalization_constant(fq, g) - std::sqrt(2.0 / pi)) <= 1e-8);
  const auto sq = ClosedFormFunction::from([](auto x) { return x * x; });
  CHECK(std::abs(normalization_constant(sq, Grid::symmetric(8.0, 4001)) - std::pow(2.0 / pi, 0.25)) <= 1e-10);
  const auto blow = ClosedFormFunction::from([](auto x) { return -400.0 * x * x; });
  CHECK_THROWS_AS(normalization_constant(blow, Grid::symmetric(2.0, 101)), DivergentNorm);
}

TEST_CASE("normalization constant is independent of q (property)") {
  Gen gen(43);
  for (int trial = 0; trial < 10; ++trial) {
    const double k = gen.uniform(0.5, 3.0);
    const int n = gen.integer(1, 4);
    const Grid g = Grid::symmetric(pi / (2 * k), 801);
    auto nc = [&](double q) {
      return normalization_constant(exponent_from_superpotential(build_superpotential(family(Variant::Tangent, k, q, n)), 0.0), g);
    };
    const double base = nc(0.0);
    CHECK(std::abs(nc(gen.uniform(-5.0, 5.0)) - base) <= 1e-10 * base);
  }
}

TEST_CASE("normalize_state fixes scale and phase") {
  const Grid g = well(201);
  const auto u = from_values(g, [](double x) { return cplx(0.0, 3.0) * std::cos(x); });
  const auto n = normalize_state(u);
  CHECK(std::abs(inner_product(n, n, ConjugationStrategy::Hermitian) - 1.0) <= 1e-12);
  CHECK(n[100].imag() == doctest::Approx(0.0));
  CHECK(n[100].real() > 0.0);

  // center zero: first node of maximal modulus becomes real-positive
  const auto s = from_values(g, [](double x) { return cplx(0.0, -2.0) * std::sin(x); });
  const auto ns = normalize_state(s);
  Eigen::Index imax;
  ns.values().cwiseAbs().maxCoeff(&imax);
  CHECK(std::abs(ns[std::size_t(imax)].imag()) <= 1e-15);
  CHECK(ns[std::size_t(imax)].real() > 0.0);
}
