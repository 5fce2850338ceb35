#include "ptsusy/symmetry.hpp"

#include <cmath>
#include <stdexcept>

#include "ptsusy/errors.hpp"

namespace ptsusy {

std::string to_string(ConjugationStrategy s) {
  switch (s) {
    case ConjugationStrategy::Hermitian:
      return "hermitian";
    case ConjugationStrategy::PT:
      return "pt";
    case ConjugationStrategy::APT:
      return "apt";
  }
  return "unknown";
}

ConjugationStrategy parse_conjugation(std::string_view name) {
  if (name == "hermitian") return ConjugationStrategy::Hermitian;
  if (name == "pt") return ConjugationStrategy::PT;
  if (name == "apt") return ConjugationStrategy::APT;
  throw std::invalid_argument("unknown conjugation strategy '" + std::string(name) + "'");
}

ComplexGridFunction apply_conjugation(ConjugationStrategy s, const ComplexGridFunction& u) {
  switch (s) {
    case ConjugationStrategy::Hermitian:
      return {u.grid(), u.values().conjugate()};
    case ConjugationStrategy::PT:
      if (!u.grid().is_symmetric()) throw AsymmetricGrid();
      return {u.grid(), u.values().reverse().conjugate()};
    case ConjugationStrategy::APT:
      if (!u.grid().is_symmetric()) throw AsymmetricGrid();
      return {u.grid(), -u.values().reverse().conjugate()};
  }
  throw std::logic_error("unhandled conjugation strategy");
}

SymmetryReport classify(const ComplexGridFunction& u, double tol) {
  SymmetryReport r;
  r.tolerance = tol;
  r.pt_defect = (u - apply_conjugation(ConjugationStrategy::PT, u)).sup_norm();
  r.apt_defect = (u - apply_conjugation(ConjugationStrategy::APT, u)).sup_norm();
  r.is_pt_symmetric = r.pt_defect <= tol;
  r.is_apt_symmetric = r.apt_defect <= tol;

  const ParityParts re = parity_decompose(real_part(u));
  const ParityParts im = parity_decompose(imag_part(u));
  r.real_even = re.even.sup_norm();
  r.real_odd = re.odd.sup_norm();
  r.imag_even = im.even.sup_norm();
  r.imag_odd = im.odd.sup_norm();
  return r;
}

cplx inner_product(const ComplexGridFunction& phi, const ComplexGridFunction& psi,
                   ConjugationStrategy s) {
  require_same_grid(phi, psi);
  return quadrature(apply_conjugation(s, phi) * psi);
}

GramMatrix gram_matrix(std::span<const ComplexGridFunction> states, ConjugationStrategy s) {
  GramMatrix g;
  g.strategy = s;
  const auto n = Eigen::Index(states.size());
  g.entries.resize(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      g.entries(m, k) = inner_product(states[std::size_t(m)], states[std::size_t(k)], s);
      if (m == k) {
        g.max_diagonal_defect = std::max(g.max_diagonal_defect, std::abs(g.entries(m, k) - 1.0));
      } else {
        g.max_off_diagonal = std::max(g.max_off_diagonal, std::abs(g.entries(m, k)));
      }
    }
  }
  return g;
}

double normalization_constant(const ClosedFormFunction& f, const Grid& g) {
  const ComplexGridFunction even = parity_decompose(real_part(sample(f, g))).even;
  Eigen::VectorXcd weight(Eigen::Index(g.size()));
  for (Eigen::Index j = 0; j < weight.size(); ++j) {
    const double v = std::exp(-2.0 * even.values()[j].real());
    if (!std::isfinite(v)) throw DivergentNorm(v);
    weight[j] = v;
  }
  const double integral = quadrature(ComplexGridFunction(g, std::move(weight))).real();
  if (!std::isfinite(integral) || integral > 1e300 || !(integral > 0.0)) {
    throw DivergentNorm(integral);
  }
  return 1.0 / std::sqrt(integral);
}

ComplexGridFunction normalize_state(const ComplexGridFunction& u) {
  const double norm2 = inner_product(u, u, ConjugationStrategy::Hermitian).real();
  if (!(norm2 > 0.0)) throw std::invalid_argument("cannot normalize a zero state");
  const auto& v = u.values();
  const Eigen::Index center = (v.size() - 1) / 2;
  Eigen::Index anchor = center;
  const double peak = v.cwiseAbs().maxCoeff();
  if (std::abs(v[center]) <= 1e-8 * peak) v.cwiseAbs().maxCoeff(&anchor);
  const cplx phase = std::abs(v[anchor]) > 0.0 ? std::conj(v[anchor]) / std::abs(v[anchor]) : 1.0;
  return (phase / std::sqrt(norm2)) * u;
}

}  // namespace ptsusy
