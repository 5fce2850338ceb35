#include "ptsusy/operators.hpp"

#include <array>
#include <cmath>
#include <span>

#include "ptsusy/errors.hpp"
#include "ptsusy/symmetry.hpp"

namespace ptsusy {

namespace {

// Fornberg's recursion: weights c[d][i] approximating the d-th derivative at
// z from samples at xs[i], for d = 0..m.
template <std::size_t N>
std::array<std::array<double, N>, 3> fornberg(double z, const std::array<double, N>& xs) {
  constexpr int m = 2;
  std::array<std::array<double, N>, 3> c{};
  double c1 = 1.0;
  double c4 = xs[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < N; ++i) {
    const int mn = std::min<int>(int(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

// Closures at the node next to the left wall, offsets in units of h; offset
// -1 is the wall itself.
const auto kClosure1 = fornberg<5>(0.0, {-1.0, 0.0, 1.0, 2.0, 3.0})[1];
const auto kClosure2 = fornberg<6>(0.0, {-1.0, 0.0, 1.0, 2.0, 3.0, 4.0})[2];

void require_stencil_size(const ComplexGridFunction& u) {
  if (u.size() < 7) throw std::invalid_argument("derivative stencils need at least 7 nodes");
}

ComplexGridFunction sample_on_grid(const ClosedFormFunction& f, const Grid& g) {
  try {
    return sample(f, g);
  } catch (const NonFiniteSample& e) {
    throw PoleOnGrid(e.index, e.x);
  }
}

}  // namespace

ComplexGridFunction derivative1(const ComplexGridFunction& u) {
  require_stencil_size(u);
  const auto& v = u.values();
  const Eigen::Index n = v.size();
  const double h = u.grid().spacing();
  auto at = [&](Eigen::Index j) { return (j < 0 || j >= n) ? cplx(0.0) : v[j]; };
  Eigen::VectorXcd d(n);
  for (Eigen::Index j = 1; j < n - 1; ++j) {
    d[j] = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h);
  }
  cplx left(0.0), right(0.0);
  for (std::size_t i = 1; i < kClosure1.size(); ++i) {
    left += kClosure1[i] * v[Eigen::Index(i - 1)];
    right -= kClosure1[i] * v[n - Eigen::Index(i)];
  }
  d[0] = left / h;
  d[n - 1] = right / h;
  return {u.grid(), std::move(d)};
}

ComplexGridFunction derivative2(const ComplexGridFunction& u) {
  require_stencil_size(u);
  const auto& v = u.values();
  const Eigen::Index n = v.size();
  const double h2 = u.grid().spacing() * u.grid().spacing();
  auto at = [&](Eigen::Index j) { return (j < 0 || j >= n) ? cplx(0.0) : v[j]; };
  Eigen::VectorXcd d(n);
  for (Eigen::Index j = 1; j < n - 1; ++j) {
    d[j] = (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) - at(j + 2)) / (12.0 * h2);
  }
  cplx left(0.0), right(0.0);
  for (std::size_t i = 1; i < kClosure2.size(); ++i) {
    left += kClosure2[i] * v[Eigen::Index(i - 1)];
    right += kClosure2[i] * v[n - Eigen::Index(i)];
  }
  d[0] = left / h2;
  d[n - 1] = right / h2;
  return {u.grid(), std::move(d)};
}

ComplexGridFunction apply_ladder(const LadderOperator& op, const ComplexGridFunction& psi) {
  const ClosedFormFunction w = op.conjugate_w ? op.w.conjugated() : op.w;
  return cplx(op.derivative_sign) * derivative1(psi) + sample_on_grid(w, psi.grid()) * psi;
}

ClosedFormFunction apply_ladder(const LadderOperator& op, const ClosedFormFunction& psi) {
  const ClosedFormFunction w = op.conjugate_w ? op.w.conjugated() : op.w;
  return cplx(op.derivative_sign) * psi.derivative() + w * psi;
}

ComplexGridFunction hamiltonian_apply(const ClosedFormFunction& v, const ComplexGridFunction& psi) {
  return sample_on_grid(v, psi.grid()) * psi - derivative2(psi);
}

ClosedFormFunction hamiltonian_apply(const ClosedFormFunction& v, const ClosedFormFunction& psi) {
  return v * psi - psi.derivative().derivative();
}

FactorizationResidual factorization_residual(const ClosedFormFunction& w, const PartnerPair& pair,
                                             const ComplexGridFunction& psi, Adjoint adjoint) {
  const auto a = LadderOperator::annihilation(w);
  const auto b = adjoint == Adjoint::APT ? LadderOperator::apt_conjugate(w)
                                         : LadderOperator::hermitian_adjoint(w);
  const auto h1 = apply_ladder(b, apply_ladder(a, psi));
  const auto h2 = apply_ladder(a, apply_ladder(b, psi));
  const auto ref1 = hamiltonian_apply(pair.v1 + cplx(-pair.e0), psi);
  const auto ref2 = hamiltonian_apply(pair.v2 + cplx(-pair.e0), psi);
  return {(h1 - ref1).sup_norm(), (h2 - ref2).sup_norm()};
}

double apt_partner_relation_check(const ClosedFormFunction& w, const ComplexGridFunction& psi) {
  if (!psi.grid().is_symmetric()) throw AsymmetricGrid();
  const auto a = LadderOperator::annihilation(w);
  const auto b = LadderOperator::apt_conjugate(w);
  const auto apt = [](const ComplexGridFunction& u) {
    return apply_conjugation(ConjugationStrategy::APT, u);
  };
  const auto h1 = apply_ladder(b, apply_ladder(a, psi));
  const auto h2_conj = apt(apply_ladder(a, apply_ladder(b, apt(psi))));
  return (h2_conj - h1).sup_norm();
}

ClosedFormFunction excited_state_closed_form(const FamilyParams& p, int j) {
  p.validate();
  if (j < 0) throw UnsupportedParameters("excited state index must be >= 0");
  ClosedFormFunction state = ground_state_wavefunction(family(p.variant, p.k, p.q, j + 1));
  for (int level = j; level >= 1; --level) {
    const auto w = build_superpotential(family(p.variant, p.k, p.q, level));
    state = apply_ladder(LadderOperator::apt_conjugate(w), state);
  }
  return state;
}

std::vector<ExcitedState> build_excited_states(const FamilyParams& p, int count, const Grid& grid,
                                               HierarchyMode mode) {
  if (mode != HierarchyMode::FixedK) {
    throw UnsupportedMode("excited states are built from the fixed-k hierarchy only");
  }
  if (count < 1 || count > 8) throw UnsupportedParameters("excited state count must be in 1..8");
  const FamilyParams base = family(p.variant, p.k, p.q, 1);
  const ClosedFormFunction v1 = on_symmetric_domain(closed_form_potentials(base).v1, base);

  std::vector<ExcitedState> out;
  out.reserve(std::size_t(count));
  for (int j = 0; j < count; ++j) {
    const double energy = p.k * p.k * (double(j + 1) * double(j + 1) - 1.0);
    const ClosedFormFunction psi = on_symmetric_domain(excited_state_closed_form(base, j), base);
    const ClosedFormFunction exact_residual = hamiltonian_apply(v1, psi) + (-energy) * psi;

    const ComplexGridFunction raw = sample_on_grid(psi, grid);
    const double residual = sample_on_grid(exact_residual, grid).sup_norm() / raw.sup_norm();
    ComplexGridFunction state = normalize_state(raw);
    const double grid_residual =
        (hamiltonian_apply(v1, state) - cplx(energy) * state).sup_norm() / state.sup_norm();
    out.push_back({j, energy, std::move(state), residual, grid_residual});
  }
  return out;
}

}  // namespace ptsusy
