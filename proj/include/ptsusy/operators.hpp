#pragma once

#include <vector>

#include "ptsusy/analytic.hpp"
#include "ptsusy/closed_form.hpp"
#include "ptsusy/grid.hpp"

namespace ptsusy {

/// d/dx on a Dirichlet grid: 4th-order centered stencil, the wall value 0 as
/// the ghost at the first interior neighbor, and a 4th-order one-sided
/// closure at the two nodes adjacent to the walls.
ComplexGridFunction derivative1(const ComplexGridFunction& u);
/// d^2/dx^2 with the same conventions.
ComplexGridFunction derivative2(const ComplexGridFunction& u);

/// derivative_sign * d/dx + W, with W conjugated for the Hermitian adjoint.
struct LadderOperator {
  ClosedFormFunction w;
  int derivative_sign = +1;
  bool conjugate_w = false;

  /// A = d/dx + W
  static LadderOperator annihilation(ClosedFormFunction w) { return {std::move(w), +1, false}; }
  /// A^APT = -d/dx + W
  static LadderOperator apt_conjugate(ClosedFormFunction w) { return {std::move(w), -1, false}; }
  /// A^dagger = -d/dx + conj(W)
  static LadderOperator hermitian_adjoint(ClosedFormFunction w) { return {std::move(w), -1, true}; }
};

/// Which first-order operator pairs with A in the factorization.
enum class Adjoint { APT, Hermitian };

/// Grid route (finite differences).  Throws PoleOnGrid when W is not finite on a node.
ComplexGridFunction apply_ladder(const LadderOperator& op, const ComplexGridFunction& psi);
/// Closed-form route (exact derivatives).
ClosedFormFunction apply_ladder(const LadderOperator& op, const ClosedFormFunction& psi);

/// -psi'' + V psi (hbar = 2m = 1).
ComplexGridFunction hamiltonian_apply(const ClosedFormFunction& v, const ComplexGridFunction& psi);
ClosedFormFunction hamiltonian_apply(const ClosedFormFunction& v, const ClosedFormFunction& psi);

struct FactorizationResidual {
  double h1 = 0.0;  ///< sup |B A psi - (-psi'' + (v1 - e0) psi)|
  double h2 = 0.0;  ///< sup |A B psi - (-psi'' + (v2 - e0) psi)|
};

/// B = A^APT or A^dagger per `adjoint`.
FactorizationResidual factorization_residual(const ClosedFormFunction& w, const PartnerPair& pair,
                                             const ComplexGridFunction& psi,
                                             Adjoint adjoint = Adjoint::APT);

/// sup |L(H2(L psi)) - H1 psi| with L the APT map, H1 = A^APT A, H2 = A A^APT.
double apt_partner_relation_check(const ClosedFormFunction& w, const ComplexGridFunction& psi);

struct ExcitedState {
  int index = 0;
  double energy = 0.0;
  ComplexGridFunction state;  ///< normalized, phase fixed
  /// sup |H1 psi - E psi| / sup |psi| with derivatives taken exactly.
  double residual = 0.0;
  /// Same quantity with the finite-difference Hamiltonian on the grid.
  double grid_residual = 0.0;
};

/// State j = A_1^APT ... A_j^APT psi0^(j+1), levels from the FixedK
/// hierarchy, for j = 0..count-1, E_j = k^2 ((j+1)^2 - 1).  Cotangent
/// families are sampled through the domain shift.  count <= 8.
std::vector<ExcitedState> build_excited_states(const FamilyParams& p, int count, const Grid& grid,
                                               HierarchyMode mode = HierarchyMode::FixedK);

/// Closed-form excited state j (unnormalized, natural coordinate).
ClosedFormFunction excited_state_closed_form(const FamilyParams& p, int j);

}  // namespace ptsusy
