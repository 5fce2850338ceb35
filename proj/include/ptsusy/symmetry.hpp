#pragma once

#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ptsusy/closed_form.hpp"
#include "ptsusy/grid.hpp"

namespace ptsusy {

/// Antilinear maps used inside inner products.
///   Hermitian: u(x) -> conj(u(x))
///   PT:        u(x) -> conj(u(-x))
///   APT:       u(x) -> -conj(u(-x))
enum class ConjugationStrategy { Hermitian, PT, APT };

std::string to_string(ConjugationStrategy s);
/// Accepts "hermitian", "pt", "apt"; throws std::invalid_argument otherwise.
ConjugationStrategy parse_conjugation(std::string_view name);

/// Throws AsymmetricGrid for PT/APT on a grid not centered at 0.
ComplexGridFunction apply_conjugation(ConjugationStrategy s, const ComplexGridFunction& u);

struct SymmetryReport {
  bool is_pt_symmetric = false;
  bool is_apt_symmetric = false;
  double pt_defect = 0.0;   ///< sup |u - PT u|
  double apt_defect = 0.0;  ///< sup |u - APT u|
  double tolerance = 0.0;
  // Sup norms of the parity parts of Re u and Im u.
  double real_even = 0.0;
  double real_odd = 0.0;
  double imag_even = 0.0;
  double imag_odd = 0.0;
};

/// Both defects and verdicts are always filled; the two names document intent.
SymmetryReport classify(const ComplexGridFunction& u, double tol);
inline SymmetryReport classify_pt(const ComplexGridFunction& u, double tol) { return classify(u, tol); }
inline SymmetryReport classify_apt(const ComplexGridFunction& u, double tol) { return classify(u, tol); }

/// Simpson quadrature of (s phi) * psi.  Throws GridMismatch.
cplx inner_product(const ComplexGridFunction& phi, const ComplexGridFunction& psi,
                   ConjugationStrategy s);

struct GramMatrix {
  ConjugationStrategy strategy = ConjugationStrategy::Hermitian;
  Eigen::MatrixXcd entries;
  double max_off_diagonal = 0.0;
  /// max_m |G_mm - 1|
  double max_diagonal_defect = 0.0;
};

GramMatrix gram_matrix(std::span<const ComplexGridFunction> states, ConjugationStrategy s);

/// N = 1 / sqrt( int exp{-2 f_even(Re f)} dx ).  Throws DivergentNorm when the
/// integral overflows.
double normalization_constant(const ClosedFormFunction& f, const Grid& g);

/// Scale to unit Hermitian norm and fix the phase: the center value is made
/// real-positive, or the first node of maximal modulus when the center
/// vanishes.
ComplexGridFunction normalize_state(const ComplexGridFunction& u);

}  // namespace ptsusy
