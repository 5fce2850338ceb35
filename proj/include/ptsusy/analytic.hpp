#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptsusy/closed_form.hpp"

namespace ptsusy {

enum class Variant { Cotangent, Tangent };

/// How the hierarchy assigns wave numbers to levels.
///  FixedK: every level keeps the family's k; level j has W_j = j k tan(kx) + i q sec(kx).
///  PaperK: level j uses k_j = j + 1 literally, which puts poles inside the well.
enum class HierarchyMode { FixedK, PaperK };

std::string to_string(Variant v);
std::string to_string(HierarchyMode m);

/// One member of the cotangent/tangent superpartner family.
struct FamilyParams {
  Variant variant = Variant::Tangent;
  double k = 1.0;      ///< wave number, > 0
  double q = 0.0;      ///< imaginary coupling
  double alpha = 1.0;  ///< shape parameter, > 0
  int n = 1;           ///< hierarchy level, >= 1

  /// Throws UnsupportedParameters when k, alpha or n are out of range.
  void validate() const;
  bool alpha_equals_k() const { return alpha == k; }
};

/// Family member with the alpha = k specialization applied.
FamilyParams family(Variant variant, double k, double q, int n = 1);

/// Half width of the infinite well the family lives in: pi / (2k).
double well_half_width(const FamilyParams& p);
/// Offset mapping the symmetric grid onto the family's natural coordinate.
/// Tangent functions live on (-pi/2k, pi/2k) and need none; cotangent
/// functions live on (0, pi/k) and are sampled at x + pi/2k.
double domain_shift(const FamilyParams& p);
/// The closed form re-expressed on the symmetric coordinate.
ClosedFormFunction on_symmetric_domain(const ClosedFormFunction& f, const FamilyParams& p);

struct PartnerPair {
  ClosedFormFunction v1;  ///< W^2 - W' + e0
  ClosedFormFunction v2;  ///< W^2 + W' + e0
  double e0 = 0.0;
};

/// Unnormalized (sin(kx), cos(kx)).
std::pair<ClosedFormFunction, ClosedFormFunction> square_well_ground_states(double k);

/// W = -psi'/psi.  Evaluating at a zero of psi throws EvaluationAtZero.
ClosedFormFunction superpotential_from_wavefunction(const ClosedFormFunction& psi);

/// The imaginary part that makes the partners shape invariant:
/// q csc(alpha x) (cotangent) or q sec(alpha x) (tangent).
ClosedFormFunction constraint_function(Variant variant, double q, double alpha);

/// -amplitude cot(alpha x) + i f(x)  or  amplitude tan(alpha x) + i f(x).
ClosedFormFunction complexified_superpotential(Variant variant, double amplitude, double alpha,
                                               const ClosedFormFunction& f);

/// Tangent: n k tan(kx) + i q sec(kx); cotangent: -n k cot(kx) + i q csc(kx).
/// Carries its closed-form antiderivative.  Requires alpha == k.
ClosedFormFunction build_superpotential(const FamilyParams& p);

PartnerPair partner_pair_from_superpotential(const ClosedFormFunction& w, double e0 = 0.0);

/// Direct assembly of the level-n potential and its partner,
///   V_n     = [n(n-1)k^2 - q^2] sec^2(kx) - k^2 + i(2n-1) q k tan(kx) sec(kx),
///   V_n+1   = [n(n+1)k^2 - q^2] sec^2(kx) - k^2 + i(2n+1) q k tan(kx) sec(kx),
/// (csc/cot with the opposite imaginary sign for the cotangent family), with
/// e0 = k^2 (n^2 - 1).  Requires alpha == k.
PartnerPair closed_form_potentials(const FamilyParams& p);

/// R(x) = V2(a, x) - V1(a + alpha, x) for W_a = a tan(alpha x) + i f (or the
/// cotangent analogue), a = n k.  With f = constraint_function(...) the
/// result is the constant alpha (alpha + 2 n k).
ClosedFormFunction shape_invariance_remainder(const FamilyParams& p);
ClosedFormFunction shape_invariance_remainder(const FamilyParams& p, const ClosedFormFunction& f);

/// (2n + 1) k_n^2.
double remainder_value(int n, double k_n);
/// n (n + 2).
double energy_spectrum(int n);
/// k_n = n + 1.
int wave_number(int n);

/// Tangent: cos^n(kx) exp{-i (q/k) ln[sec(kx) + tan(kx)]};
/// cotangent: sin^n(kx) exp{-i (q/k) ln[csc(kx) - cot(kx)]}.  Unnormalized,
/// principal logarithm.  Throws BranchViolation when the logarithm argument
/// is not positive somewhere in `domain` (natural coordinate; defaults to
/// the open well) or at an evaluation point.
ClosedFormFunction ground_state_wavefunction(const FamilyParams& p,
                                             std::optional<std::pair<double, double>> domain = {});

/// f with f(anchor) = 0 and f' = W.  Uses W's closed-form antiderivative when
/// it has one, otherwise composite Simpson from the anchor (PoleOnPath if a
/// pole of W lies between anchor and x).
ClosedFormFunction exponent_from_superpotential(const ClosedFormFunction& w, double anchor);

struct HierarchyLevel {
  int level = 1;
  double k = 1.0;
  ClosedFormFunction w;
  PartnerPair potentials;
  double e0 = 0.0;
  ClosedFormFunction ground_state;
  /// Poles of W strictly inside the family's well, in the natural coordinate.
  std::vector<double> interior_poles;
  bool poles_inside_domain() const { return !interior_poles.empty(); }
};

/// Levels 1..depth.  E0 of level j is k^2 (j^2 - 1) in FixedK mode and
/// (j - 1)(j + 1) in PaperK mode.
std::vector<HierarchyLevel> hierarchy(const FamilyParams& p, int depth,
                                      HierarchyMode mode = HierarchyMode::FixedK);

}  // namespace ptsusy
