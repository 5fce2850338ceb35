#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ptsusy/taylor.hpp"

namespace ptsusy {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

/// A union of arithmetic progressions {offset + m * period : m in Z}.  A period
/// of zero denotes the single point `offset`.  Used for poles and zeros of the
/// trigonometric families, which repeat forever.
class PointSet {
 public:
  struct Lattice {
    double offset = 0.0;
    double period = 0.0;
  };

  PointSet() = default;
  static PointSet single(double x) { return PointSet({{x, 0.0}}); }
  static PointSet periodic(double offset, double period) { return PointSet({{offset, period}}); }

  bool empty() const { return lattices_.empty(); }
  const std::vector<Lattice>& lattices() const { return lattices_; }

  PointSet united(const PointSet& other) const;
  /// Points of x -> f(x + dx) given the points of f.
  PointSet shifted(double dx) const;
  /// Points of x -> f(-x).
  PointSet reflected() const;

  /// Sorted points in the closed interval [a, b] (duplicates removed).
  std::vector<double> in(double a, double b) const;
  /// Points strictly inside (a, b), ignoring those within `margin` of either end.
  std::vector<double> inside(double a, double b, double margin = 1e-12) const;
  bool contains(double x, double tol = 1e-12) const;

 private:
  explicit PointSet(std::vector<Lattice> l) : lattices_(std::move(l)) {}
  std::vector<Lattice> lattices_;
};

/// An analytic complex function of a real variable.  Evaluation returns a
/// Taylor jet, so value and derivatives come from one call and every
/// composition below stays exact (no finite differences).
class ClosedFormFunction {
 public:
  using JetFn = std::function<Jet(double)>;

  /// The zero function.
  ClosedFormFunction();
  ClosedFormFunction(JetFn fn, PointSet poles = {}, PointSet zeros = {});

  /// Build from a generic callable `f(auto x)` written with ordinary math
  /// (sin, cos, tan, exp, log, pow, arithmetic).
  template <typename F>
  static ClosedFormFunction from(F f, PointSet poles = {}, PointSet zeros = {}) {
    return ClosedFormFunction([f](double x) { return Jet(f(Jet::variable(x))); }, std::move(poles),
                              std::move(zeros));
  }
  static ClosedFormFunction constant(cplx c);

  Jet jet(double x) const { return fn_(x); }
  cplx eval(double x) const { return fn_(x).value(); }
  cplx operator()(double x) const { return eval(x); }
  cplx deriv1(double x) const { return fn_(x).derivative(1); }
  cplx deriv2(double x) const { return fn_(x).derivative(2); }
  cplx derivative(double x, int k) const { return fn_(x).derivative(k); }

  const PointSet& poles() const { return poles_; }
  /// Known zeros; empty when unknown.
  const PointSet& zeros() const { return zeros_; }

  ClosedFormFunction derivative() const;
  /// x -> f(x + dx).
  ClosedFormFunction shifted(double dx) const;
  /// x -> conj(f(x)) for real x.
  ClosedFormFunction conjugated() const;
  /// x -> f(-x).
  ClosedFormFunction reflected() const;

  /// Attach a known antiderivative F (F' = f).  Any additive constant.
  ClosedFormFunction with_antiderivative(JetFn antiderivative) const;
  template <typename F>
  ClosedFormFunction with_antiderivative_from(F f) const {
    return with_antiderivative([f](double x) { return Jet(f(Jet::variable(x))); });
  }
  bool has_antiderivative() const { return antiderivative_.has_value(); }
  const std::optional<JetFn>& antiderivative() const { return antiderivative_; }

  ClosedFormFunction operator-() const;
  friend ClosedFormFunction operator+(const ClosedFormFunction& a, const ClosedFormFunction& b);
  friend ClosedFormFunction operator-(const ClosedFormFunction& a, const ClosedFormFunction& b);
  friend ClosedFormFunction operator*(const ClosedFormFunction& a, const ClosedFormFunction& b);
  friend ClosedFormFunction operator/(const ClosedFormFunction& a, const ClosedFormFunction& b);
  friend ClosedFormFunction operator*(cplx s, const ClosedFormFunction& a);
  friend ClosedFormFunction operator+(const ClosedFormFunction& a, cplx s);

 private:
  JetFn fn_;
  PointSet poles_;
  PointSet zeros_;
  std::optional<JetFn> antiderivative_;
};

}  // namespace ptsusy
