#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "ptsusy/closed_form.hpp"

namespace ptsusy {

/// Uniform Dirichlet grid on [lo, hi].  The endpoints are walls, not nodes:
/// node j (0-based) sits at center + (j - m) h with m = (n - 1) / 2, so nodes
/// mirror exactly about the center and the center itself is a node.
class Grid {
 public:
  /// Requires lo < hi and an odd n_interior >= 3.
  Grid(double lo, double hi, std::size_t n_interior);
  static Grid symmetric(double half_width, std::size_t n_interior) {
    return Grid(-half_width, half_width, n_interior);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double center() const { return center_; }
  double spacing() const { return h_; }
  std::size_t size() const { return n_; }
  double node(std::size_t j) const;
  Eigen::VectorXd nodes() const;

  bool is_symmetric() const { return center_ == 0.0; }
  /// Largest |x_j + x_{n-1-j}|; zero for a symmetric grid.
  double symmetry_defect() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.n_ == b.n_;
  }

 private:
  double lo_, hi_, center_, h_;
  std::size_t n_;
};

/// Complex samples, one per interior node; every value finite.
class ComplexGridFunction {
 public:
  /// Throws NonFiniteSample on NaN/Inf and std::invalid_argument on a size mismatch.
  ComplexGridFunction(Grid grid, Eigen::VectorXcd values);
  static ComplexGridFunction zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  cplx operator[](std::size_t j) const { return values_[Eigen::Index(j)]; }

  double sup_norm() const;

  friend ComplexGridFunction operator+(const ComplexGridFunction& a, const ComplexGridFunction& b);
  friend ComplexGridFunction operator-(const ComplexGridFunction& a, const ComplexGridFunction& b);
  /// Pointwise product.
  friend ComplexGridFunction operator*(const ComplexGridFunction& a, const ComplexGridFunction& b);
  friend ComplexGridFunction operator*(cplx s, const ComplexGridFunction& a);

 private:
  Grid grid_;
  Eigen::VectorXcd values_;
};

struct ParityParts {
  ComplexGridFunction even;
  ComplexGridFunction odd;
};

/// Throws GridMismatch unless both functions share a grid.
void require_same_grid(const ComplexGridFunction& a, const ComplexGridFunction& b);

/// values[j] = f(x_j).  Throws NonFiniteSample when f hits a pole on a node.
ComplexGridFunction sample(const ClosedFormFunction& f, const Grid& g);

/// u(x) -> u(-x) by index reversal; needs a symmetric grid.
ComplexGridFunction reflect(const ComplexGridFunction& u);

ParityParts parity_decompose(const ComplexGridFunction& u);

/// Composite Simpson over [lo, hi] with zero at both walls.
cplx quadrature(const ComplexGridFunction& u);

/// Real part / imaginary part as real-valued grid functions (imaginary part zero).
ComplexGridFunction real_part(const ComplexGridFunction& u);
ComplexGridFunction imag_part(const ComplexGridFunction& u);

}  // namespace ptsusy
