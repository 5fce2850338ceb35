#include "ptsusy/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ptsusy/errors.hpp"

namespace ptsusy {

Grid::Grid(double lo, double hi, std::size_t n_interior) : lo_(lo), hi_(hi), n_(n_interior) {
  if (!(lo < hi)) throw std::invalid_argument("grid requires lo < hi");
  if (n_interior < 3) throw std::invalid_argument("grid requires at least 3 interior nodes");
  if (n_interior % 2 == 0) throw std::invalid_argument("grid requires an odd interior node count");
  center_ = (lo == -hi) ? 0.0 : 0.5 * (lo + hi);
  h_ = (hi - lo) / double(n_interior + 1);
}

double Grid::node(std::size_t j) const {
  const auto m = static_cast<long long>((n_ - 1) / 2);
  const auto offset = static_cast<long long>(j) - m;
  return center_ + double(offset) * h_;
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(n_));
  for (std::size_t j = 0; j < n_; ++j) x[Eigen::Index(j)] = node(j);
  return x;
}

double Grid::symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    worst = std::max(worst, std::abs((node(j) - center_) + (node(n_ - 1 - j) - center_)));
  }
  return worst;
}

ComplexGridFunction::ComplexGridFunction(Grid grid, Eigen::VectorXcd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != Eigen::Index(grid_.size())) {
    throw std::invalid_argument("grid function has " + std::to_string(values_.size()) +
                                " values for " + std::to_string(grid_.size()) + " nodes");
  }
  for (Eigen::Index j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag())) {
      throw NonFiniteSample(std::size_t(j), grid_.node(std::size_t(j)));
    }
  }
}

ComplexGridFunction ComplexGridFunction::zeros(const Grid& grid) {
  return {grid, Eigen::VectorXcd::Zero(Eigen::Index(grid.size()))};
}

double ComplexGridFunction::sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

void require_same_grid(const ComplexGridFunction& a, const ComplexGridFunction& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch();
}

ComplexGridFunction operator+(const ComplexGridFunction& a, const ComplexGridFunction& b) {
  require_same_grid(a, b);
  return {a.grid_, a.values_ + b.values_};
}

ComplexGridFunction operator-(const ComplexGridFunction& a, const ComplexGridFunction& b) {
  require_same_grid(a, b);
  return {a.grid_, a.values_ - b.values_};
}

ComplexGridFunction operator*(const ComplexGridFunction& a, const ComplexGridFunction& b) {
  require_same_grid(a, b);
  return {a.grid_, a.values_.cwiseProduct(b.values_)};
}

ComplexGridFunction operator*(cplx s, const ComplexGridFunction& a) { return {a.grid_, s * a.values_}; }

ComplexGridFunction sample(const ClosedFormFunction& f, const Grid& g) {
  Eigen::VectorXcd v(Eigen::Index(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const cplx y = f.eval(x);
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) throw NonFiniteSample(j, x);
    v[Eigen::Index(j)] = y;
  }
  return {g, std::move(v)};
}

ComplexGridFunction reflect(const ComplexGridFunction& u) {
  if (!u.grid().is_symmetric()) throw AsymmetricGrid();
  return {u.grid(), u.values().reverse()};
}

ParityParts parity_decompose(const ComplexGridFunction& u) {
  const Eigen::VectorXcd r = reflect(u).values();
  return {ComplexGridFunction(u.grid(), 0.5 * (u.values() + r)),
          ComplexGridFunction(u.grid(), 0.5 * (u.values() - r))};
}

cplx quadrature(const ComplexGridFunction& u) {
  // Interior node j (1-based) carries Simpson weight 4 when j is odd, 2 when even;
  // the walls carry weight 1 but contribute zero.  Mirror nodes share a weight
  // and are added in pairs so odd integrands cancel exactly.
  const auto& v = u.values();
  const Eigen::Index n = v.size();
  const Eigen::Index m = (n - 1) / 2;
  cplx odd_sum(0.0), even_sum(0.0);
  for (Eigen::Index j = 0; j < m; ++j) {
    const cplx pair = v[j] + v[n - 1 - j];
    if (j % 2 == 0) {
      odd_sum += pair;
    } else {
      even_sum += pair;
    }
  }
  (m % 2 == 0 ? odd_sum : even_sum) += v[m];
  return u.grid().spacing() / 3.0 * (4.0 * odd_sum + 2.0 * even_sum);
}

ComplexGridFunction real_part(const ComplexGridFunction& u) {
  return {u.grid(), u.values().real().cast<cplx>()};
}

ComplexGridFunction imag_part(const ComplexGridFunction& u) {
  return {u.grid(), u.values().imag().cast<cplx>()};
}

}  // namespace ptsusy
