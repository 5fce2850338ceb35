#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include "ptsusy/closed_form.hpp"
#include "ptsusy/grid.hpp"

namespace testing {

using ptsusy::cplx;
using std::numbers::pi;

// Seeded generator for the property tests; every case is reproducible.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  cplx complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
  std::size_t odd_size(int lo, int hi) { return std::size_t(2 * integer(lo / 2, hi / 2) + 1); }

  Eigen::VectorXcd vector(Eigen::Index n, double r = 1.0) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v[j] = complex(r);
    return v;
  }

  // sum_m c_m sin(m (x - lo) pi / L): smooth, zero at both walls.
  ptsusy::ClosedFormFunction wall_function(double lo, double hi, int terms = 4) {
    std::vector<cplx> c;
    for (int m = 0; m < terms; ++m) c.push_back(complex() / double(m + 1));
    const double L = hi - lo;
    return ptsusy::ClosedFormFunction::from([c, lo, L](auto x) {
      auto s = 0.0 * x;
      for (std::size_t m = 0; m < c.size(); ++m) s = s + c[m] * sin(double(m + 1) * pi * (x - lo) / L);
      return s;
    });
  }

 private:
  std::mt19937_64 rng_;
};

inline double max_abs_diff(const ptsusy::ComplexGridFunction& a, const ptsusy::ComplexGridFunction& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

inline ptsusy::ComplexGridFunction from_values(const ptsusy::Grid& g, auto f) {
  Eigen::VectorXcd v(Eigen::Index(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) v[Eigen::Index(j)] = f(g.node(j));
  return {g, v};
}

}  // namespace testing
