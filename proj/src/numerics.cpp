#include "ptsusy/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "ptsusy/errors.hpp"
#include "ptsusy/symmetry.hpp"

namespace ptsusy {

Eigen::VectorXcd TridiagonalComplexMatrix::apply(const Eigen::VectorXcd& v) const {
  const Eigen::Index n = dimension();
  Eigen::VectorXcd out = diag.cwiseProduct(v);
  if (n > 1) {
    out.head(n - 1) += off.cwiseProduct(v.tail(n - 1));
    out.tail(n - 1) += off.cwiseProduct(v.head(n - 1));
  }
  return out;
}

double TridiagonalComplexMatrix::norm_inf() const {
  const Eigen::Index n = dimension();
  double best = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double row = std::abs(diag[j]);
    if (j > 0) row += std::abs(off[j - 1]);
    if (j + 1 < n) row += std::abs(off[j]);
    best = std::max(best, row);
  }
  return best;
}

Eigen::MatrixXcd TridiagonalComplexMatrix::dense() const {
  const Eigen::Index n = dimension();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  a.diagonal() = diag;
  if (n > 1) {
    a.diagonal(1) = off;
    a.diagonal(-1) = off;
  }
  return a;
}

TridiagonalComplexMatrix discretize(const ClosedFormFunction& v, const Grid& g) {
  ComplexGridFunction samples = ComplexGridFunction::zeros(g);
  try {
    samples = sample(v, g);
  } catch (const NonFiniteSample& e) {
    throw PoleOnGrid(e.index, e.x);
  }
  const double h2 = g.spacing() * g.spacing();
  const auto n = Eigen::Index(g.size());
  TridiagonalComplexMatrix m;
  m.diag = samples.values().array() + 2.0 / h2;
  m.off = Eigen::VectorXcd::Constant(n - 1, -1.0 / h2);
  return m;
}

TridiagonalComplexMatrix discretize_consistent(const ComplexGridFunction& ground_state, double e0) {
  const auto& psi = ground_state.values();
  const Eigen::Index n = psi.size();
  const double h2 = ground_state.grid().spacing() * ground_state.grid().spacing();
  TridiagonalComplexMatrix m;
  m.diag.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (psi[j] == cplx(0.0)) {
      throw std::invalid_argument("ground state vanishes at node " + std::to_string(j));
    }
    const cplx left = j > 0 ? psi[j - 1] : cplx(0.0);
    const cplx right = j + 1 < n ? psi[j + 1] : cplx(0.0);
    // 2/h^2 + V_h collapses to this.
    m.diag[j] = e0 + (left + right) / (h2 * psi[j]);
  }
  m.off = Eigen::VectorXcd::Constant(n - 1, -1.0 / h2);
  return m;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// LU with partial pivoting of M - shift, stored as in LAPACK's gttrf.
class ShiftedLU {
 public:
  ShiftedLU(const TridiagonalComplexMatrix& m, cplx shift) : n_(m.dimension()) {
    d_ = m.diag.array() - shift;
    dl_ = m.off;
    du_ = m.off;
    du2_ = Eigen::VectorXcd::Zero(std::max<Eigen::Index>(n_ - 2, 0));
    swap_.assign(std::size_t(n_), false);
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != cplx(0.0)) {
          const cplx fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const cplx fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const cplx temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swap_[std::size_t(i)] = true;
      }
    }
    const double tiny = kEps * std::max(1.0, m.norm_inf());
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (std::abs(d_[i]) < tiny) d_[i] = tiny;
    }
  }

  Eigen::VectorXcd solve(Eigen::VectorXcd b) const {
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      if (!swap_[std::size_t(i)]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const cplx temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n_ - 1] /= d_[n_ - 1];
    if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
    for (Eigen::Index i = n_ - 3; i >= 0; --i) {
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
    return b;
  }

 private:
  Eigen::Index n_;
  Eigen::VectorXcd d_, dl_, du_, du2_;
  std::vector<bool> swap_;
};

// Bilinear (not sesquilinear) deflation: M is complex symmetric, so its left
// eigenvectors are the transposed right ones.
void deflate(Eigen::VectorXcd& x, const std::vector<Eigenpair>& found) {
  for (const auto& p : found) {
    const cplx norm = p.vector.transpose() * p.vector;
    if (std::abs(norm) < 1e-12 * p.vector.squaredNorm()) continue;
    x -= p.vector * (cplx(p.vector.transpose() * x) / norm);
  }
}

cplx rayleigh(const TridiagonalComplexMatrix& m, const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd mx = m.apply(x);
  const cplx xx = x.transpose() * x;
  if (std::abs(xx) > 1e-8 * x.squaredNorm()) return cplx(x.transpose() * mx) / xx;
  return x.dot(mx) / x.squaredNorm();
}

Eigen::VectorXcd start_vector(Eigen::Index n) {
  Eigen::VectorXcd x(n);
  for (Eigen::Index j = 0; j < n; ++j) x[j] = 1.0 + 0.25 * std::sin(0.7 * double(j) + 0.3);
  return x.normalized();
}

Eigenpair finish(const TridiagonalComplexMatrix& m, double norm, cplx lambda, Eigen::VectorXcd v, int it) {
  Eigenpair p;
  p.value = lambda;
  p.iterations = it;
  p.residual = (m.apply(v) - lambda * v).norm() / v.norm();
  p.backward_error = p.residual / norm;
  p.vector = std::move(v);
  return p;
}

Eigenpair iterate(const TridiagonalComplexMatrix& m, cplx seed, const std::vector<Eigenpair>& found,
                  std::size_t index, const EigenOptions& opts) {
  constexpr int kWarmup = 3;
  constexpr double kTarget = 1e-14;
  const double norm = std::max(m.norm_inf(), kEps);
  Eigen::VectorXcd x = start_vector(m.dimension());
  deflate(x, found);
  x.normalize();

  cplx shift = seed;
  double best = std::numeric_limits<double>::infinity();
  Eigenpair best_pair;
  int stalled = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const ShiftedLU lu(m, shift);
    Eigen::VectorXcd y = lu.solve(x);
    deflate(y, found);
    const double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0) break;
    x = y / ny;
    const cplx lambda = rayleigh(m, x);
    Eigenpair p = finish(m, norm, lambda, x, it);
    if (p.backward_error < best) {
      stalled = p.backward_error < 0.5 * best ? 0 : stalled + 1;
      best = p.backward_error;
      best_pair = std::move(p);
    } else {
      ++stalled;
    }
    if (best <= kTarget * 100.0 && (best <= kTarget || stalled >= 2)) break;
    if (it > kWarmup + 10 && stalled >= 3) break;
    if (it >= kWarmup) shift = lambda;
  }
  if (!(best <= opts.backward_tolerance)) {
    throw NoConvergence(index, "backward error " + std::to_string(best) + " after " +
                                   std::to_string(opts.max_iterations) + " iterations");
  }
  return best_pair;
}

bool by_real_then_imag(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

constexpr Eigen::Index kDenseLimit = 400;

std::vector<Eigenpair> dense_pairs(const TridiagonalComplexMatrix& m, int count, const EigenOptions& opts) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.dense());
  if (solver.info() != Eigen::Success) throw NoConvergence(0, "dense eigensolver failed");
  std::vector<Eigen::Index> order(std::size_t(m.dimension()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = Eigen::Index(i);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return by_real_then_imag(solver.eigenvalues()[a], solver.eigenvalues()[b]);
  });
  // Polish each pair; the dense values are accurate seeds.
  std::vector<Eigenpair> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(iterate(m, solver.eigenvalues()[order[std::size_t(i)]], out, std::size_t(i), opts));
  }
  return out;
}

double gershgorin_floor(const TridiagonalComplexMatrix& m) {
  const Eigen::Index n = m.dimension();
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    double r = 0.0;
    if (j > 0) r += std::abs(m.off[j - 1]);
    if (j + 1 < n) r += std::abs(m.off[j]);
    lo = std::min(lo, m.diag[j].real() - r);
  }
  return lo;
}

// Shift-invert subspace iteration from the Gershgorin floor with a
// Rayleigh-Ritz step per sweep; returns the `count` Ritz values of smallest
// real part, used as seeds.
std::vector<cplx> subspace_seeds(const TridiagonalComplexMatrix& m, int count, int max_sweeps) {
  const Eigen::Index n = m.dimension();
  const Eigen::Index b = std::min<Eigen::Index>(n, count + 4);
  const ShiftedLU lu(m, gershgorin_floor(m) - 1.0);
  Eigen::MatrixXcd x(n, b);
  for (Eigen::Index c = 0; c < b; ++c)
    for (Eigen::Index j = 0; j < n; ++j) x(j, c) = std::sin(0.37 * double((c + 1) * (j + 1))) + 0.1 * double(c);
  std::vector<cplx> ritz, prev;
  for (int sweep = 0; sweep < std::max(max_sweeps, 1) * 5; ++sweep) {
    for (Eigen::Index c = 0; c < b; ++c) x.col(c) = lu.solve(x.col(c));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
    x = qr.householderQ() * Eigen::MatrixXcd::Identity(n, b);
    Eigen::MatrixXcd mx(n, b);
    for (Eigen::Index c = 0; c < b; ++c) mx.col(c) = m.apply(x.col(c));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> small(x.adjoint() * mx, false);
    ritz.assign(small.eigenvalues().begin(), small.eigenvalues().end());
    std::sort(ritz.begin(), ritz.end(), by_real_then_imag);
    ritz.resize(std::size_t(count));
    if (!prev.empty()) {
      double change = 0.0;
      for (std::size_t i = 0; i < ritz.size(); ++i)
        change = std::max(change, std::abs(ritz[i] - prev[i]) / std::max(1.0, std::abs(ritz[i])));
      if (change < 1e-10) break;
    }
    prev = ritz;
  }
  return ritz;
}

}  // namespace

std::vector<Eigenpair> eigenpairs_lowest(const TridiagonalComplexMatrix& m, int count,
                                         const EigenOptions& opts) {
  if (count < 1 || count > m.dimension()) {
    throw std::invalid_argument("eigenvalue count must be in 1..dimension");
  }
  std::vector<Eigenpair> out;
  if (!opts.seeds.empty()) {
    if (opts.seeds.size() < std::size_t(count)) throw std::invalid_argument("one seed per eigenvalue");
    for (int i = 0; i < count; ++i) {
      out.push_back(iterate(m, opts.seeds[std::size_t(i)], out, std::size_t(i), opts));
    }
  } else if (m.dimension() <= kDenseLimit) {
    out = dense_pairs(m, count, opts);
  } else {
    const auto seeds = subspace_seeds(m, count, opts.max_iterations);
    for (int i = 0; i < count; ++i) out.push_back(iterate(m, seeds[std::size_t(i)], out, std::size_t(i), opts));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return by_real_then_imag(a.value, b.value); });
  return out;
}

std::vector<cplx> eigenvalues_lowest(const TridiagonalComplexMatrix& m, int count, const EigenOptions& opts) {
  std::vector<cplx> out;
  for (const auto& p : eigenpairs_lowest(m, count, opts)) out.push_back(p.value);
  return out;
}

std::vector<cplx> eigenvalues_characteristic(const TridiagonalComplexMatrix& m,
                                             const std::vector<cplx>& seeds, int max_iterations) {
  const Eigen::Index n = m.dimension();
  const double tiny = kEps * std::max(1.0, m.norm_inf());
  std::vector<cplx> roots;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    cplx lambda = seeds[s];
    bool converged = false;
    double prev_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iterations && !converged; ++it) {
      // r_j = p_j / p_{j-1},  t_j = r_j' ;  p_n'/p_n = sum t_j / r_j.
      cplx r = m.diag[0] - lambda;
      cplx t = -1.0;
      if (std::abs(r) < tiny) r = tiny;
      cplx logd = t / r;
      for (Eigen::Index j = 1; j < n; ++j) {
        const cplx o2 = m.off[j - 1] * m.off[j - 1];
        const cplx r_next = (m.diag[j] - lambda) - o2 / r;
        t = -1.0 + o2 * t / (r * r);
        r = std::abs(r_next) < tiny ? cplx(tiny) : r_next;
        logd += t / r;
      }
      for (const cplx mu : roots) logd -= 1.0 / (lambda - mu);
      cplx step = 1.0 / logd;
      const double cap = 1.0 + 0.1 * std::abs(lambda);
      if (std::abs(step) > cap) step *= cap / std::abs(step);
      lambda -= step;
      // Near the root the step settles at the rounding level of the recurrence.
      const double size = std::abs(step), scale = std::max(1.0, std::abs(lambda));
      converged = size <= 1e-13 * scale || (size <= 1e-9 * scale && size >= 0.5 * prev_step);
      prev_step = size;
    }
    if (!converged) throw NoConvergence(s, "characteristic-polynomial Newton did not converge");
    roots.push_back(lambda);
  }
  std::sort(roots.begin(), roots.end(), by_real_then_imag);
  return roots;
}

std::vector<ComplexGridFunction> eigenvectors_for(const TridiagonalComplexMatrix& m, const Grid& g,
                                                  const std::vector<cplx>& lambdas) {
  if (Eigen::Index(g.size()) != m.dimension()) throw std::invalid_argument("grid/matrix size mismatch");
  const double norm = std::max(m.norm_inf(), kEps);
  std::vector<ComplexGridFunction> out;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const ShiftedLU lu(m, lambdas[i]);
    Eigen::VectorXcd x = start_vector(m.dimension());
    double be = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 8 && be > 1e-13; ++it) {
      x = lu.solve(x);
      x.normalize();
      be = (m.apply(x) - lambdas[i] * x).norm() / norm;
    }
    if (!(be <= 1e-8)) throw NoConvergence(i, "inverse iteration residual " + std::to_string(be));
    out.push_back(normalize_state(ComplexGridFunction(g, x)));
  }
  return out;
}

double richardson(double e_h, double e_h2, int order) {
  const double f = std::ldexp(1.0, order);
  return (f * e_h2 - e_h) / (f - 1.0);
}

unsigned thread_limit() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PTSUSY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return unsigned(std::min<long>(v, 1024));
  }
  return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
  const std::size_t threads = std::min<std::size_t>(thread_limit(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::size_t order_check_size(std::size_t n) {
  std::size_t m = (n + 1) / 2;
  if (m % 2 == 0) --m;
  return m;
}

void summarize(SchemeResult& s, const std::vector<cplx>& third, double tol) {
  s.extrapolated.clear();
  s.error_estimates.clear();
  s.observed_order.clear();
  s.unstable = false;
  for (std::size_t j = 0; j < s.fine.size() && j < s.coarse.size(); ++j) {
    const double eh = s.coarse[j].real(), eh2 = s.fine[j].real();
    s.extrapolated.push_back(richardson(eh, eh2));
    s.error_estimates.push_back(std::abs(eh2 - eh) / 3.0);
    if (!(s.error_estimates.back() <= tol)) s.unstable = true;
    if (j < third.size()) {
      const double d1 = std::abs(third[j].real() - eh), d2 = std::abs(eh - eh2);
      s.observed_order.push_back(d2 > 0.0 ? std::log2(d1 / d2) : std::numeric_limits<double>::quiet_NaN());
    }
  }
}

std::vector<cplx> values_of(const std::vector<Eigenpair>& pairs) {
  std::vector<cplx> v;
  for (const auto& p : pairs) v.push_back(p.value);
  return v;
}

}  // namespace

SpectrumReport spectrum_report(const FamilyParams& p_in, int count, std::size_t n_grid, HierarchyMode mode) {
  if (mode != HierarchyMode::FixedK) throw UnsupportedMode("spectrum reports use fixed-k potentials");
  if (count < 1 || count > 8) throw UnsupportedParameters("level count must be in 1..8");
  if (n_grid < 21 || n_grid % 2 == 0) throw UnsupportedParameters("grid size must be odd and >= 21");
  const FamilyParams p = family(p_in.variant, p_in.k, p_in.q, p_in.n);

  SpectrumReport r;
  r.params = p;
  r.count = count;
  r.grid_sizes = {n_grid, 2 * n_grid - 1, order_check_size(n_grid)};

  const double k2 = p.k * p.k;
  std::vector<cplx> seeds1, seeds2;
  for (int j = 0; j < count; ++j) {
    const double level = double(p.n + j);
    r.target.push_back(k2 * (level * level - 1.0));
    seeds1.push_back(r.target.back());
    seeds2.push_back(k2 * ((level + 1.0) * (level + 1.0) - 1.0));
  }
  const int partner_count = std::max(count - 1, 1);
  seeds2.resize(std::size_t(partner_count));

  const PartnerPair pair = closed_form_potentials(p);
  const ClosedFormFunction v1 = on_symmetric_domain(pair.v1, p);
  const ClosedFormFunction v2 = on_symmetric_domain(pair.v2, p);
  const ClosedFormFunction psi0 = on_symmetric_domain(ground_state_wavefunction(p), p);
  const double hw = well_half_width(p);

  // Scheme s (consistent, pointwise, partner) on grid g.
  struct Slot {
    std::vector<Eigenpair> pairs;
    std::vector<cplx> characteristic;
    bool failed = false;
  };
  std::vector<Slot> slots(9);
  parallel_for(slots.size(), [&](std::size_t idx) {
    const std::size_t scheme = idx / 3, gi = idx % 3;
    const Grid g = Grid::symmetric(hw, r.grid_sizes[gi]);
    EigenOptions opts;
    Slot& slot = slots[idx];
    if (scheme == 0) {
      const auto m = discretize_consistent(sample(psi0, g), pair.e0);
      opts.seeds = seeds1;
      slot.pairs = eigenpairs_lowest(m, count, opts);
      if (gi == 1) slot.characteristic = eigenvalues_characteristic(m, seeds1);
    } else if (scheme == 1) {
      opts.seeds = seeds1;
      try {
        slot.pairs = eigenpairs_lowest(discretize(v1, g), count, opts);
      } catch (const NoConvergence&) {
        slot.failed = true;
      }
    } else {
      opts.seeds = seeds2;
      slot.pairs = eigenpairs_lowest(discretize(v2, g), partner_count, opts);
    }
  });

  auto fill = [&](SchemeResult& s, std::size_t scheme) {
    const Slot& c = slots[scheme * 3];
    const Slot& f = slots[scheme * 3 + 1];
    const Slot& t = slots[scheme * 3 + 2];
    if (c.failed || f.failed || t.failed) {
      s.unstable = true;
      return;
    }
    s.coarse = values_of(c.pairs);
    s.fine = values_of(f.pairs);
    summarize(s, values_of(t.pairs), r.stability_tolerance);
    for (const Slot* slot : {&c, &f, &t}) {
      for (const auto& e : slot->pairs) r.max_backward_error = std::max(r.max_backward_error, e.backward_error);
    }
  };
  fill(r.consistent, 0);
  const double consistent_backward = r.max_backward_error;
  fill(r.pointwise, 1);
  fill(r.partner, 2);
  // Only the asserted schemes count toward the certificate.
  r.max_backward_error = consistent_backward;
  for (std::size_t gi = 0; gi < 3; ++gi) {
    for (const auto& e : slots[6 + gi].pairs) r.max_backward_error = std::max(r.max_backward_error, e.backward_error);
  }

  for (int j = 0; j < count; ++j) {
    const auto u = std::size_t(j);
    r.eigenvalues.emplace_back(r.consistent.extrapolated[u], r.consistent.fine[u].imag());
    r.imag_max = std::max(r.imag_max, std::abs(r.consistent.fine[u].imag()));
    r.abs_errors.push_back(std::abs(r.consistent.extrapolated[u] - r.target[u]));
  }
  r.unstable = r.consistent.unstable;

  for (std::size_t j = 0; j + 1 < std::size_t(count) && j < r.partner.extrapolated.size(); ++j) {
    r.isospectral_defects.push_back(std::abs(r.partner.extrapolated[j] - r.consistent.extrapolated[j + 1]));
  }

  const auto& fine = r.consistent.fine;
  const auto& other = slots[1].characteristic;
  for (std::size_t j = 0; j < fine.size() && j < other.size(); ++j) {
    r.solver_agreement =
        std::max(r.solver_agreement, std::abs(fine[j] - other[j]) / std::max(1.0, std::abs(fine[j])));
  }

  for (std::size_t i = 0; i < fine.size(); ++i) {
    const double tol = 1e-6 * std::max(1.0, std::abs(fine[i].real()));
    if (std::abs(fine[i].imag()) <= tol) continue;
    bool paired = false;
    for (std::size_t j = 0; j < fine.size(); ++j) {
      if (j != i && std::abs(fine[j] - std::conj(fine[i])) <= tol) paired = true;
    }
    if (!paired) r.pt_paired = false;
  }
  return r;
}

}  // namespace ptsusy
