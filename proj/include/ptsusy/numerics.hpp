#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ptsusy/analytic.hpp"
#include "ptsusy/closed_form.hpp"
#include "ptsusy/grid.hpp"

namespace ptsusy {

/// Complex symmetric tridiagonal matrix: diag (n entries), off (n - 1
/// entries) used for both the sub- and the super-diagonal.
struct TridiagonalComplexMatrix {
  Eigen::VectorXcd diag;
  Eigen::VectorXcd off;

  Eigen::Index dimension() const { return diag.size(); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  /// Max absolute row sum.
  double norm_inf() const;
  Eigen::MatrixXcd dense() const;
};

/// diag_j = 2/h^2 + V(x_j), off = -1/h^2.  Throws PoleOnGrid.
TridiagonalComplexMatrix discretize(const ClosedFormFunction& v, const Grid& g);

/// Same Laplacian, with the potential replaced by the one the sampled ground
/// state solves exactly on the grid:
///   V_h(x_j) = e0 + (psi_{j-1} - 2 psi_j + psi_{j+1}) / (h^2 psi_j),  psi at the walls = 0.
/// The samples of psi0 are then an exact eigenvector with eigenvalue e0.
/// Needed when V has a limit-circle wall singularity (V1 with q != 0),
/// where pointwise sampling of V does not converge.
TridiagonalComplexMatrix discretize_consistent(const ComplexGridFunction& ground_state, double e0 = 0.0);

struct Eigenpair {
  cplx value;
  Eigen::VectorXcd vector;
  /// ||M v - lambda v|| / (||M||_inf ||v||)
  double backward_error = 0.0;
  /// ||M v - lambda v|| / ||v||
  double residual = 0.0;
  int iterations = 0;
};

struct EigenOptions {
  /// Initial shifts, one per wanted eigenvalue.  Empty: dense solve for
  /// small matrices, otherwise shift-invert subspace iteration from the
  /// Gershgorin bound supplies them.
  std::vector<cplx> seeds;
  int max_iterations = 100;
  double backward_tolerance = 1e-8;
};

/// Shifted inverse / Rayleigh-quotient iteration on an O(n) tridiagonal LU,
/// with bilinear deflation of pairs already found.  Sorted by real part,
/// ties by imaginary part.  Throws NoConvergence.
std::vector<Eigenpair> eigenpairs_lowest(const TridiagonalComplexMatrix& m, int count,
                                         const EigenOptions& opts = {});
std::vector<cplx> eigenvalues_lowest(const TridiagonalComplexMatrix& m, int count,
                                     const EigenOptions& opts = {});

/// Newton on det(M - lambda) through the three-term ratio recurrence with
/// Maehly deflation; one root per seed.  Independent of the iteration above.
std::vector<cplx> eigenvalues_characteristic(const TridiagonalComplexMatrix& m,
                                             const std::vector<cplx>& seeds, int max_iterations = 100);

/// Inverse iteration at each shift; normalized with the phase convention of
/// normalize_state.  Throws NoConvergence.
std::vector<ComplexGridFunction> eigenvectors_for(const TridiagonalComplexMatrix& m, const Grid& g,
                                                  const std::vector<cplx>& lambdas);

/// (2^order e_h2 - e_h) / (2^order - 1).
double richardson(double e_h, double e_h2, int order = 2);

struct SchemeResult {
  std::vector<cplx> coarse;        ///< grid_sizes[0]
  std::vector<cplx> fine;          ///< grid_sizes[1]
  std::vector<double> extrapolated;
  /// |Re fine - Re coarse| / 3 per level
  std::vector<double> error_estimates;
  /// log2 ratio of successive differences with a third, coarser grid
  std::vector<double> observed_order;
  bool unstable = false;
};

struct SpectrumReport {
  FamilyParams params;
  int count = 0;
  std::vector<std::size_t> grid_sizes;  ///< {coarse, fine, order-check}
  /// H1 through the consistent discretization; real parts extrapolated,
  /// imaginary parts from the fine grid.
  std::vector<cplx> eigenvalues;
  double imag_max = 0.0;
  std::vector<double> target;
  std::vector<double> abs_errors;
  bool extrapolated = true;
  bool unstable = false;
  double stability_tolerance = 1e-3;
  SchemeResult consistent;
  /// H1 with V1 sampled pointwise; diagnostic only.
  SchemeResult pointwise;
  /// H2 with V2 sampled pointwise (its walls are regular enough).
  SchemeResult partner;
  /// |spec(V2)[j] - spec(V1)[j+1]| for the extrapolated real parts.
  std::vector<double> isospectral_defects;
  /// Max relative gap between the two eigenvalue methods on the fine H1 grid.
  double solver_agreement = 0.0;
  double max_backward_error = 0.0;
  /// Every eigenvalue with |Im| above tolerance has a conjugate partner.
  bool pt_paired = true;
};

/// Levels E_j = k^2 ((n + j)^2 - 1), j < count, on grids of n_grid and
/// 2 n_grid - 1 interior nodes (and (n_grid + 1) / 2 - 1 for the order
/// estimate).  FixedK potentials only.
SpectrumReport spectrum_report(const FamilyParams& p, int count, std::size_t n_grid = 2001,
                               HierarchyMode mode = HierarchyMode::FixedK);

/// Runs tasks on up to PTSUSY_THREADS threads (default: hardware
/// concurrency).  The first failing task's exception, by index, is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);
unsigned thread_limit();

}  // namespace ptsusy
