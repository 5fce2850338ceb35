#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptsusy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampled value was NaN or infinite; usually a pole sits on a grid node.
class NonFiniteSample : public Error {
 public:
  NonFiniteSample(std::size_t index, double x)
      : Error("non-finite sample at node " + std::to_string(index) + " (x=" + std::to_string(x) +
              "); shift the node count by one to move nodes off the pole"),
        index(index),
        x(x) {}
  std::size_t index;
  double x;
};

/// Same failure as NonFiniteSample, raised by operator application.
class PoleOnGrid : public Error {
 public:
  PoleOnGrid(std::size_t index, double x)
      : Error("pole on grid node " + std::to_string(index) + " (x=" + std::to_string(x) + ")"),
        index(index),
        x(x) {}
  std::size_t index;
  double x;
};

class EvaluationAtZero : public Error {
 public:
  explicit EvaluationAtZero(double x)
      : Error("log-derivative evaluated at a zero of the wavefunction (x=" + std::to_string(x) + ")"),
        x(x) {}
  double x;
};

class UnsupportedParameters : public Error {
 public:
  using Error::Error;
};

class UnsupportedMode : public Error {
 public:
  using Error::Error;
};

class BranchViolation : public Error {
 public:
  explicit BranchViolation(double x)
      : Error("logarithm argument not positive at x=" + std::to_string(x)), x(x) {}
  double x;
};

class PoleOnPath : public Error {
 public:
  explicit PoleOnPath(double pole)
      : Error("integration path crosses a pole at x=" + std::to_string(pole)), pole(pole) {}
  double pole;
};

class AsymmetricGrid : public Error {
 public:
  AsymmetricGrid() : Error("operation requires a grid symmetric about 0") {}
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("grid functions live on different grids") {}
};

class DivergentNorm : public Error {
 public:
  explicit DivergentNorm(double integral)
      : Error("normalization integral diverges (" + std::to_string(integral) + ")"),
        integral(integral) {}
  double integral;
};

class NoConvergence : public Error {
 public:
  NoConvergence(std::size_t index, const std::string& what)
      : Error("no convergence for eigenpair " + std::to_string(index) + ": " + what), index(index) {}
  std::size_t index;
};

}  // namespace ptsusy
