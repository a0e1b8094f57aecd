#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace riverdg {

using Scalar = double;

using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
using Index = Eigen::Index;

/// Base class for all runtime failures of the numerical pipeline.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Water height dropped below the admissible floor (no wetting/drying here).
struct DryStateError : NumericalError {
  DryStateError(Scalar time, Index cell)
      : NumericalError("dry state: h <= 0 at t=" + std::to_string(time) +
                       ", cell " + std::to_string(cell)),
        time(time), cell(cell) {}
  Scalar time;
  Index cell;
};

/// The adjoint boundary matrix A^T is singular (critical flow u^2 = g h).
struct SingularBoundaryError : NumericalError {
  explicit SingularBoundaryError(Scalar time)
      : NumericalError("adjoint boundary matrix singular (critical flow) at t=" +
                       std::to_string(time)),
        time(time) {}
  Scalar time;
};

struct DimensionError : NumericalError {
  using NumericalError::NumericalError;
};

struct InterpolationRangeError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace riverdg
