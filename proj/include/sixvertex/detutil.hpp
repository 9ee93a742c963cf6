#pragma once

#include <Eigen/Dense>

#include "sixvertex/types.hpp"

namespace sixvertex {

struct ScaledDet {
  Complex det{};
  double conditionEstimate = 0.0;
};

/// Determinant of a dense complex matrix via full-pivot LU after exact
/// powers-of-two row/column equilibration, with a first-order residual
/// correction; accumulated as mantissa times 2^exponent so the scaling
/// cannot overflow. Accurate to the sensitivity of the entries themselves.
ScaledDet lu_det_equilibrated(Eigen::MatrixXcd h);

}  // namespace sixvertex
