#pragma once

#include <Eigen/Dense>

#include "sixvertex/model.hpp"

namespace sixvertex {

inline constexpr int kMaxDenseLength = 10;  // 2^L state space, dense guard
inline constexpr double kConditionLimit = 1e8;
inline constexpr Complex kDefaultReferencePoint{0.4137, 0.2718};

/// Anti-periodic transfer matrix evaluated at one spectral point: the twisted
/// trace of the monodromy G R_{0L}(lambda - mu_L) ... R_{01}(lambda - mu_1)
/// with G the off-diagonal 2x2 flip.
struct TransferMatrix {
  int L = 0;
  Complex atLambda{};
  Eigen::MatrixXcd entries;
};

TransferMatrix build_transfer(const ModelParams& params, Complex lambda);

/// One-time eigendecomposition at a reference point. Branch identity across
/// lambda comes from the shared similarity transform, not from
/// re-diagonalizing: branch k at lambda is entry k of diag(V^-1 T(lambda) V).
struct SpectrumTable {
  ModelParams params;
  Complex referencePoint{};
  Eigen::VectorXcd eigenvalues;  // at the reference point, sorted
  Eigen::MatrixXcd V;            // right eigenvectors, columns ordered like eigenvalues
  Eigen::MatrixXcd Vinv;
  double conditioning = 0.0;     // 2-norm condition number of V
  double referenceLeakage = 0.0; // off-diagonal mass of V^-1 T(ref) V, relative

  int branchCount() const { return static_cast<int>(eigenvalues.size()); }
};

/// Diagonalizes T at the given reference point. Branches are ordered by
/// descending |Lambda| with a deterministic (re, im) tie-break. Throws
/// DEGENERATE_SPECTRUM when cond(V) exceeds kConditionLimit.
SpectrumTable diagonalize(const ModelParams& params, Complex referencePoint);

/// Same, starting from the fixed default reference point and shifting it a
/// few times if conditioning fails, for deterministic reproducibility.
SpectrumTable diagonalize_auto(const ModelParams& params);

/// All 2^L branch eigenvalues at lambda; optionally reports the off-diagonal
/// leakage of V^-1 T(lambda) V relative to its diagonal, globally and per
/// branch.
Eigen::VectorXcd eigenvalues_at(const SpectrumTable& table, Complex lambda,
                                double* leakage = nullptr,
                                std::vector<double>* branchLeakage = nullptr);

/// Single-branch eigenvalue at lambda; leakage is for that branch's column.
Complex eigenvalue_at(const SpectrumTable& table, int branch, Complex lambda,
                      double* leakage = nullptr);

}  // namespace sixvertex
