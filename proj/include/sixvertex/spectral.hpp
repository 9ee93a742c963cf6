#pragma once

#include <Eigen/Dense>

#include <vector>

#include "sixvertex/model.hpp"
#include "sixvertex/transfer.hpp"

namespace sixvertex {

/// One block level of the variable vector. Level m (m = L..2) holds the
/// functions with L - m arguments: for even m the removed tuples run over the
/// full index set 0..L-1 with m entries, for odd m over the tail 1..L-1 with
/// m - 1 entries. Tuples are ordered lexicographically within a level.
struct LayoutLevel {
  int m = 0;
  GroundSet ground = GroundSet::Full;
  int removedSize = 0;
  int offset = 0;
  std::vector<std::vector<int>> removed;
  std::vector<std::vector<int>> args;  // complements, i.e. argument index sets
};

struct VariableLayout {
  int L = 0;
  int total = 0;
  std::vector<LayoutLevel> levels;  // ordered m = L, L-1, ..., 2

  const LayoutLevel& level(int m) const;
  bool hasLevel(int m) const { return m >= 2 && m <= L; }
  /// Global column of the level-m variable whose argument set is `argumentSet`.
  int columnOf(int m, const std::vector<int>& argumentSet) const;
};

/// Variable ordering for the block system; requires L >= 3 (L = 2 has its own
/// two-by-two formula). Total size is 3 * 2^(L-2) - 2.
VariableLayout build_layout(int L);

struct HMatrix {
  Eigen::MatrixXcd entries;
  int branch = 0;
  VariableLayout layout;
  double conditionEstimate = 0.0;
};

/// Shares the branch-independent work of assembling H across the 2^L
/// branches at one parameter point: kernel coefficients and the eigenvalue
/// tables at the lambdas and mus are computed once.
class HBuilder {
 public:
  HBuilder(const ModelParams& params, const SpectralPoints& points, const SpectrumTable& spectrum);

  const VariableLayout& layout() const { return layout_; }
  int branchCount() const { return static_cast<int>(eigsAtPoints_.rows()); }

  HMatrix build(int branch) const;
  Complex kappa0(int branch) const;
  /// kappa0 * det(H) for one branch; optionally reports the LU condition estimate.
  Complex zValue(int branch, double* conditionEstimate = nullptr) const;

 private:
  struct Stamp {
    int row = 0;
    int col = 0;
    Complex constant{};     // branch-independent part
    Complex lambdaCoeff{};  // coefficient of Lambda(lambda_{lambdaIndex})
    int lambdaIndex = -1;
    bool lambda01 = false;  // adds Lambda(lambda_0) Lambda(lambda_1)
  };

  void assemble_stamps(const ModelParams& params, const SpectralPoints& points);
  void verify_block_structure() const;

  VariableLayout layout_;
  std::vector<Stamp> stamps_;
  Eigen::VectorXcd refEigs_;       // branch eigenvalues at the reference point
  Eigen::MatrixXcd eigsAtPoints_;  // branch x point index
  Eigen::MatrixXcd eigsAtMu_;
  Complex kappaNumerator_{};
};

/// Matrix of the determinant representation for one eigenvalue branch (L >= 3).
HMatrix build_H(const ModelParams& params, const SpectralPoints& points,
                const SpectrumTable& spectrum, int branch);

/// Normalization c^L prod_{i<j} a(mu_i - mu_j) a(mu_j - mu_i) / prod_i Lambda(mu_i).
Complex kappa0(const ModelParams& params, const SpectrumTable& spectrum, int branch);

/// Z = kappa0 det(H_L); for L = 2 the dedicated two-by-two formula.
Complex z_spectral(const ModelParams& params, const SpectralPoints& points,
                   const SpectrumTable& spectrum, int branch);

/// Z for every branch at once (shared assembly).
Eigen::VectorXcd z_spectral_all_branches(const ModelParams& params, const SpectralPoints& points,
                                         const SpectrumTable& spectrum);

/// Max pairwise |Z_k - Z_k'| over branches, relative to the median |Z|.
double branch_invariance(const ModelParams& params, const SpectralPoints& points,
                         const SpectrumTable& spectrum);

/// Everything the zvalue CLI and the verify battery want per branch.
struct BranchZ {
  int branch = 0;
  Complex kappa0{};
  Complex detH{};
  Complex z{};
  double conditionEstimate = 0.0;
};

std::vector<BranchZ> z_spectral_report(const ModelParams& params, const SpectralPoints& points,
                                       const SpectrumTable& spectrum);

}  // namespace sixvertex
