#pragma once

#include <cstdint>

#include "sixvertex/model.hpp"
#include "sixvertex/transfer.hpp"

namespace sixvertex {

inline constexpr int kMaxEnumerateLength = 6;
inline constexpr int kMaxContractLength = 12;

enum class OracleMethod { Enumeration, Contraction, Izergin, ClosedFormL2, ClosedFormL3Hom };

struct CostInfo {
  std::uint64_t configurations = 0;
  std::uint64_t flops = 0;
};

struct OracleResult {
  Complex value{};
  OracleMethod method{};
  CostInfo cost{};
};

/// Sum over all domain-wall ice configurations. Enumerates the vertical-edge
/// bitmasks between rows (after r rows exactly r arrows reversed) and scans
/// each row for its unique admissible horizontal completion.
OracleResult z_enumerate(const ModelParams& params, const SpectralPoints& points);

/// Z as the all-down projection of L creation operators applied to the
/// all-up state; the operators are the off-diagonal monodromy blocks built
/// from the same R-weights as the transfer matrix.
OracleResult z_contract(const ModelParams& params, const SpectralPoints& points);

/// Izergin determinant: prefactor times det of the Cauchy-like matrix with
/// entries c / (a(lambda_i - mu_j) b(lambda_i - mu_j)).
OracleResult z_izergin(const ModelParams& params, const SpectralPoints& points);

/// Specialization identity Z_L -> Z_{L-1} at lambda_i = mu_j - gamma.
/// `factorPinned` is the verified prefactor c prod_{m != j} b(lambda_i - mu_m)
/// prod_{l != i} b(lambda_l - mu_j) with mu_j dropped from the reduced model;
/// `factorPrinted` evaluates the unrestricted double product for comparison.
struct KorepinCheck {
  Complex zL{};
  Complex zLminus1{};
  Complex factorPinned{};
  Complex factorPrinted{};
  double residualPinned = 0.0;
  double residualPrinted = 0.0;
};

KorepinCheck korepin_check(const ModelParams& params, const SpectralPoints& points, int i, int j);

/// Residual of the pinned recurrence, |Z_L - factor Z_{L-1}| / |Z_L|.
double korepin_residual(const ModelParams& params, const SpectralPoints& points, int i, int j);

/// Pole-free homogeneous-limit value kappa0 [Lambda(lambda)^2 - M_1^(1)(lambda, lambda)],
/// valid for L = 2 only.
Complex homogeneous_z2(const ModelParams& params, Complex lambda, const SpectrumTable& spectrum,
                       int branch);

}  // namespace sixvertex
