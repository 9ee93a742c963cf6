#pragma once

#include <span>

#include "sixvertex/model.hpp"

namespace sixvertex {

/// Ordered argument tuple (lambda_0, ..., lambda_n) for the coefficient
/// functions, plus the model data supplying gamma and the mu-product range.
struct KernelArgs {
  std::span<const Complex> lambda;  // n + 1 entries
  const ModelParams& params;
};

/// Coefficient M_i^{(n)} of the functional system: two-term sum with c/b
/// prefactor, a/b cross products over the spectators k != i, and the full
/// product of a(.-mu_l) b(.-mu_l) over the L inhomogeneities. Term two is
/// term one with lambda_0 and lambda_i exchanged.
Complex coeff_M(int n, int i, const KernelArgs& args);

/// Coefficient N_{j,i}^{(n)}: c/a prefactors, spectator products over
/// k = 0..n with k != i, j. Term two is term one under lambda_i <-> lambda_j.
Complex coeff_N(int n, int j, int i, const KernelArgs& args);

/// Pole-free closed form of M_1^{(1)} valid for L = 2 only; also usable at
/// coinciding arguments (homogeneous limit).
Complex m1_closed_form_l2(const ModelParams& params, Complex l0, Complex l1);

}  // namespace sixvertex
