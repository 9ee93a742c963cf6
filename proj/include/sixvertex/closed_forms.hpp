#pragma once

#include <functional>
#include <vector>

#include "sixvertex/model.hpp"

namespace sixvertex {

/// One closed-form eigenvalue branch of the anti-periodic transfer matrix,
/// together with the sign of its normalization constant kappa0.
struct ClosedFormBranch {
  double kappa0Sign = 0.0;
  std::function<Complex(Complex)> eigenvalue;
};

/// The four L=2 branches in closed form (generic gamma, mu1, mu2).
std::vector<ClosedFormBranch> l2_spectrum_closed_form(const ModelParams& params);

/// The eight L=3 branches in closed form; valid for mu_j = 0 only.
std::vector<ClosedFormBranch> l3_spectrum_closed_form_homogeneous_mu(const ModelParams& params);

/// Two-configuration closed form of Z for L = 2.
Complex z2_closed_form(const ModelParams& params, Complex l0, Complex l1);

/// Seven-term closed form of Z for L = 3 at mu_j = 0.
Complex z3_closed_form_homogeneous_mu(const ModelParams& params, Complex l0, Complex l1, Complex l2);

/// Z at the diagonal point lambda_i = mu_i: c^L prod_{i<j} a(mu_i-mu_j) a(mu_j-mu_i).
Complex z_diagonal_point(const ModelParams& params);

/// Greedy bijective nearest-value matching: result[k] is the reference index
/// assigned to computed[k]. Sizes must agree.
std::vector<int> nearest_value_matching(const std::vector<Complex>& computed,
                                        const std::vector<Complex>& reference);

}  // namespace sixvertex
