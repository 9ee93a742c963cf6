#include "sixvertex/kernels.hpp"

#include <string>

#include "sixvertex/compensated.hpp"

namespace sixvertex {

namespace {

void check_args(int n, const KernelArgs& args) {
  if (static_cast<int>(args.lambda.size()) != n + 1)
    fail(Errc::Precondition, "kernel tuple must have n+1 entries");
  if (n > args.params.L) fail(Errc::Precondition, "kernel order n exceeds L");
  if (min_separation(args.lambda) < args.params.separationTol)
    fail(Errc::Separation, "kernel arguments closer than the separation tolerance");
}

}  // namespace

// The coefficients are long products with near-cancelling term pairs, and the
// determinant downstream is sensitive to their last digits; numerator and
// denominator are accumulated double-double and divided with one correction.

Complex coeff_M(int n, int i, const KernelArgs& args) {
  if (i < 1 || i > n) fail(Errc::IndexRange, "coeff_M needs 1 <= i <= n");
  check_args(n, args);
  const ModelParams& p = args.params;
  const auto lam = args.lambda;
  const Complex c = weight_c(p);

  // One term with (p, q) = (i, 0); the second is the same under the swap.
  auto term = [&](int pi, int qi) {
    DDComplex num = DDComplex::from(c);
    DDComplex den = DDComplex::from(weight_b(lam[pi] - lam[qi]));
    for (int k = 1; k <= n; ++k) {
      if (k == i) continue;
      num = ddc_mul(num, weight_a(lam[pi] - lam[k], p));
      num = ddc_mul(num, weight_a(lam[k] - lam[qi], p));
      den = ddc_mul(den, weight_b(lam[pi] - lam[k]));
      den = ddc_mul(den, weight_b(lam[k] - lam[qi]));
    }
    for (const Complex& m : p.mu) {
      num = ddc_mul(num, weight_a(lam[qi] - m, p));
      num = ddc_mul(num, weight_b(lam[pi] - m));
    }
    return ddc_div(num, den);
  };
  return ddc_add(term(i, 0), term(0, i)).value();
}

Complex coeff_N(int n, int j, int i, const KernelArgs& args) {
  if (!(1 <= i && i < j && j <= n)) fail(Errc::IndexRange, "coeff_N needs 1 <= i < j <= n");
  check_args(n, args);
  const ModelParams& p = args.params;
  const auto lam = args.lambda;
  const Complex c = weight_c(p);

  for (int t : {i, j}) {
    if (std::abs(weight_a(lam[t] - lam[0], p)) < p.separationTol ||
        std::abs(weight_a(lam[0] - lam[t], p)) < p.separationTol)
      fail(Errc::PoleProximity, "a-denominator near zero in coeff_N");
  }

  // One term with (ji, ii) = (j, i); the second is the same under i <-> j.
  auto term = [&](int ji, int ii) {
    DDComplex num = ddc_mul(DDComplex::from(c), c);
    num = ddc_mul(num, weight_a(lam[ji] - lam[ii], p));
    DDComplex den = DDComplex::from(weight_a(lam[ji] - lam[0], p));
    den = ddc_mul(den, weight_a(lam[0] - lam[ii], p));
    den = ddc_mul(den, weight_b(lam[ji] - lam[ii]));
    for (int k = 0; k <= n; ++k) {
      if (k == i || k == j) continue;
      num = ddc_mul(num, weight_a(lam[ji] - lam[k], p));
      num = ddc_mul(num, weight_a(lam[k] - lam[ii], p));
      den = ddc_mul(den, weight_b(lam[ji] - lam[k]));
      den = ddc_mul(den, weight_b(lam[k] - lam[ii]));
    }
    for (const Complex& m : p.mu) {
      num = ddc_mul(num, weight_a(lam[ii] - m, p));
      num = ddc_mul(num, weight_b(lam[ji] - m));
    }
    return ddc_div(num, den);
  };
  return ddc_add(term(j, i), term(i, j)).value();
}

Complex m1_closed_form_l2(const ModelParams& params, Complex l0, Complex l1) {
  if (params.L != 2) fail(Errc::Precondition, "m1_closed_form_l2 requires L = 2");
  const Complex c = weight_c(params);
  Complex bracket = std::cosh(l0 - l1 + params.gamma) + std::cosh(l1 - l0 + params.gamma);
  for (const Complex& m : params.mu) bracket -= std::cosh(l0 + l1 + params.gamma - 2.0 * m);
  return -0.5 * c * c * bracket;
}

}  // namespace sixvertex
