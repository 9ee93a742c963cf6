#include "sixvertex/closed_forms.hpp"

#include <cmath>
#include <limits>

namespace sixvertex {

std::vector<ClosedFormBranch> l2_spectrum_closed_form(const ModelParams& params) {
  if (params.L != 2) fail(Errc::Precondition, "L=2 closed forms need L = 2");
  const Complex g = params.gamma;
  const Complex m1 = params.mu[0], m2 = params.mu[1];
  const Complex c = std::sinh(g);
  const Complex sPlus = std::sqrt(2.0) * c * std::sqrt(std::cosh(g) + std::cosh(m1 - m2));
  const Complex sMinus = Complex(0, 1) * std::sqrt(2.0) * c *
                         std::sqrt(std::cosh(g) - std::cosh(m1 - m2));
  auto half = [=](Complex l) { return 0.5 * (g - m1 - m2 + 2.0 * l); };
  std::vector<ClosedFormBranch> out;
  out.push_back({+1.0, [=](Complex l) { return sPlus * std::sinh(half(l)); }});
  out.push_back({+1.0, [=](Complex l) { return -sPlus * std::sinh(half(l)); }});
  out.push_back({-1.0, [=](Complex l) { return sMinus * std::cosh(half(l)); }});
  out.push_back({-1.0, [=](Complex l) { return -sMinus * std::cosh(half(l)); }});
  return out;
}

std::vector<ClosedFormBranch> l3_spectrum_closed_form_homogeneous_mu(const ModelParams& params) {
  if (params.L != 3) fail(Errc::Precondition, "L=3 closed forms need L = 3");
  for (const Complex& m : params.mu)
    if (std::abs(m) > 0) fail(Errc::Precondition, "L=3 closed forms are valid at mu_j = 0 only");
  const Complex g = params.gamma;
  const Complex c = std::sinh(g);
  const Complex i{0, 1};
  const Complex r3 = std::sqrt(3.0);
  const Complex root = 2.0 * std::sqrt(2.0) * std::sqrt(std::cosh(2.0 * g) + 7.0);

  auto c2gl = [=](Complex l) { return std::cosh(2.0 * (g + l)); };
  auto c2l = [=](Complex l) { return std::cosh(2.0 * l); };
  auto ss = [=](Complex l) { return std::sinh(l) * std::sinh(g + l); };

  std::vector<ClosedFormBranch> out;
  out.push_back({+1.0, [=](Complex l) {
                   return 0.25 * c * (-(1.0 + i * r3) * c2gl(l) + i * (r3 + i) * c2l(l) + 2.0);
                 }});
  out.push_back({-1.0, [=](Complex l) {
                   return 0.25 * c * ((1.0 - i * r3) * c2gl(l) + (1.0 + i * r3) * c2l(l) - 2.0);
                 }});
  out.push_back({+1.0, [=](Complex l) {
                   return 0.25 * c * (i * (r3 + i) * c2gl(l) - (1.0 + i * r3) * c2l(l) + 2.0);
                 }});
  out.push_back({-1.0, [=](Complex l) {
                   return 0.25 * c * ((1.0 + i * r3) * c2gl(l) + (1.0 - i * r3) * c2l(l) - 2.0);
                 }});
  out.push_back({+1.0, [=](Complex l) {
                   return 0.25 * c * (c2gl(l) - root * ss(l) + std::cosh(2.0 * g) + c2l(l) - 3.0);
                 }});
  out.push_back({-1.0, [=](Complex l) {
                   return -0.25 * c * (c2gl(l) + root * ss(l) + std::cosh(2.0 * g) + c2l(l) - 3.0);
                 }});
  out.push_back({+1.0, [=](Complex l) {
                   return 0.25 * c * (c2gl(l) + root * ss(l) + std::cosh(2.0 * g) + c2l(l) - 3.0);
                 }});
  out.push_back({-1.0, [=](Complex l) {
                   return -0.25 * c * (c2gl(l) - root * ss(l) + std::cosh(2.0 * g) + c2l(l) - 3.0);
                 }});
  return out;
}

Complex z2_closed_form(const ModelParams& params, Complex l0, Complex l1) {
  if (params.L != 2) fail(Errc::Precondition, "z2_closed_form needs L = 2");
  const Complex c = weight_c(params);
  const Complex m1 = params.mu[0], m2 = params.mu[1];
  return c * c * (weight_b(l0 - m1) * weight_b(l1 - m2) +
                  weight_a(l0 - m2, params) * weight_a(l1 - m1, params));
}

Complex z3_closed_form_homogeneous_mu(const ModelParams& params, Complex l0, Complex l1, Complex l2) {
  if (params.L != 3) fail(Errc::Precondition, "z3_closed_form needs L = 3");
  for (const Complex& m : params.mu)
    if (std::abs(m) > 0) fail(Errc::Precondition, "z3_closed_form is valid at mu_j = 0 only");
  const Complex c = weight_c(params);
  const Complex a0 = weight_a(l0, params), a1 = weight_a(l1, params), a2 = weight_a(l2, params);
  const Complex b0 = weight_b(l0), b1 = weight_b(l1), b2 = weight_b(l2);
  return c * c * c *
         (c * c * a0 * a2 * b0 * b2 + a0 * a1 * b0 * b1 * b2 * b2 +
          a0 * a1 * a2 * a2 * b0 * b1 + a1 * a2 * b0 * b0 * b1 * b2 +
          a0 * a0 * a1 * a2 * b1 * b2 + a0 * a0 * a1 * a1 * a2 * a2 +
          b0 * b0 * b1 * b1 * b2 * b2);
}

Complex z_diagonal_point(const ModelParams& params) {
  Complex z = std::pow(weight_c(params), params.L);
  for (int i = 0; i < params.L; ++i)
    for (int j = i + 1; j < params.L; ++j)
      z *= weight_a(params.mu[i] - params.mu[j], params) *
           weight_a(params.mu[j] - params.mu[i], params);
  return z;
}

std::vector<int> nearest_value_matching(const std::vector<Complex>& computed,
                                        const std::vector<Complex>& reference) {
  if (computed.size() != reference.size())
    fail(Errc::Precondition, "matching needs equally sized lists");
  const int n = static_cast<int>(computed.size());
  std::vector<int> match(n, -1);
  std::vector<bool> usedC(n, false), usedR(n, false);
  for (int step = 0; step < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    int bc = -1, br = -1;
    for (int c = 0; c < n; ++c) {
      if (usedC[c]) continue;
      for (int r = 0; r < n; ++r) {
        if (usedR[r]) continue;
        const double d = std::abs(computed[c] - reference[r]);
        if (d < best) {
          best = d;
          bc = c;
          br = r;
        }
      }
    }
    usedC[bc] = usedR[br] = true;
    match[bc] = br;
  }
  return match;
}

}  // namespace sixvertex
